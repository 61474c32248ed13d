//! Brute-force reference answers for small instances. Nothing here calls the
//! extraction code; only the data types are shared.

use std::collections::HashSet;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hyper::Hypergraph;
use crate::rational::Rational;
use crate::tournament::Tournament;
use crate::vc::SetFamily;
use crate::vertex_set::VertexSet;

pub const MAX_CLIQUE_N: usize = 25;
pub const MAX_TRANSITIVE_N: usize = 20;
pub const MAX_TRANSITIVE_SCAN_N: usize = 16;
pub const MAX_HYPER_N: usize = 14;
pub const MAX_PARTITION_N: usize = 8;
pub const MAX_VC_UNIVERSE: usize = 20;
pub const MAX_BI_INDUCED_N: usize = 12;

fn cap(what: &str, n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::refused(format!(
            "{what} oracle is capped at {max} vertices, got {n}"
        )));
    }
    Ok(())
}

fn mask_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_iter_in(n, (0..n).filter(|&v| mask >> v & 1 == 1))
}

/// Exact maxima with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueStable {
    pub clique: VertexSet,
    pub stable: VertexSet,
}

/// Maximum clique and maximum stable set by branch and bound with a greedy
/// colouring bound.
pub fn max_clique_stable_exact(g: &Graph) -> Result<CliqueStable> {
    let n = g.n();
    cap("clique", n, MAX_CLIQUE_N)?;
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| g.has_edge(u, v))
                .fold(0, |m, u| m | 1 << u)
        })
        .collect();
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let non: Vec<u32> = (0..n).map(|v| !adj[v] & full & !(1 << v)).collect();
    let clique = mask_set(n, max_clique_mask(&adj, full));
    let stable = mask_set(n, max_clique_mask(&non, full));
    debug_assert!(g.is_clique(&clique) && g.is_stable(&stable));
    Ok(CliqueStable { clique, stable })
}

fn max_clique_mask(adj: &[u32], full: u32) -> u32 {
    let mut best = 0;
    expand(adj, 0, full, &mut best);
    best
}

fn expand(adj: &[u32], r: u32, mut p: u32, best: &mut u32) {
    if p == 0 {
        if r.count_ones() > best.count_ones() {
            *best = r;
        }
        return;
    }
    let (order, colours) = colour_sort(adj, p);
    for idx in (0..order.len()).rev() {
        if r.count_ones() + colours[idx] <= best.count_ones() {
            return;
        }
        let v = order[idx];
        expand(adj, r | 1 << v, p & adj[v], best);
        p &= !(1 << v);
    }
    if r.count_ones() > best.count_ones() {
        *best = r;
    }
}

/// Vertices of `p` ordered by greedy colour class, with the class number (from 1).
fn colour_sort(adj: &[u32], mut p: u32) -> (Vec<usize>, Vec<u32>) {
    let mut order = Vec::new();
    let mut colours = Vec::new();
    let mut c = 0;
    while p != 0 {
        c += 1;
        let mut avail = p;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !adj[v] & !(1 << v);
            p &= !(1 << v);
            order.push(v);
            colours.push(c);
        }
    }
    (order, colours)
}

/// Largest transitive subtournament by subset dynamic programming: a set is
/// transitive iff it has a vertex beating all others and the rest is transitive.
pub fn max_transitive_exact(q: &Tournament) -> Result<VertexSet> {
    let n = q.n();
    cap("transitive", n, MAX_TRANSITIVE_N)?;
    let out: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && q.beats(v, u))
                .fold(0, |m, u| m | 1 << u)
        })
        .collect();
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    let mut best = 0u32;
    for s in 1u32..(1 << n) {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let others = s & !(1 << v);
            if out[v] & others == others && ok[others as usize] {
                ok[s as usize] = true;
                break;
            }
        }
        if ok[s as usize] && s.count_ones() > best.count_ones() {
            best = s;
        }
    }
    Ok(mask_set(n, best))
}

/// Largest transitive subtournament by scanning every subset for distinct scores.
pub fn max_transitive_scan(q: &Tournament) -> Result<usize> {
    let n = q.n();
    cap("transitive scan", n, MAX_TRANSITIVE_SCAN_N)?;
    let mut best = 0;
    for s in 0u32..(1 << n) {
        let k = s.count_ones() as usize;
        if k <= best {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        let mut seen = vec![false; k];
        let distinct = members.iter().all(|&v| {
            let score = members.iter().filter(|&&u| u != v && q.beats(v, u)).count();
            !std::mem::replace(&mut seen[score], true)
        });
        if distinct {
            best = k;
        }
    }
    Ok(best)
}

/// `(max clique, max stable)` sizes of a uniform hypergraph, growing sets in
/// increasing order and pruning as soon as a new vertex breaks homogeneity.
pub fn max_hyper_clique_stable_exact(hg: &Hypergraph) -> Result<(usize, usize)> {
    let n = hg.n();
    cap("hypergraph", n, MAX_HYPER_N)?;
    let grow = |want: bool| {
        let mut best = 0;
        let mut cur = Vec::new();
        extend(hg, want, 0, &mut cur, &mut best);
        best
    };
    Ok((grow(true), grow(false)))
}

fn extend(hg: &Hypergraph, want: bool, from: usize, cur: &mut Vec<usize>, best: &mut usize) {
    *best = (*best).max(cur.len());
    let k = hg.k();
    for v in from..hg.n() {
        if cur.len() + (hg.n() - v) <= *best {
            return;
        }
        let fits = cur.len() + 1 < k
            || subsets_with(cur, k - 1, v)
                .iter()
                .all(|e| hg.has_edge(e) == want);
        if fits {
            cur.push(v);
            extend(hg, want, v + 1, cur, best);
            cur.pop();
        }
    }
}

/// All `size`-subsets of `base` with `v` appended.
fn subsets_with(base: &[usize], size: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = base.len();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize == size {
            let mut e: Vec<usize> = (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| base[i])
                .collect();
            e.push(v);
            out.push(e);
        }
    }
    out
}

/// Same maxima by checking every vertex subset against every `k`-subset.
pub fn max_hyper_clique_stable_unpruned(hg: &Hypergraph) -> Result<(usize, usize)> {
    let n = hg.n();
    cap("hypergraph", n, MAX_HYPER_N)?;
    let k = hg.k();
    let (mut c, mut s) = (0, 0);
    for set in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
        let size = members.len();
        let mut all_in = true;
        let mut all_out = true;
        for mask in 0u32..(1 << size) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let e: Vec<usize> = (0..size)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| members[i])
                .collect();
            if hg.has_edge(&e) {
                all_out = false;
            } else {
                all_in = false;
            }
        }
        if all_in {
            c = c.max(size);
        }
        if all_out {
            s = s.max(size);
        }
    }
    Ok((c, s))
}

/// Minimum impure-pair fraction over all balanced partitions into `parts`
/// parts, with a partition attaining it.
pub fn best_equipartition_exact(
    g: &Graph,
    parts: usize,
    eps: &Rational,
) -> Result<(Rational, Vec<VertexSet>)> {
    let n = g.n();
    cap("equipartition", n, MAX_PARTITION_N)?;
    if parts == 0 || parts > n {
        return Err(Error::input(format!(
            "cannot split {n} vertices into {parts} nonempty parts"
        )));
    }
    let small = n / parts;
    let big_parts = n % parts;
    let mut label = vec![0usize; n];
    let mut best: Option<(usize, Vec<usize>)> = None;
    assign(g, parts, small, big_parts, eps, 0, 0, &mut label, &mut best);
    let (impure, label) = best.expect("a balanced partition exists");
    let total = parts * (parts - 1) / 2;
    let frac = if total == 0 {
        Rational::zero()
    } else {
        Rational::ratio(impure as u64, total as u64)
    };
    let sets = (0..parts)
        .map(|p| VertexSet::from_iter_in(n, (0..n).filter(|&v| label[v] == p)))
        .collect();
    Ok((frac, sets))
}

#[allow(clippy::too_many_arguments)]
fn assign(
    g: &Graph,
    parts: usize,
    small: usize,
    big_parts: usize,
    eps: &Rational,
    v: usize,
    used: usize,
    label: &mut Vec<usize>,
    best: &mut Option<(usize, Vec<usize>)>,
) {
    let n = g.n();
    if v == n {
        let mut sizes = vec![0usize; parts];
        label.iter().for_each(|&p| sizes[p] += 1);
        let bigs = sizes.iter().filter(|&&s| s == small + 1).count();
        if used != parts || sizes.iter().any(|&s| s != small && s != small + 1) || bigs != big_parts
        {
            return;
        }
        let impure = count_impure(g, label, &sizes, eps);
        if best.as_ref().is_none_or(|(b, _)| impure < *b) {
            *best = Some((impure, label.clone()));
        }
        return;
    }
    for p in 0..(used + 1).min(parts) {
        label[v] = p;
        assign(
            g,
            parts,
            small,
            big_parts,
            eps,
            v + 1,
            used.max(p + 1),
            label,
            best,
        );
    }
}

fn count_impure(g: &Graph, label: &[usize], sizes: &[usize], eps: &Rational) -> usize {
    let parts = sizes.len();
    let mut edges = vec![vec![0usize; parts]; parts];
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                let (a, b) = (label[u].min(label[v]), label[u].max(label[v]));
                edges[a][b] += 1;
            }
        }
    }
    let mut impure = 0;
    for a in 0..parts {
        for b in a + 1..parts {
            let pairs = sizes[a] * sizes[b];
            let e = edges[a][b];
            let sparse = eps.cmp_fraction(e, pairs).is_le();
            let dense = eps.cmp_fraction(pairs - e, pairs).is_le();
            if !sparse && !dense {
                impure += 1;
            }
        }
    }
    impure
}

/// VC-dimension by listing traces on every subset of the ground set, largest first.
pub fn naive_vc_dimension(fam: &SetFamily) -> Result<usize> {
    let u = fam.universe();
    cap("VC", u, MAX_VC_UNIVERSE)?;
    let masks: Vec<u32> = fam
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u32, |m, v| m | 1 << v))
        .collect();
    let mut best = 0;
    for s in 0u32..(1 << u) {
        let k = s.count_ones() as usize;
        if k <= best || (1usize << k) > masks.len() {
            continue;
        }
        let traces: HashSet<u32> = masks.iter().map(|m| m & s).collect();
        if traces.len() == 1 << k {
            best = k;
        }
    }
    Ok(best)
}

/// True iff `g[set]` has an induced path on four vertices, by checking every quadruple.
pub fn has_induced_p4(g: &Graph, set: &VertexSet) -> bool {
    let vs = set.to_vec();
    let m = vs.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let q = [vs[a], vs[b], vs[c], vs[d]];
                    let mut deg = [0usize; 4];
                    let mut edges = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if g.has_edge(q[i], q[j]) {
                                deg[i] += 1;
                                deg[j] += 1;
                                edges += 1;
                            }
                        }
                    }
                    // P4 is the only 4-vertex graph with 3 edges and degrees {1,1,2,2}
                    let mut sorted = deg;
                    sorted.sort_unstable();
                    if edges == 3 && sorted == [1, 1, 2, 2] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Whether `g` has a bi-induced copy of `h`, by trying every injective placement.
pub fn naive_bi_induced(g: &Graph, h: &Bigraph) -> Result<bool> {
    let n = g.n();
    cap("bi-induced", n, MAX_BI_INDUCED_N)?;
    let mut map = Vec::with_capacity(h.size());
    let mut used = vec![false; n];
    Ok(place(g, h, &mut map, &mut used))
}

fn place(g: &Graph, h: &Bigraph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if map.len() == h.size() {
        return h.is_bi_induced_copy(g, map);
    }
    for v in 0..g.n() {
        if !used[v] {
            used[v] = true;
            map.push(v);
            if place(g, h, map, used) {
                return true;
            }
            map.pop();
            used[v] = false;
        }
    }
    false
}
