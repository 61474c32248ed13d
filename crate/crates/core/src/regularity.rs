//! Ultra-strong regularity partitions: a neighbourhood-clustering heuristic
//! and an exact verifier of the weakly-pure pair fraction.
//!
//! The heuristic packs vertices by the Hamming distance of their
//! neighbourhood rows, assigns every vertex to its nearest representative and
//! cuts the resulting cluster sequence into an equipartition. It reports the
//! achieved impure fraction exactly; meeting the `eps` bound is not promised.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{equipartition_sizes, Equipartition, Graph};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairStatus {
    WeaklySparse,
    WeaklyDense,
    Impure,
}

/// Classification of one part pair `(i, j)`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub i: usize,
    pub j: usize,
    pub status: PairStatus,
    /// Edges between the parts.
    pub edges: usize,
    /// `|V_i| * |V_j|`.
    pub pairs: usize,
}

impl PairClass {
    pub fn density(&self) -> Rational {
        Rational::ratio(self.edges as u64, self.pairs as u64)
    }
}

fn status_of(edges: usize, pairs: usize, eps: &Rational) -> PairStatus {
    let limit = eps.floor_mul(pairs);
    if edges <= limit {
        PairStatus::WeaklySparse
    } else if pairs - edges <= limit {
        PairStatus::WeaklyDense
    } else {
        PairStatus::Impure
    }
}

/// Classifies the pair `(a, b)` by its exact edge density.
pub fn classify_pair(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Rational,
) -> Result<(PairStatus, Rational)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("cannot classify a pair with an empty part"));
    }
    let edges = g.edges_between(a, b)?;
    let pairs = a.len() * b.len();
    Ok((
        status_of(edges, pairs, eps),
        Rational::ratio(edges as u64, pairs as u64),
    ))
}

/// Exhaustively classifies every part pair. Returns the impure fraction and the pair table.
pub fn verify_partition(
    g: &Graph,
    partition: &Equipartition,
    eps: &Rational,
) -> Result<(Rational, Vec<PairClass>)> {
    if partition.universe() != g.n() {
        return Err(Error::input(
            "partition does not cover the graph's vertices",
        ));
    }
    if partition.parts().iter().any(|p| p.is_empty()) {
        return Err(Error::input("partition has an empty part"));
    }
    Ok(classify_all(g, partition.parts(), eps))
}

fn classify_all(g: &Graph, parts: &[VertexSet], eps: &Rational) -> (Rational, Vec<PairClass>) {
    let l = parts.len();
    let counts = cross_counts(g, parts);
    let mut table = Vec::with_capacity(l * l.saturating_sub(1) / 2);
    let mut impure = 0;
    for i in 0..l {
        for j in i + 1..l {
            let edges = counts[tri(i, j, l)] as usize;
            let pairs = parts[i].len() * parts[j].len();
            let status = status_of(edges, pairs, eps);
            if status == PairStatus::Impure {
                impure += 1;
            }
            table.push(PairClass {
                i,
                j,
                status,
                edges,
                pairs,
            });
        }
    }
    let total = l * l.saturating_sub(1) / 2;
    let frac = if total == 0 {
        Rational::zero()
    } else {
        Rational::ratio(impure as u64, total as u64)
    };
    (frac, table)
}

#[inline]
fn tri(i: usize, j: usize, l: usize) -> usize {
    debug_assert!(i < j);
    i * (2 * l - i - 1) / 2 + (j - i - 1)
}

/// Edge counts between every part pair, in upper-triangular order.
fn cross_counts(g: &Graph, parts: &[VertexSet]) -> Vec<u32> {
    let l = parts.len();
    let mut part_of = vec![usize::MAX; g.n()];
    for (p, s) in parts.iter().enumerate() {
        for v in s {
            part_of[v] = p;
        }
    }
    let mut counts = vec![0u32; l * l.saturating_sub(1) / 2];
    for u in 0..g.n() {
        let pu = part_of[u];
        for v in g.neighbours(u).iter().filter(|&v| v > u) {
            let pv = part_of[v];
            if pu != pv {
                let (a, b) = if pu < pv { (pu, pv) } else { (pv, pu) };
                counts[tri(a, b, l)] += 1;
            }
        }
    }
    counts
}

#[derive(Clone, Debug)]
pub struct RegularityOptions {
    /// Upper bound on the part count as `eps^{-k_cap}`.
    pub k_cap: u32,
    /// Force an exact part count instead of the heuristic's choice.
    pub parts: Option<usize>,
    /// Fall back to singleton parts when clustering misses the bound and `n` fits the cap.
    pub singleton_fallback: bool,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        RegularityOptions {
            k_cap: 4,
            parts: None,
            singleton_fallback: true,
        }
    }
}

/// How the returned partition was produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PartitionStrategy {
    /// Neighbourhood clustering at packing radius `delta_shift`: `eps / 2^delta_shift`.
    Clustered { delta_shift: u32 },
    /// Every part a single vertex; available whenever `n` fits under the part cap.
    Singletons,
}

#[derive(Clone, Debug)]
pub struct RegularityResult {
    pub partition: Equipartition,
    pub eps: Rational,
    pub pair_table: Vec<PairClass>,
    pub impure_fraction: Rational,
    pub met_bound: bool,
    pub strategy: PartitionStrategy,
}

impl RegularityResult {
    pub fn parts(&self) -> usize {
        self.partition.len()
    }

    pub fn status(&self, i: usize, j: usize) -> PairStatus {
        let l = self.partition.len();
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.pair_table[tri(a, b, l)].status
    }
}

/// Most representatives the packing step will select.
const REP_CAP: usize = 1024;
/// Instances up to this size get a vertex-swap refinement pass.
const LOCAL_SEARCH_MAX_N: usize = 32;
/// Instances up to this size also try pairs of swaps when single swaps stall.
const PAIR_SWAP_MAX_N: usize = 12;
/// Shuffled restarts tried at that size.
const RESTARTS: usize = 16;
const RESTART_SEED: u64 = 0x5eed;

/// Allowed part-count window `[ceil(1/eps), min(n, ceil(eps^{-k_cap}))]`.
pub fn part_window(n: usize, eps: &Rational, k_cap: u32) -> (usize, usize) {
    let lmin = eps.ceil_recip();
    let lmax = eps.pow(k_cap.max(1)).ceil_recip().min(n).max(lmin.min(n));
    (lmin, lmax)
}

/// Heuristic ultra-strong regularity partition of `g` at tolerance `eps`.
pub fn ultra_strong_partition(
    g: &Graph,
    eps: &Rational,
    opts: &RegularityOptions,
) -> Result<RegularityResult> {
    if !eps.in_open_half() {
        return Err(Error::input(format!("eps {eps} outside (0, 1/2)")));
    }
    let n = g.n();
    let (lmin, lmax) = part_window(n, eps, opts.k_cap);
    if let Some(l) = opts.parts {
        if l == 0 || l > n {
            return Err(Error::input(format!(
                "cannot force {l} parts on {n} vertices"
            )));
        }
    } else if n < lmin {
        return Err(Error::input(format!(
            "{n} vertices is fewer than 1/eps = {lmin}"
        )));
    }

    if opts.parts == Some(n) || (opts.parts.is_none() && lmin >= n) {
        return Ok(singletons(g, eps));
    }

    let rep_cap = lmin.max(lmax.min(REP_CAP)).min(n);
    let mut best: Option<RegularityResult> = None;
    for shift in 1..=6u32 {
        let delta = eps.div_int(1 << shift);
        let threshold = delta.floor_mul(n);
        let reps = pack(g, threshold, rep_cap);
        let target = opts.parts.unwrap_or_else(|| reps.len().clamp(lmin, lmax));
        let clusters = assign(g, &reps);
        let mut parts = cut(g, &reps, clusters, target);
        if n <= LOCAL_SEARCH_MAX_N {
            refine(g, &mut parts, eps);
        }
        if n <= PAIR_SWAP_MAX_N {
            parts = restart(g, parts, eps);
        }
        let partition = Equipartition::from_parts(n, parts)?;
        let (impure_fraction, pair_table) = classify_all(g, partition.parts(), eps);
        let met_bound = impure_fraction <= *eps;
        let res = RegularityResult {
            partition,
            eps: eps.clone(),
            pair_table,
            impure_fraction,
            met_bound,
            strategy: PartitionStrategy::Clustered { delta_shift: shift },
        };
        let better = best
            .as_ref()
            .is_none_or(|b| res.impure_fraction < b.impure_fraction);
        if better {
            best = Some(res);
        }
        if met_bound || reps.len() >= rep_cap {
            break;
        }
    }
    let best = best.expect("at least one packing round");
    if !best.met_bound && opts.singleton_fallback && opts.parts.is_none() && n <= lmax {
        return Ok(singletons(g, eps));
    }
    Ok(best)
}

fn singletons(g: &Graph, eps: &Rational) -> RegularityResult {
    let n = g.n();
    let partition = Equipartition::contiguous(n, n).expect("n singleton parts");
    let (impure_fraction, pair_table) = classify_all(g, partition.parts(), eps);
    let met_bound = impure_fraction <= *eps;
    RegularityResult {
        partition,
        eps: eps.clone(),
        pair_table,
        impure_fraction,
        met_bound,
        strategy: PartitionStrategy::Singletons,
    }
}

/// Greedy packing: a vertex becomes a representative when its neighbourhood is
/// farther than `threshold` from every representative chosen so far.
fn pack(g: &Graph, threshold: usize, cap: usize) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for v in 0..g.n() {
        if reps.len() >= cap {
            break;
        }
        let row = g.neighbours(v);
        if reps
            .iter()
            .all(|&r| g.neighbours(r).hamming(row) > threshold)
        {
            reps.push(v);
        }
    }
    reps
}

/// Nearest representative for every vertex, lowest representative index on ties.
fn assign(g: &Graph, reps: &[usize]) -> Vec<Vec<usize>> {
    let mut clusters = vec![Vec::new(); reps.len()];
    for v in 0..g.n() {
        let row = g.neighbours(v);
        let mut best = (usize::MAX, 0);
        for (i, &r) in reps.iter().enumerate() {
            let d = if r == v {
                0
            } else {
                g.neighbours(r).hamming(row)
            };
            if d < best.0 {
                best = (d, i);
                if d == 0 {
                    break;
                }
            }
        }
        clusters[best.1].push(v);
    }
    clusters
}

/// Turns clusters into exactly `target` balanced parts.
///
/// Clusters are merged or split to reach `target`, chained by nearest
/// representative, laid out as one vertex sequence and cut at equipartition
/// sizes. Parts are then numbered round-robin across original clusters so
/// that low part indices come from distinct clusters.
fn cut(g: &Graph, reps: &[usize], clusters: Vec<Vec<usize>>, target: usize) -> Vec<VertexSet> {
    let n = g.n();
    // (origin representative index, members)
    let mut groups: Vec<(usize, Vec<usize>)> = clusters
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .collect();

    while groups.len() > target {
        let small = (0..groups.len())
            .min_by_key(|&i| (groups[i].1.len(), i))
            .unwrap();
        let (origin, members) = groups.remove(small);
        let row = g.neighbours(reps[origin]);
        let into = (0..groups.len())
            .min_by_key(|&i| (g.neighbours(reps[groups[i].0]).hamming(row), i))
            .unwrap();
        groups[into].1.extend(members);
        groups[into].1.sort_unstable();
    }
    while groups.len() < target {
        let big = (0..groups.len())
            .max_by_key(|&i| (groups[i].1.len(), std::cmp::Reverse(i)))
            .unwrap();
        let origin = groups[big].0;
        let members = &mut groups[big].1;
        let tail = members.split_off(members.len().div_ceil(2));
        groups.push((origin, tail));
    }

    // Chain origins by nearest representative.
    let mut origins: Vec<usize> = groups.iter().map(|(o, _)| *o).collect();
    origins.sort_unstable();
    origins.dedup();
    let chain = if origins.len() <= 512 {
        let mut chain = vec![origins[0]];
        let mut left: Vec<usize> = origins[1..].to_vec();
        while !left.is_empty() {
            let last = g.neighbours(reps[*chain.last().unwrap()]);
            let k = (0..left.len())
                .min_by_key(|&i| (g.neighbours(reps[left[i]]).hamming(last), left[i]))
                .unwrap();
            chain.push(left.remove(k));
        }
        chain
    } else {
        origins
    };
    let mut rank = vec![0usize; reps.len()];
    for (pos, &o) in chain.iter().enumerate() {
        rank[o] = pos;
    }
    groups.sort_by_key(|(o, m)| (rank[*o], m.first().copied()));

    let sequence: Vec<(usize, usize)> = groups
        .iter()
        .flat_map(|(o, m)| m.iter().map(move |&v| (*o, v)))
        .collect();
    let sizes = equipartition_sizes(n, target);
    let mut chunks: Vec<(usize, VertexSet)> = Vec::with_capacity(target);
    let mut start = 0;
    for sz in sizes {
        let slice = &sequence[start..start + sz];
        let origin = slice.first().map(|(o, _)| *o).unwrap_or(0);
        chunks.push((
            origin,
            VertexSet::from_iter_in(n, slice.iter().map(|(_, v)| *v)),
        ));
        start += sz;
    }
    // Round-robin numbering across origins.
    let mut seen = vec![0usize; reps.len()];
    let mut keyed: Vec<((usize, usize), VertexSet)> = chunks
        .into_iter()
        .map(|(o, s)| {
            let r = seen[o];
            seen[o] += 1;
            ((r, rank[o]), s)
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, s)| s).collect()
}

/// First-improvement vertex swaps between parts, minimizing impure pairs.
fn refine(g: &Graph, parts: &mut [VertexSet], eps: &Rational) {
    let impure = |parts: &[VertexSet]| {
        let (_, table) = classify_all(g, parts, eps);
        table
            .iter()
            .filter(|p| p.status == PairStatus::Impure)
            .count()
    };
    let mut current = impure(parts);
    for _ in 0..50 {
        if current == 0 {
            return;
        }
        let moves = swap_moves(parts);
        let single = moves.iter().find_map(|&m| {
            swap(parts, m);
            let c = impure(parts);
            if c < current {
                return Some(c);
            }
            swap(parts, m);
            None
        });
        if let Some(c) = single {
            current = c;
            continue;
        }
        if g.n() > PAIR_SWAP_MAX_N {
            return;
        }
        let double = moves.iter().find_map(|&m| {
            swap(parts, m);
            let found = swap_moves(parts).into_iter().find_map(|m2| {
                swap(parts, m2);
                let c = impure(parts);
                if c < current {
                    return Some(c);
                }
                swap(parts, m2);
                None
            });
            if found.is_none() {
                swap(parts, m);
            }
            found
        });
        match double {
            Some(c) => current = c,
            None => return,
        }
    }
}

/// Refines seeded shuffles of the part layout and keeps the fewest impure pairs.
fn restart(g: &Graph, parts: Vec<VertexSet>, eps: &Rational) -> Vec<VertexSet> {
    let n = g.n();
    let impure = |parts: &[VertexSet]| {
        let (_, table) = classify_all(g, parts, eps);
        table
            .iter()
            .filter(|p| p.status == PairStatus::Impure)
            .count()
    };
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let mut best_count = impure(&parts);
    let mut best = parts;
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..RESTARTS {
        if best_count == 0 {
            break;
        }
        order.shuffle(&mut rng);
        let mut cand = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &size in &sizes {
            cand.push(VertexSet::from_iter_in(
                n,
                order[at..at + size].iter().copied(),
            ));
            at += size;
        }
        refine(g, &mut cand, eps);
        let c = impure(&cand);
        if c < best_count {
            best_count = c;
            best = cand;
        }
    }
    best
}

/// Every exchange `(u in part p, v in part q)` with `p < q`.
fn swap_moves(parts: &[VertexSet]) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for p in 0..parts.len() {
        for q in p + 1..parts.len() {
            for u in &parts[p] {
                for v in &parts[q] {
                    out.push((u, p, v, q));
                }
            }
        }
    }
    out
}

/// Exchanges `u` and `v` between their parts; applying it twice restores the parts.
fn swap(parts: &mut [VertexSet], (u, p, v, q): (usize, usize, usize, usize)) {
    let (from_p, from_q) = if parts[p].contains(u) { (u, v) } else { (v, u) };
    parts[p].remove(from_p);
    parts[q].remove(from_q);
    parts[p].insert(from_q);
    parts[q].insert(from_p);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cliques(count: usize, size: usize) -> Graph {
        let n = count * size;
        let mut g = Graph::empty(n);
        for c in 0..count {
            for u in 0..size {
                for v in u + 1..size {
                    g.add_edge(c * size + u, c * size + v);
                }
            }
        }
        g
    }

    fn set(n: usize, r: std::ops::Range<usize>) -> VertexSet {
        VertexSet::from_iter_in(n, r)
    }

    #[test]
    fn classify_examples() {
        // 5 cross edges between two 10-sets.
        let mut g = Graph::empty(20);
        for i in 0..5 {
            g.add_edge(i, 10 + i);
        }
        let (st, d) = classify_pair(
            &g,
            &set(20, 0..10),
            &set(20, 10..20),
            &Rational::ratio(1, 20),
        )
        .unwrap();
        assert_eq!(st, PairStatus::WeaklySparse);
        assert_eq!(d, Rational::ratio(1, 20));

        let k = Graph::complete(20);
        let (st, d) = classify_pair(
            &k,
            &set(20, 0..10),
            &set(20, 10..20),
            &Rational::ratio(1, 10),
        )
        .unwrap();
        assert_eq!((st, d), (PairStatus::WeaklyDense, Rational::one()));

        let mut h = Graph::empty(4);
        h.add_edge(0, 2);
        h.add_edge(1, 3);
        let (st, d) =
            classify_pair(&h, &set(4, 0..2), &set(4, 2..4), &Rational::ratio(1, 10)).unwrap();
        assert_eq!((st, d), (PairStatus::Impure, Rational::half()));

        assert!(classify_pair(&h, &VertexSet::new(4), &set(4, 2..4), &Rational::half()).is_err());
    }

    #[test]
    fn clique_union_partitions_cleanly() {
        let g = cliques(4, 25);
        let eps = Rational::ratio(1, 10);
        let res = ultra_strong_partition(&g, &eps, &RegularityOptions::default()).unwrap();
        assert_eq!(res.impure_fraction, Rational::zero());
        assert!(res.met_bound);
        assert!(res.parts() >= 10);
        let (frac, table) = verify_partition(&g, &res.partition, &eps).unwrap();
        assert_eq!(frac, res.impure_fraction);
        assert_eq!(table, res.pair_table);
    }

    #[test]
    fn natural_partition_of_clique_union() {
        let g = cliques(4, 25);
        let parts = (0..4).map(|c| set(100, c * 25..(c + 1) * 25)).collect();
        let p = Equipartition::from_parts(100, parts).unwrap();
        let (frac, _) = verify_partition(&g, &p, &Rational::ratio(1, 10)).unwrap();
        assert_eq!(frac, Rational::zero());
    }

    #[test]
    fn forced_singletons_are_pure() {
        let g = Graph::cycle(12);
        let opts = RegularityOptions {
            parts: Some(12),
            ..Default::default()
        };
        let res = ultra_strong_partition(&g, &Rational::ratio(1, 4), &opts).unwrap();
        assert_eq!(res.parts(), 12);
        assert_eq!(res.impure_fraction, Rational::zero());
    }

    #[test]
    fn empty_graph_any_partition() {
        let g = Graph::empty(9);
        let p = Equipartition::contiguous(9, 3).unwrap();
        assert_eq!(
            verify_partition(&g, &p, &Rational::ratio(1, 4)).unwrap().0,
            Rational::zero()
        );
    }

    #[test]
    fn too_few_vertices() {
        assert!(ultra_strong_partition(
            &Graph::empty(5),
            &Rational::ratio(1, 10),
            &Default::default()
        )
        .is_err());
    }

    #[test]
    fn triangular_index_is_dense() {
        let l = 7;
        let mut k = 0;
        for i in 0..l {
            for j in i + 1..l {
                assert_eq!(tri(i, j, l), k);
                k += 1;
            }
        }
    }
}
