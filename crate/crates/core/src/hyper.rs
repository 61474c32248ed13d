//! Uniform hypergraphs and the Erdős–Rado stepping reduction to one lower uniformity.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bigraph::Bigraph;
use crate::engine::clique_or_stable;
use crate::error::{Error, Result};
use crate::graph::{content_lines, parse_num, Graph, SetKind};
use crate::params::ExponentParams;
use crate::vertex_set::VertexSet;

/// A `k`-uniform hypergraph on `[0, n)`; edges stored as sorted id tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: HashSet<Vec<u32>>,
}

impl Hypergraph {
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::input("hypergraph uniformity must be at least 2"));
        }
        if n > u32::MAX as usize {
            return Err(Error::input("too many vertices"));
        }
        Ok(Hypergraph {
            n,
            k,
            edges: HashSet::new(),
        })
    }

    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let mut h = Hypergraph::empty(n, k)?;
        for_each_subset(n, k, |s| {
            h.edges.insert(s.iter().map(|&v| v as u32).collect());
        });
        Ok(h)
    }

    pub fn from_edges(n: usize, k: usize, edges: &[Vec<usize>]) -> Result<Self> {
        let mut h = Hypergraph::empty(n, k)?;
        for e in edges {
            if !h.insert(e)? {
                return Err(Error::input(format!("duplicate edge {e:?}")));
            }
        }
        Ok(h)
    }

    /// Inserts an edge given in any order; returns whether it was new.
    pub fn insert(&mut self, edge: &[usize]) -> Result<bool> {
        let key = self.key(edge)?;
        Ok(self.edges.insert(key))
    }

    fn key(&self, edge: &[usize]) -> Result<Vec<u32>> {
        if edge.len() != self.k {
            return Err(Error::input(format!(
                "edge {edge:?} does not have {} vertices",
                self.k
            )));
        }
        let mut key: Vec<u32> = edge.iter().map(|&v| v as u32).collect();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) || edge.iter().any(|&v| v >= self.n) {
            return Err(Error::input(format!(
                "edge {edge:?} has repeated or out-of-range vertices"
            )));
        }
        Ok(key)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted tuples, in lexicographic order.
    pub fn edges(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| v as usize).collect())
            .collect();
        out.sort_unstable();
        out
    }

    /// Membership for a `k`-set given in any order; false for malformed input.
    pub fn has_edge(&self, verts: &[usize]) -> bool {
        let mut key: Vec<u32> = verts.iter().map(|&v| v as u32).collect();
        key.sort_unstable();
        self.edges.contains(&key)
    }

    /// `N(S) = {v ∉ S : S ∪ {v} ∈ E}` for a `(k-1)`-set `S`.
    pub fn link_neighbourhood(&self, s: &[usize]) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        let mut key: Vec<u32> = Vec::with_capacity(self.k);
        for v in 0..self.n {
            if s.contains(&v) {
                continue;
            }
            key.clear();
            key.extend(s.iter().map(|&x| x as u32));
            key.push(v as u32);
            key.sort_unstable();
            if self.edges.contains(&key) {
                out.insert(v);
            }
        }
        out
    }

    /// The graph with the same edges; only for `k = 2`.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.k != 2 {
            return Err(Error::input("only 2-uniform hypergraphs are graphs"));
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| (e[0] as usize, e[1] as usize))
            .collect();
        Graph::from_edges(self.n, &edges)
    }

    pub fn from_graph(g: &Graph) -> Self {
        let edges = g.edges().map(|(u, v)| vec![u as u32, v as u32]).collect();
        Hypergraph {
            n: g.n(),
            k: 2,
            edges,
        }
    }

    /// True iff every `k`-subset of `set` is an edge (`Clique`) or none is (`Stable`).
    pub fn is_homogeneous(&self, set: &[usize], kind: SetKind) -> bool {
        let want = kind == SetKind::Clique;
        let mut ok = true;
        for_each_subset(set.len(), self.k, |idx| {
            if ok {
                let verts: Vec<usize> = idx.iter().map(|&i| set[i]).collect();
                ok = self.has_edge(&verts) == want;
            }
        });
        ok
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("hgraph {} {} {}\n", self.k, self.n, self.edges.len());
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Hypergraph> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "hgraph" {
            return Err(Error::parse(ln, "expected `hgraph <k> <n> <m>`"));
        }
        let k: usize = parse_num(parts[1], ln)?;
        let n: usize = parse_num(parts[2], ln)?;
        let m: usize = parse_num(parts[3], ln)?;
        let mut h = Hypergraph::empty(n, k).map_err(|e| Error::parse(ln, e.to_string()))?;
        let mut seen = 0;
        for (ln, line) in lines {
            let verts = line
                .split_whitespace()
                .map(|t| parse_num(t, ln))
                .collect::<Result<Vec<usize>>>()?;
            if verts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(ln, "edge vertices must be strictly ascending"));
            }
            match h.insert(&verts) {
                Ok(true) => seen += 1,
                Ok(false) => return Err(Error::parse(ln, "duplicate edge")),
                Err(e) => return Err(Error::parse(ln, e.to_string())),
            }
        }
        if seen != m {
            return Err(Error::parse(
                0,
                format!("header declares {m} edges, found {seen}"),
            ));
        }
        Ok(h)
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = match r.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    r
}

/// Calls `f` on every `size`-subset of `[0, n)` in lexicographic order.
pub fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + n - size {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Largest `p` with `2^{C(p, k-1)} ≤ n`, at least `k - 1` and at most `n - 1`.
pub fn default_p_target(n: usize, k: usize) -> usize {
    let mut p = k - 1;
    while p + 1 < n {
        let c = binomial((p + 1) as u64, (k - 1) as u64);
        if c >= 64 || (1u128 << c) > n as u128 {
            break;
        }
        p += 1;
    }
    p.min(n.saturating_sub(1)).max(k - 1)
}

/// Output of [`erdos_rado_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Stepped vertices in the order added (ascending ids).
    pub a: Vec<usize>,
    /// Final homogeneous class.
    pub b: VertexSet,
    pub witness: usize,
    /// `(k-1)`-uniform link on `a`, relabelled so `a[i]` is vertex `i`.
    pub link: Hypergraph,
    /// `(q, |B_q|)` for every `q` from the start to the end of stepping.
    pub trace: Vec<(usize, usize)>,
    /// `|a|` fell short of the requested target.
    pub shortfall: bool,
    /// Uniformity of every checked `(k-1)`-subset of `a` over `b`.
    pub uniform: bool,
}

/// Steps `A_q` up towards `p_target`, keeping `B_q` homogeneous for every
/// `(k-1)`-subset of `A_q`, then takes the link at the lowest vertex of `B`.
pub fn erdos_rado_reduce(hg: &Hypergraph, p_target: usize, seed: u64) -> Result<Reduction> {
    let k = hg.k();
    let n = hg.n();
    if k < 3 {
        return Err(Error::input("stepping needs uniformity at least 3"));
    }
    if n < k {
        return Err(Error::input(format!(
            "{n} vertices is fewer than the uniformity {k}"
        )));
    }
    let mut a: Vec<usize> = (0..k - 2).collect();
    let mut b: Vec<usize> = (k - 2..n).collect();
    let mut trace = vec![(a.len(), b.len())];
    while a.len() < p_target && b.len() >= 2 {
        let u = b[0];
        let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for &v in &b[1..] {
            let mut profile = Vec::new();
            for_each_subset(a.len(), k - 2, |t| {
                let mut e: Vec<usize> = t.iter().map(|&i| a[i]).collect();
                e.push(u);
                e.push(v);
                profile.push(if hg.has_edge(&e) { 0 } else { 1 });
            });
            classes.entry(profile).or_default().push(v);
        }
        // Largest class; the map iterates profiles lexicographically so the first maximum wins ties.
        let mut best: Option<Vec<usize>> = None;
        for (_, members) in classes {
            if best.as_ref().is_none_or(|b| members.len() > b.len()) {
                best = Some(members);
            }
        }
        a.push(u);
        b = best.unwrap_or_default();
        trace.push((a.len(), b.len()));
    }
    let witness = *b
        .first()
        .ok_or_else(|| Error::input("stepping left no witness vertex"))?;

    let mut link = Hypergraph::empty(a.len(), k - 1)?;
    for_each_subset(a.len(), k - 1, |s| {
        let mut e: Vec<usize> = s.iter().map(|&i| a[i]).collect();
        e.push(witness);
        if hg.has_edge(&e) {
            link.edges.insert(s.iter().map(|&i| i as u32).collect());
        }
    });

    let uniform = check_uniform(hg, &a, &b, seed);
    Ok(Reduction {
        shortfall: a.len() < p_target,
        b: VertexSet::from_iter_in(n, b.iter().copied()),
        a,
        witness,
        link,
        trace,
        uniform,
    })
}

/// Exhaustive when `C(|a|, k-1) ≤ 1000`, else 100 seeded subsets.
fn check_uniform(hg: &Hypergraph, a: &[usize], b: &[usize], seed: u64) -> bool {
    let k = hg.k();
    let uniform_on = |s: &[usize]| {
        let member = |v: usize| {
            let mut e = s.to_vec();
            e.push(v);
            hg.has_edge(&e)
        };
        let first = member(b[0]);
        b.iter().all(|&v| member(v) == first)
    };
    let total = binomial(a.len() as u64, (k - 1) as u64);
    if total <= 1000 {
        let mut ok = true;
        for_each_subset(a.len(), k - 1, |idx| {
            if ok {
                let s: Vec<usize> = idx.iter().map(|&i| a[i]).collect();
                ok = uniform_on(&s);
            }
        });
        ok
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..100).all(|_| {
            let s: Vec<usize> = sample(&mut rng, a.len(), k - 1)
                .into_iter()
                .map(|i| a[i])
                .collect();
            uniform_on(&s)
        })
    }
}

/// Longest profile (number of `(k-2)`-subsets of `A`) the stepping will compute.
const MAX_PROFILE: u128 = 4096;

/// Steps as far as the vertex count and the profile budget allow.
fn step_budget(n: usize, k: usize) -> usize {
    let mut p = k - 2;
    while p + 1 < n && binomial(p as u64, (k - 2) as u64) <= MAX_PROFILE {
        p += 1;
    }
    p
}

/// A verified homogeneous set of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperSet {
    pub set: Vec<usize>,
    pub kind: SetKind,
}

/// Clique or stable set of a `k`-uniform hypergraph by repeated stepping
/// down to a graph, appending each level's witness vertex.
pub fn hyper_clique_or_stable(
    hg: &Hypergraph,
    h: &Bigraph,
    params: &ExponentParams,
) -> Result<HyperSet> {
    let k = hg.k();
    let n = hg.n();
    if n < k {
        // Every subset is vacuously homogeneous.
        return Ok(HyperSet {
            set: (0..n).collect(),
            kind: SetKind::Stable,
        });
    }
    let found = if k == 2 {
        let g = hg.to_graph()?;
        let r = clique_or_stable(&g, h, params)?;
        HyperSet {
            set: r.set.to_vec(),
            kind: r.kind,
        }
    } else {
        let red = erdos_rado_reduce(hg, step_budget(n, k), params.seed)?;
        let inner = hyper_clique_or_stable(&red.link, h, params)?;
        let mut set: Vec<usize> = inner.set.iter().map(|&i| red.a[i]).collect();
        set.push(red.witness);
        set.sort_unstable();
        HyperSet {
            set,
            kind: inner.kind,
        }
    };
    let trivial = HyperSet {
        set: (0..k - 1).collect(),
        kind: SetKind::Stable,
    };
    let best = if found.set.len() >= trivial.set.len() && hg.is_homogeneous(&found.set, found.kind)
    {
        found
    } else {
        trivial
    };
    Ok(best)
}
