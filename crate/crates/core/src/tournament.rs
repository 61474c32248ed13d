//! Tournaments, backedge graphs, substitution, transitive colourings and
//! transitive-subtournament extraction through the graph engine.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bigraph::Bigraph;
use crate::engine::clique_or_stable;
use crate::error::{Error, Result};
use crate::graph::{content_lines, parse_num, Graph};
use crate::params::ExponentParams;
use crate::vertex_set::VertexSet;

/// A tournament on `[0, n)`, stored as out-neighbourhood rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    out: Vec<VertexSet>,
}

impl Tournament {
    /// `i → j` iff `i < j`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    /// Builds a tournament where, for `i < j`, `i → j` iff `beats(i, j)`.
    pub fn from_fn(n: usize, mut beats: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = vec![VertexSet::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if beats(i, j) {
                    out[i].insert(j);
                } else {
                    out[j].insert(i);
                }
            }
        }
        Tournament { n, out }
    }

    /// The directed cycle `0 → 1 → 2 → 0`.
    pub fn cyclic_triangle() -> Self {
        Tournament::from_fn(3, |i, j| !(i == 0 && j == 2))
    }

    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.universe() != n {
                return Err(Error::input("tournament row over a different universe"));
            }
            if r.contains(i) {
                return Err(Error::input(format!("vertex {i} beats itself")));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i].contains(j) == rows[j].contains(i) {
                    return Err(Error::input(format!(
                        "pair ({i},{j}) needs exactly one direction"
                    )));
                }
            }
        }
        Ok(Tournament { n, out: rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff `u → v`.
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_neighbours(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    pub fn in_neighbours(&self, v: usize) -> VertexSet {
        let mut s = self.out[v].complement();
        s.remove(v);
        s
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// True iff the subtournament on `s` has no directed cycle.
    ///
    /// A tournament is acyclic iff its out-degrees are pairwise distinct.
    pub fn is_transitive(&self, s: &VertexSet) -> bool {
        let mut seen = vec![false; s.len()];
        for v in s {
            let d = self.out[v].intersection_len(s);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Number of directed triangles through each vertex.
    pub fn cycle_participation(&self) -> Vec<usize> {
        let mut count = vec![0; self.n];
        for u in 0..self.n {
            let preds = self.in_neighbours(u);
            for v in self.out[u].iter() {
                // u → v → w → u
                let closing = self.out[v].intersection(&preds);
                for w in closing.iter() {
                    if u < v && u < w {
                        count[u] += 1;
                        count[v] += 1;
                        count[w] += 1;
                    }
                }
            }
        }
        count
    }

    pub fn induced(&self, s: &VertexSet) -> (Tournament, Vec<usize>) {
        let map = s.to_vec();
        let t = Tournament::from_fn(map.len(), |i, j| self.beats(map[i], map[j]));
        (t, map)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("tour {}\n", self.n);
        for i in 0..self.n {
            s.extend((0..self.n).map(|j| if self.beats(i, j) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Tournament> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 || parts[0] != "tour" {
            return Err(Error::parse(ln, "expected `tour <n>`"));
        }
        let n: usize = parse_num(parts[1], ln)?;
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            if rows.len() == n {
                return Err(Error::parse(ln, "more rows than declared"));
            }
            if line.len() != n {
                return Err(Error::parse(ln, format!("row must have {n} characters")));
            }
            let mut row = VertexSet::new(n);
            for (j, c) in line.chars().enumerate() {
                match c {
                    '1' => {
                        row.insert(j);
                    }
                    '0' => {}
                    _ => return Err(Error::parse(ln, format!("unexpected character {c:?}"))),
                }
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(
                0,
                format!("declared {n} rows, found {}", rows.len()),
            ));
        }
        Tournament::from_rows(rows).map_err(|e| Error::parse(0, e.to_string()))
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tournament(n={}, out={:?})", self.n, self.out)
    }
}

/// A permutation of `[0, n)`, read as positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            if v >= perm.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::input("ordering is not a permutation"));
            }
        }
        Ok(Ordering(perm))
    }

    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    /// Descending out-degree, lowest id first on ties.
    pub fn by_out_degree(q: &Tournament) -> Self {
        let mut perm: Vec<usize> = (0..q.n()).collect();
        perm.sort_by_key(|&v| (std::cmp::Reverse(q.out_degree(v)), v));
        Ordering(perm)
    }

    pub fn reversed(&self) -> Self {
        Ordering(self.0.iter().rev().copied().collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Graph on the tournament's vertices with `v_i v_j` an edge (positions
/// `i < j`) iff the later vertex beats the earlier.
pub fn backedge_graph(q: &Tournament, phi: &Ordering) -> Result<Graph> {
    if phi.len() != q.n() {
        return Err(Error::input("ordering length differs from the tournament"));
    }
    let order = phi.as_slice();
    let mut g = Graph::empty(q.n());
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if q.beats(order[j], order[i]) {
                g.add_edge(order[i], order[j]);
            }
        }
    }
    Ok(g)
}

/// Replaces `v` in `q1` by a copy of `q2`; cross arcs follow `v`'s arcs.
///
/// `q2` takes ids `v..v + q2.n`; later `q1` vertices shift up by `q2.n - 1`.
pub fn substitute(q1: &Tournament, v: usize, q2: &Tournament) -> Result<Tournament> {
    if v >= q1.n() {
        return Err(Error::input(format!(
            "vertex {v} outside a tournament on {}",
            q1.n()
        )));
    }
    if q2.n() == 0 {
        return Err(Error::input("cannot substitute an empty tournament"));
    }
    let m = q2.n();
    let total = q1.n() - 1 + m;
    // New id -> (inside q2?, original id)
    let origin = |x: usize| -> (bool, usize) {
        if x < v {
            (false, x)
        } else if x < v + m {
            (true, x - v)
        } else {
            (false, x - m + 1)
        }
    };
    Ok(Tournament::from_fn(total, |i, j| {
        match (origin(i), origin(j)) {
            ((true, a), (true, b)) => q2.beats(a, b),
            ((true, _), (false, b)) => q1.beats(v, b),
            ((false, a), (true, _)) => q1.beats(a, v),
            ((false, a), (false, b)) => q1.beats(a, b),
        }
    }))
}

/// Largest tournament the exact colouring search accepts.
pub const MAX_EXACT_COLOURING: usize = 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Colouring {
    /// Parts, each verified transitive.
    Found(Vec<VertexSet>),
    NotColourable,
    /// The heuristic found nothing; no claim either way.
    Unknown,
}

/// Exact search for a partition into at most `k` transitive parts.
pub fn is_k_colourable(q: &Tournament, k: usize) -> Result<Colouring> {
    let n = q.n();
    if n > MAX_EXACT_COLOURING {
        return Err(Error::refused(format!(
            "exact colouring of {n} vertices exceeds the cap of {MAX_EXACT_COLOURING}; use the heuristic"
        )));
    }
    if n == 0 {
        return Ok(Colouring::Found(Vec::new()));
    }
    if k == 0 {
        return Ok(Colouring::NotColourable);
    }
    let part = participation_order(q);
    let out: Vec<u32> = (0..n).map(|v| mask(q.out_neighbours(v))).collect();
    let inn: Vec<u32> = (0..n).map(|v| mask(&q.in_neighbours(v))).collect();
    let mut parts = vec![0u32; k];
    let found = colour_search(&part, 0, &out, &inn, &mut parts, 0);
    Ok(if found {
        Colouring::Found(finish(q, &parts))
    } else {
        Colouring::NotColourable
    })
}

fn participation_order(q: &Tournament) -> Vec<usize> {
    let count = q.cycle_participation();
    let mut order: Vec<usize> = (0..q.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(count[v]), v));
    order
}

fn mask(s: &VertexSet) -> u32 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

/// True iff adding `v` to `part` closes no directed triangle.
#[inline]
fn fits(v: usize, part: u32, out: &[u32], inn: &[u32]) -> bool {
    let mut succ = part & out[v];
    let pred = part & inn[v];
    if pred == 0 {
        return true;
    }
    while succ != 0 {
        let u = succ.trailing_zeros() as usize;
        if out[u] & pred != 0 {
            return false;
        }
        succ &= succ - 1;
    }
    true
}

fn colour_search(
    order: &[usize],
    pos: usize,
    out: &[u32],
    inn: &[u32],
    parts: &mut [u32],
    used: usize,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    // New colours are interchangeable; open at most one.
    let limit = (used + 1).min(parts.len());
    for c in 0..limit {
        if fits(v, parts[c], out, inn) {
            parts[c] |= 1 << v;
            if colour_search(order, pos + 1, out, inn, parts, used.max(c + 1)) {
                return true;
            }
            parts[c] &= !(1 << v);
        }
    }
    false
}

fn finish(q: &Tournament, parts: &[u32]) -> Vec<VertexSet> {
    let sets: Vec<VertexSet> = parts
        .iter()
        .filter(|&&m| m != 0)
        .map(|&m| VertexSet::from_iter_in(q.n(), (0..q.n()).filter(|&v| m >> v & 1 == 1)))
        .collect();
    debug_assert!(sets.iter().all(|s| q.is_transitive(s)));
    sets
}

/// One-sided seeded heuristic: randomized first-fit over shuffled orders.
pub fn colour_heuristic(q: &Tournament, k: usize, seed: u64, attempts: usize) -> Colouring {
    let n = q.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = participation_order(q);
    for attempt in 0..attempts.max(1) {
        if attempt > 0 {
            order.shuffle(&mut rng);
        }
        let mut parts: Vec<VertexSet> = vec![VertexSet::new(n); k];
        let ok = order.iter().all(|&v| {
            for p in parts.iter_mut() {
                p.insert(v);
                if q.is_transitive(p) {
                    return true;
                }
                p.remove(v);
            }
            false
        });
        if ok {
            parts.retain(|p| !p.is_empty());
            return Colouring::Found(parts);
        }
    }
    Colouring::Unknown
}

/// Ordering that produced the transitive set, and whether it was read reversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitiveSet {
    pub set: VertexSet,
    pub ordering: Ordering,
    pub reversed: bool,
}

/// Large transitive subtournament via clique/stable extraction in backedge graphs.
///
/// A stable set of the backedge graph is transitive in the ordering; a
/// clique is transitive in the reversed ordering. Tries the identity and the
/// descending out-degree orderings and keeps the larger result.
pub fn largest_transitive(
    q: &Tournament,
    h: &Bigraph,
    params: &ExponentParams,
) -> Result<TransitiveSet> {
    let n = q.n();
    if n == 0 {
        return Err(Error::input("empty tournament"));
    }
    let mut best: Option<TransitiveSet> = None;
    for phi in [Ordering::identity(n), Ordering::by_out_degree(q)] {
        let g = backedge_graph(q, &phi)?;
        let r = clique_or_stable(&g, h, params)?;
        let cand = TransitiveSet {
            reversed: r.kind == crate::graph::SetKind::Clique,
            set: r.set,
            ordering: phi,
        };
        if best.as_ref().is_none_or(|b| cand.set.len() > b.set.len()) {
            best = Some(cand);
        }
    }
    let mut best = best.expect("two orderings tried");
    if best.set.len() < n.min(2) {
        best.set = VertexSet::from_iter_in(n, 0..n.min(2));
    }
    if !q.is_transitive(&best.set) {
        return Err(Error::BoundNotMet(Box::new(
            crate::error::BoundNotMet::new(
                crate::error::Stage::Verification,
                "extracted set is not transitive",
            ),
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backedge_examples() {
        let t = Tournament::transitive(6);
        assert_eq!(
            backedge_graph(&t, &Ordering::identity(6))
                .unwrap()
                .edge_count(),
            0
        );
        assert_eq!(
            backedge_graph(&t, &Ordering::identity(6).reversed())
                .unwrap()
                .edge_count(),
            15
        );
        let c = Tournament::cyclic_triangle();
        let g = backedge_graph(&c, &Ordering::identity(3)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(Ordering::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = Tournament::cyclic_triangle();
        assert_eq!(c.to_text(), "tour 3\n010\n001\n100\n");
        assert_eq!(Tournament::parse(&c.to_text()).unwrap(), c);
        assert!(Tournament::parse("tour 2\n01\n01\n").is_err());
        assert!(Tournament::parse("tour 2\n00\n00\n").is_err());
        assert!(Tournament::parse("tour 2\n01\n").is_err());
    }

    #[test]
    fn substitution() {
        let c = Tournament::cyclic_triangle();
        let one = Tournament::transitive(1);
        assert_eq!(substitute(&c, 1, &one).unwrap(), c);
        let s = substitute(&c, 1, &c).unwrap();
        assert_eq!(s.n(), 5);
        let mut scores: Vec<usize> = (0..5).map(|v| s.out_degree(v)).collect();
        scores.sort_unstable();
        assert_eq!(scores, vec![1, 2, 2, 2, 3]);
        let t = Tournament::transitive(4);
        let s = substitute(&t, 0, &c).unwrap();
        for u in 0..3 {
            for w in 3..6 {
                assert!(s.beats(u, w));
            }
        }
        assert!(substitute(&t, 4, &c).is_err());
    }

    #[test]
    fn colourability_examples() {
        assert!(matches!(
            is_k_colourable(&Tournament::transitive(8), 1).unwrap(),
            Colouring::Found(_)
        ));
        assert_eq!(
            is_k_colourable(&Tournament::cyclic_triangle(), 1).unwrap(),
            Colouring::NotColourable
        );
        assert!(matches!(
            is_k_colourable(&Tournament::cyclic_triangle(), 2).unwrap(),
            Colouring::Found(_)
        ));
        assert!(matches!(
            is_k_colourable(&Tournament::transitive(29), 2),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn transitive_sets() {
        let h = Bigraph::shattering_witness(2);
        let p = ExponentParams::default();
        let r = largest_transitive(&Tournament::cyclic_triangle(), &h, &p).unwrap();
        assert_eq!(r.set.len(), 2);
        let r = largest_transitive(&Tournament::transitive(16), &h, &p).unwrap();
        assert_eq!(r.set.len(), 16);
    }

    #[test]
    fn participation_counts() {
        let c = Tournament::cyclic_triangle();
        assert_eq!(c.cycle_participation(), vec![1, 1, 1]);
        assert_eq!(Tournament::transitive(5).cycle_participation(), vec![0; 5]);
    }
}
