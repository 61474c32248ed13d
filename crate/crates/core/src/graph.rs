//! Undirected simple graphs over bitset adjacency rows, plus the density
//! predicates and equipartitions the rest of the crate is built on.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    m: usize,
}

/// Which side of a graph is sparse when it is restricted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The graph itself has small maximum degree.
    Sparse,
    /// The complement has small maximum degree.
    Dense,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Sparse => Side::Dense,
            Side::Dense => Side::Sparse,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    SparseSide,
    DenseSide,
    No,
}

impl Restriction {
    pub fn side(self) -> Option<Side> {
        match self {
            Restriction::SparseSide => Some(Side::Sparse),
            Restriction::DenseSide => Some(Side::Dense),
            Restriction::No => None,
        }
    }
}

/// Whether a vertex set is a clique or a stable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    Clique,
    Stable,
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SetKind::Clique => "clique",
            SetKind::Stable => "stable",
        })
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::new(n); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows; rows must be symmetric and loop-free.
    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        let mut deg_sum = 0;
        for (u, row) in rows.iter().enumerate() {
            if row.universe() != n {
                return Err(Error::input("adjacency row over wrong universe"));
            }
            if row.contains(u) {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            for v in row {
                if !rows[v].contains(u) {
                    return Err(Error::input(format!("asymmetric adjacency at ({u},{v})")));
                }
            }
            deg_sum += row.len();
        }
        Ok(Graph {
            n,
            adj: rows,
            m: deg_sum / 2,
        })
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.m += 1;
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(Error::input(format!(
                "vertex set over universe {} used with a graph on {} vertices",
                s.universe(),
                self.n
            )));
        }
        Ok(())
    }

    /// Induced subgraph on `s`, with the order-preserving map from new ids to old ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(s)?;
        Ok(self.induced(s))
    }

    pub(crate) fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let k = map.len();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj = Vec::with_capacity(k);
        let mut m2 = 0;
        for &u in &map {
            let mut row = VertexSet::new(k);
            for v in self.adj[u].intersection(s).iter() {
                row.insert(pos[v]);
            }
            m2 += row.len();
            adj.push(row);
        }
        (
            Graph {
                n: k,
                adj,
                m: m2 / 2,
            },
            map,
        )
    }

    pub fn complement(&self) -> Graph {
        let full = VertexSet::full(self.n);
        let adj: Vec<VertexSet> = (0..self.n)
            .map(|u| {
                let mut row = full.difference(&self.adj[u]);
                row.remove(u);
                row
            })
            .collect();
        let total = self.n * self.n.saturating_sub(1) / 2;
        Graph {
            n: self.n,
            adj,
            m: total - self.m,
        }
    }

    /// Number of edges with one end in `a` and the other in `b`; the sets must be disjoint.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> Result<usize> {
        self.check_set(a)?;
        self.check_set(b)?;
        if a.intersects(b) {
            return Err(Error::input("edges_between needs disjoint sets"));
        }
        Ok(self.count_between(a, b))
    }

    #[inline]
    pub(crate) fn count_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        small
            .iter()
            .map(|u| self.adj[u].intersection_len(large))
            .sum()
    }

    /// Maximum degree of `G[s]`.
    pub fn max_degree_within(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|u| self.adj[u].intersection_len(s))
            .max()
            .unwrap_or(0)
    }

    /// Maximum degree of the complement of `G[s]`.
    pub fn max_codegree_within(&self, s: &VertexSet) -> usize {
        let k = s.len();
        s.iter()
            .map(|u| k - 1 - self.adj[u].intersection_len(s))
            .max()
            .unwrap_or(0)
    }

    /// Restrictedness of `G[s]` at `eps`, compared exactly. Sparse wins ties.
    pub fn restriction_of(&self, s: &VertexSet, eps: &Rational) -> Restriction {
        let k = s.len();
        if k == 0 {
            return Restriction::SparseSide;
        }
        let limit = eps.floor_mul(k);
        let mut max_deg = 0;
        let mut max_codeg = 0;
        for u in s {
            let d = self.adj[u].intersection_len(s);
            max_deg = max_deg.max(d);
            max_codeg = max_codeg.max(k - 1 - d);
            if max_deg > limit && max_codeg > limit {
                return Restriction::No;
            }
        }
        if max_deg <= limit {
            Restriction::SparseSide
        } else {
            Restriction::DenseSide
        }
    }

    /// True iff `G[s]` is `eps`-sparse on the given side.
    pub fn is_restricted_on(&self, s: &VertexSet, side: Side, eps: &Rational) -> bool {
        if s.is_empty() {
            return true;
        }
        let limit = eps.floor_mul(s.len());
        match side {
            Side::Sparse => self.max_degree_within(s) <= limit,
            Side::Dense => self.max_codegree_within(s) <= limit,
        }
    }

    /// True iff `s` is a clique.
    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let k = s.len();
        s.iter().all(|u| self.adj[u].intersection_len(s) == k - 1)
    }

    /// True iff `s` is a stable set.
    pub fn is_stable(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| !self.adj[u].intersects(s))
    }

    /// True iff no edge joins `a` and `b`.
    pub fn anticomplete(&self, a: &VertexSet, b: &VertexSet) -> bool {
        a.iter().all(|u| !self.adj[u].intersects(b))
    }

    /// True iff every pair across `a` and `b` is an edge.
    pub fn complete_between(&self, a: &VertexSet, b: &VertexSet) -> bool {
        let bl = b.len();
        a.iter().all(|u| self.adj[u].intersection_len(b) == bl)
    }

    /// Serializes in the `graph <n> <m>` / `e <u> <v>` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "graph" {
            return Err(Error::parse(ln, "expected `graph <n> <m>`"));
        }
        let n: usize = parse_num(parts[1], ln)?;
        let m: usize = parse_num(parts[2], ln)?;
        let mut g = Graph::empty(n);
        let mut seen = 0;
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "e" {
                return Err(Error::parse(ln, "expected `e <u> <v>`"));
            }
            let u: usize = parse_num(parts[1], ln)?;
            let v: usize = parse_num(parts[2], ln)?;
            if u >= v || v >= n {
                return Err(Error::parse(
                    ln,
                    format!("need 0 <= u < v < {n}, got {u} {v}"),
                ));
            }
            if g.has_edge(u, v) {
                return Err(Error::parse(ln, format!("duplicate edge {u} {v}")));
            }
            g.add_edge(u, v);
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                0,
                format!("header declares {m} edges, found {seen}"),
            ));
        }
        Ok(g)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?})",
            self.n,
            self.edges().collect::<Vec<_>>()
        )
    }
}

/// Non-blank, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = match l.find('#') {
            Some(p) => &l[..p],
            None => l,
        };
        let l = l.trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("bad number `{s}`")))
}

/// Exact restrictedness test for a whole graph.
///
/// `eps` must lie in `(0, 1/2)`. When both the graph and its complement
/// qualify, the sparse side is reported.
pub fn is_eps_restricted(g: &Graph, eps: &Rational) -> Result<Restriction> {
    if !eps.in_open_half() {
        return Err(Error::input(format!("eps {eps} outside (0, 1/2)")));
    }
    if g.n() == 0 {
        return Err(Error::input("restrictedness of the null graph"));
    }
    Ok(g.restriction_of(&g.vertex_set(), eps))
}

/// A partition of `[0, n)` into parts whose sizes differ by at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equipartition {
    parts: Vec<VertexSet>,
}

impl Equipartition {
    /// Contiguous equipartition: the first `n mod L` parts get `ceil(n/L)` vertices.
    pub fn contiguous(n: usize, parts: usize) -> Result<Self> {
        if parts == 0 || parts > n {
            return Err(Error::input(format!(
                "cannot split {n} vertices into {parts} parts"
            )));
        }
        let sizes = equipartition_sizes(n, parts);
        let mut start = 0;
        let parts = sizes
            .into_iter()
            .map(|sz| {
                let s = VertexSet::from_iter_in(n, start..start + sz);
                start += sz;
                s
            })
            .collect();
        Ok(Equipartition { parts })
    }

    /// Validates disjointness, coverage and balance.
    pub fn from_parts(n: usize, parts: Vec<VertexSet>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::input("equipartition with no parts"));
        }
        let mut seen = VertexSet::new(n);
        for p in &parts {
            if p.universe() != n {
                return Err(Error::input("part over wrong universe"));
            }
            if p.intersects(&seen) {
                return Err(Error::input("parts overlap"));
            }
            seen.union_with(p);
        }
        if seen.len() != n {
            return Err(Error::input("parts do not cover the vertex set"));
        }
        let min = parts.iter().map(|p| p.len()).min().unwrap_or(0);
        let max = parts.iter().map(|p| p.len()).max().unwrap_or(0);
        if max - min > 1 {
            return Err(Error::input(format!(
                "part sizes range from {min} to {max}"
            )));
        }
        Ok(Equipartition { parts })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    pub fn universe(&self) -> usize {
        self.parts.first().map(|p| p.universe()).unwrap_or(0)
    }
}

/// Part sizes of an `L`-part equipartition of `n`, larger parts first.
pub fn equipartition_sizes(n: usize, parts: usize) -> Vec<usize> {
    let q = n / parts;
    let r = n % parts;
    (0..parts).map(|i| if i < r { q + 1 } else { q }).collect()
}

/// Equipartition of `[0, n)` into `parts` index ranges.
pub fn equipartition(n: usize, parts: usize) -> Result<Equipartition> {
    Equipartition::contiguous(n, parts)
}
