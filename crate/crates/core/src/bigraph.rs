//! Bipartite patterns and bi-induced copy search.
//!
//! A bi-induced copy only constrains pairs across the two sides; adjacency
//! between images on the same side is free.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{content_lines, parse_num, Graph};
use crate::vertex_set::VertexSet;

/// Largest pattern the exact search accepts.
pub const MAX_PATTERN: usize = 10;
/// Largest host graph the exact search accepts.
pub const MAX_HOST: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternSide {
    One,
    Two,
}

/// A pattern with sides of size `side1` and `side2` and cross edges only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bigraph {
    side1: usize,
    side2: usize,
    /// `rows[i]` holds the side-2 neighbours of side-1 vertex `i`.
    rows: Vec<Vec<bool>>,
}

impl Bigraph {
    pub fn empty(side1: usize, side2: usize) -> Self {
        Bigraph {
            side1,
            side2,
            rows: vec![vec![false; side2]; side1],
        }
    }

    pub fn complete(side1: usize, side2: usize) -> Self {
        Bigraph {
            side1,
            side2,
            rows: vec![vec![true; side2]; side1],
        }
    }

    pub fn new(side1: usize, side2: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut h = Bigraph::empty(side1, side2);
        for &(i, j) in edges {
            if i >= side1 || j >= side2 {
                return Err(Error::input(format!(
                    "cross edge ({i},{j}) outside {side1}+{side2}"
                )));
            }
            h.rows[i][j] = true;
        }
        Ok(h)
    }

    /// Side 1 holds `d` points, side 2 one vertex per non-empty subset of them,
    /// adjacent to exactly its members. A graph containing a bi-induced copy has
    /// VC-dimension at least `d`.
    pub fn shattering_witness(d: usize) -> Self {
        assert!(d < 8, "witness too large");
        let subsets = (1usize << d) - 1;
        let mut h = Bigraph::empty(d, subsets);
        for j in 0..subsets {
            let mask = j + 1;
            for i in 0..d {
                h.rows[i][j] = mask >> i & 1 == 1;
            }
        }
        h
    }

    pub fn side1(&self) -> usize {
        self.side1
    }

    pub fn side2(&self) -> usize {
        self.side2
    }

    /// `|H|`, the total number of vertices.
    pub fn size(&self) -> usize {
        self.side1 + self.side2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.side1 {
            for j in 0..self.side2 {
                if self.rows[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn cross_degree(&self, side: PatternSide, idx: usize) -> usize {
        match side {
            PatternSide::One => self.rows[idx].iter().filter(|&&e| e).count(),
            PatternSide::Two => self.rows.iter().filter(|r| r[idx]).count(),
        }
    }

    pub fn bicomplement(&self) -> Bigraph {
        Bigraph {
            side1: self.side1,
            side2: self.side2,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| !e).collect())
                .collect(),
        }
    }

    /// Removes one vertex, compacting the indices on its side.
    pub fn delete_vertex(&self, side: PatternSide, idx: usize) -> Result<Bigraph> {
        match side {
            PatternSide::One => {
                if idx >= self.side1 {
                    return Err(Error::input(format!("side-1 index {idx} out of range")));
                }
                let mut rows = self.rows.clone();
                rows.remove(idx);
                Ok(Bigraph {
                    side1: self.side1 - 1,
                    side2: self.side2,
                    rows,
                })
            }
            PatternSide::Two => {
                if idx >= self.side2 {
                    return Err(Error::input(format!("side-2 index {idx} out of range")));
                }
                let rows = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.remove(idx);
                        r
                    })
                    .collect();
                Ok(Bigraph {
                    side1: self.side1,
                    side2: self.side2 - 1,
                    rows,
                })
            }
        }
    }

    /// The vertex of largest cross-degree; ties go to side 1, then the lowest index.
    pub fn max_degree_vertex(&self) -> Option<(PatternSide, usize)> {
        let mut best: Option<(usize, PatternSide, usize)> = None;
        let candidates = (0..self.side1)
            .map(|i| (PatternSide::One, i))
            .chain((0..self.side2).map(|j| (PatternSide::Two, j)));
        for (side, idx) in candidates {
            let d = self.cross_degree(side, idx);
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, side, idx));
            }
        }
        best.map(|(_, s, i)| (s, i))
    }

    /// The pattern with its maximum cross-degree vertex removed.
    pub fn shrink(&self) -> Option<Bigraph> {
        let (side, idx) = self.max_degree_vertex()?;
        self.delete_vertex(side, idx).ok()
    }

    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut out = String::new();
        let _ = writeln!(out, "bigraph {} {} {}", self.side1, self.side2, edges.len());
        for (i, j) in edges {
            let _ = writeln!(out, "e {i} {j}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Bigraph> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "bigraph" {
            return Err(Error::parse(ln, "expected `bigraph <s1> <s2> <m>`"));
        }
        let s1: usize = parse_num(parts[1], ln)?;
        let s2: usize = parse_num(parts[2], ln)?;
        let m: usize = parse_num(parts[3], ln)?;
        let mut h = Bigraph::empty(s1, s2);
        let mut seen = 0;
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "e" {
                return Err(Error::parse(ln, "expected `e <i> <j>`"));
            }
            let i: usize = parse_num(parts[1], ln)?;
            let j: usize = parse_num(parts[2], ln)?;
            if i >= s1 || j >= s2 {
                return Err(Error::parse(
                    ln,
                    format!("cross edge ({i},{j}) out of range"),
                ));
            }
            if h.rows[i][j] {
                return Err(Error::parse(ln, "duplicate cross edge"));
            }
            h.rows[i][j] = true;
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                0,
                format!("header declares {m} edges, found {seen}"),
            ));
        }
        Ok(h)
    }

    /// Pattern vertex `p` in a flat numbering: side 1 first, then side 2.
    fn flat(&self, p: usize) -> (PatternSide, usize) {
        if p < self.side1 {
            (PatternSide::One, p)
        } else {
            (PatternSide::Two, p - self.side1)
        }
    }

    /// True iff `map` (flat numbering) is an injective bi-induced copy in `g`.
    pub fn is_bi_induced_copy(&self, g: &Graph, map: &[usize]) -> bool {
        if map.len() != self.size() || map.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut seen = VertexSet::new(g.n());
        if !map.iter().all(|&v| seen.insert(v)) {
            return false;
        }
        (0..self.side1).all(|i| {
            (0..self.side2).all(|j| self.rows[i][j] == g.has_edge(map[i], map[self.side1 + j]))
        })
    }
}

/// Searches for a bi-induced copy of `h` in `g` by backtracking.
///
/// Returns the image of each pattern vertex in flat numbering (side 1, then
/// side 2). `None` means the exhaustive search found no copy.
pub fn find_bi_induced(g: &Graph, h: &Bigraph) -> Result<Option<Vec<usize>>> {
    if h.size() > MAX_PATTERN {
        return Err(Error::refused(format!(
            "pattern of {} vertices exceeds {MAX_PATTERN}",
            h.size()
        )));
    }
    if g.n() > MAX_HOST {
        return Err(Error::refused(format!(
            "host of {} vertices exceeds {MAX_HOST}",
            g.n()
        )));
    }
    if h.size() > g.n() {
        return Ok(None);
    }
    // Descending cross-degree, side 1 first, lowest index first.
    let mut order: Vec<usize> = (0..h.size()).collect();
    order.sort_by_key(|&p| {
        let (side, idx) = h.flat(p);
        (std::cmp::Reverse(h.cross_degree(side, idx)), side, idx)
    });
    let mut map = vec![usize::MAX; h.size()];
    let mut used = VertexSet::new(g.n());
    let found = search(g, h, &order, 0, &mut map, &mut used);
    if found {
        debug_assert!(h.is_bi_induced_copy(g, &map));
        if !h.is_bi_induced_copy(g, &map) {
            return Err(Error::input(
                "internal: bi-induced search produced an invalid map",
            ));
        }
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn search(
    g: &Graph,
    h: &Bigraph,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut VertexSet,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    let (side, idx) = h.flat(p);
    let mut cands = used.complement();
    for &q in &order[..depth] {
        let (qside, qidx) = h.flat(q);
        if qside == side {
            continue;
        }
        let edge = match side {
            PatternSide::One => h.rows[idx][qidx],
            PatternSide::Two => h.rows[qidx][idx],
        };
        let nb = g.neighbours(map[q]);
        if edge {
            cands.intersect_with(nb);
        } else {
            cands.difference_with(nb);
        }
        if cands.is_empty() {
            return false;
        }
    }
    for v in cands.iter() {
        map[p] = v;
        used.insert(v);
        if search(g, h, order, depth + 1, map, used) {
            return true;
        }
        used.remove(v);
    }
    map[p] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bicomplement_examples() {
        let e = Bigraph::new(1, 1, &[(0, 0)]).unwrap();
        assert_eq!(e.bicomplement(), Bigraph::empty(1, 1));
        assert_eq!(Bigraph::complete(2, 2).bicomplement(), Bigraph::empty(2, 2));
        assert_eq!(Bigraph::empty(0, 0).bicomplement(), Bigraph::empty(0, 0));
    }

    #[test]
    fn delete_vertex_examples() {
        let e = Bigraph::new(1, 1, &[(0, 0)]).unwrap();
        assert_eq!(
            e.delete_vertex(PatternSide::One, 0).unwrap(),
            Bigraph::empty(0, 1)
        );
        assert_eq!(
            Bigraph::complete(2, 2)
                .delete_vertex(PatternSide::Two, 1)
                .unwrap(),
            Bigraph::complete(2, 1)
        );
        assert_eq!(
            Bigraph::empty(3, 3)
                .delete_vertex(PatternSide::Two, 0)
                .unwrap(),
            Bigraph::empty(3, 2)
        );
        assert!(e.delete_vertex(PatternSide::Two, 1).is_err());
    }

    #[test]
    fn delete_compacts_order() {
        let h = Bigraph::new(1, 3, &[(0, 2)]).unwrap();
        let d = h.delete_vertex(PatternSide::Two, 0).unwrap();
        assert_eq!(d.edges(), vec![(0, 1)]);
    }

    #[test]
    fn find_examples() {
        let edge = Bigraph::new(1, 1, &[(0, 0)]).unwrap();
        assert!(find_bi_induced(&Graph::complete(2), &edge)
            .unwrap()
            .is_some());
        assert!(find_bi_induced(&Graph::empty(5), &edge).unwrap().is_none());
        let non_edge = Bigraph::empty(1, 1);
        assert!(find_bi_induced(&Graph::complete(3), &non_edge)
            .unwrap()
            .is_none());
    }

    #[test]
    fn same_side_adjacency_is_free() {
        // Two side-1 vertices both adjacent to one side-2 vertex: a triangle hosts it.
        let h = Bigraph::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert!(find_bi_induced(&Graph::complete(3), &h).unwrap().is_some());
    }

    #[test]
    fn caps_are_enforced() {
        let h = Bigraph::empty(6, 5);
        assert!(matches!(
            find_bi_induced(&Graph::empty(20), &h),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn witness_shape_and_text() {
        let w = Bigraph::shattering_witness(3);
        assert_eq!((w.side1(), w.side2()), (3, 7));
        assert_eq!(w.cross_degree(PatternSide::Two, 6), 3);
        assert_eq!(Bigraph::parse(&w.to_text()).unwrap(), w);
        assert_eq!(w.max_degree_vertex(), Some((PatternSide::One, 0)));
    }
}
