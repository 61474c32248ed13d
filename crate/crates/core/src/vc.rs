//! Shattering and VC-dimension of set families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hyper::Hypergraph;
use crate::tournament::Tournament;
use crate::vertex_set::VertexSet;

/// Largest trace set `shatters` will enumerate.
pub const MAX_SHATTER_SIZE: usize = 25;
/// Largest universe the exact VC search accepts.
pub const MAX_EXACT_UNIVERSE: usize = 40;

/// A family of subsets of `[0, universe)`. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<VertexSet>,
}

impl SetFamily {
    pub fn new(universe: usize, sets: Vec<VertexSet>) -> Result<Self> {
        if sets.iter().any(|s| s.universe() != universe) {
            return Err(Error::input("family member over a different universe"));
        }
        Ok(SetFamily { universe, sets })
    }

    pub fn from_lists(universe: usize, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| VertexSet::try_from_slice(universe, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(SetFamily { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn push(&mut self, s: VertexSet) -> Result<()> {
        if s.universe() != self.universe {
            return Err(Error::input("family member over a different universe"));
        }
        self.sets.push(s);
        Ok(())
    }

    /// Number of distinct traces on the whole universe, i.e. distinct members.
    pub fn distinct_len(&self) -> usize {
        self.sets.iter().collect::<HashSet<_>>().len()
    }
}

/// True iff every subset of `s` arises as `B ∩ s` for some member `B`.
pub fn shatters(fam: &SetFamily, s: &VertexSet) -> Result<bool> {
    if s.universe() != fam.universe {
        return Err(Error::input("candidate set over a different universe"));
    }
    if s.len() > MAX_SHATTER_SIZE {
        return Err(Error::refused(format!(
            "shattering test on {} elements exceeds the cap of {MAX_SHATTER_SIZE}",
            s.len()
        )));
    }
    let members = s.to_vec();
    let need = 1usize << members.len();
    if fam.sets.len() < need {
        return Ok(false);
    }
    let mut traces = HashSet::with_capacity(need);
    for b in &fam.sets {
        let mut t = 0u32;
        for (i, &x) in members.iter().enumerate() {
            if b.contains(x) {
                t |= 1 << i;
            }
        }
        traces.insert(t);
        if traces.len() == need {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact VC-dimension by level-wise search over shattered sets.
///
/// Shattered sets form a down-closed family, so level `s + 1` only needs
/// candidates all of whose `s`-subsets were shattered.
pub fn vc_dimension(fam: &SetFamily) -> Result<usize> {
    if fam.universe > MAX_EXACT_UNIVERSE {
        return Err(Error::refused(format!(
            "universe of {} exceeds the exact cap of {MAX_EXACT_UNIVERSE}; use vc_lower_bound",
            fam.universe
        )));
    }
    let masks: Vec<u64> = {
        let mut m: Vec<u64> = fam
            .sets
            .iter()
            .map(|s| s.words().first().copied().unwrap_or(0))
            .collect();
        m.sort_unstable();
        m.dedup();
        m
    };
    if masks.len() < 2 {
        return Ok(0);
    }
    let shattered = |cand: u64, size: u32| -> bool {
        let need = 1usize << size;
        if masks.len() < need {
            return false;
        }
        let mut seen = HashSet::with_capacity(need);
        for &m in &masks {
            seen.insert(m & cand);
            if seen.len() == need {
                return true;
            }
        }
        false
    };

    let mut level: Vec<u64> = (0..fam.universe)
        .map(|x| 1u64 << x)
        .filter(|&c| shattered(c, 1))
        .collect();
    let mut dim = 0;
    let mut size = 1u32;
    while !level.is_empty() {
        dim = size as usize;
        if size as usize >= MAX_SHATTER_SIZE {
            break;
        }
        let prev: HashSet<u64> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &s in &level {
            let top = 63 - s.leading_zeros();
            for x in top + 1..fam.universe as u32 {
                let cand = s | (1u64 << x);
                // Every subset one smaller must already be shattered.
                let mut rest = s;
                let mut ok = true;
                while rest != 0 {
                    let low = rest & rest.wrapping_neg();
                    if !prev.contains(&(cand & !low)) {
                        ok = false;
                        break;
                    }
                    rest &= rest - 1;
                }
                if ok && shattered(cand, size + 1) {
                    next.push(cand);
                }
            }
        }
        level = next;
        size += 1;
    }
    Ok(dim)
}

/// A VC-dimension lower bound from seeded random growth; always approximate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VcEstimate {
    pub lower_bound: usize,
    pub approximate: bool,
}

/// Sampled lower bound for universes too large for the exact search.
///
/// Each attempt grows a random candidate one element at a time, keeping
/// elements that preserve shattering.
pub fn vc_lower_bound(fam: &SetFamily, seed: u64, attempts: usize) -> VcEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut order: Vec<usize> = (0..fam.universe).collect();
    for _ in 0..attempts.max(1) {
        order.shuffle(&mut rng);
        let mut cand = VertexSet::new(fam.universe);
        for &x in &order {
            if cand.len() >= MAX_SHATTER_SIZE || (1usize << (cand.len() + 1)) > fam.sets.len() {
                break;
            }
            cand.insert(x);
            if !shatters(fam, &cand).unwrap_or(false) {
                cand.remove(x);
            }
        }
        best = best.max(cand.len());
    }
    VcEstimate {
        lower_bound: best,
        approximate: true,
    }
}

/// Open neighbourhoods of a graph, one set per vertex.
pub fn graph_neighbourhoods(g: &Graph) -> SetFamily {
    SetFamily {
        universe: g.n(),
        sets: (0..g.n()).map(|v| g.neighbours(v).clone()).collect(),
    }
}

/// Largest number of `(k-1)`-subsets enumerated for a hypergraph family.
pub const MAX_HYPER_SUBSETS: u128 = 2_000_000;

/// `N(S) = {v : S ∪ {v} ∈ E}` for every `(k-1)`-subset `S`.
pub fn hypergraph_neighbourhoods(hg: &Hypergraph) -> Result<SetFamily> {
    let k = hg.k();
    if k < 2 {
        return Err(Error::input("hypergraph uniformity must be at least 2"));
    }
    let count = crate::hyper::binomial(hg.n() as u64, (k - 1) as u64);
    if count > MAX_HYPER_SUBSETS {
        return Err(Error::refused(format!(
            "{count} subsets of size {} exceed the enumeration cap",
            k - 1
        )));
    }
    let mut sets = Vec::with_capacity(count as usize);
    crate::hyper::for_each_subset(hg.n(), k - 1, |s| {
        sets.push(hg.link_neighbourhood(s));
    });
    Ok(SetFamily {
        universe: hg.n(),
        sets,
    })
}

/// In-neighbourhoods of a tournament, one set per vertex.
pub fn tournament_in_neighbourhoods(t: &Tournament) -> SetFamily {
    SetFamily {
        universe: t.n(),
        sets: (0..t.n()).map(|v| t.in_neighbours(v)).collect(),
    }
}

/// Sources accepted by [`neighbourhood_family`].
pub enum Source<'a> {
    Graph(&'a Graph),
    Hypergraph(&'a Hypergraph),
    Tournament(&'a Tournament),
}

pub fn neighbourhood_family(source: Source<'_>) -> Result<SetFamily> {
    match source {
        Source::Graph(g) => Ok(graph_neighbourhoods(g)),
        Source::Hypergraph(h) => hypergraph_neighbourhoods(h),
        Source::Tournament(t) => Ok(tournament_in_neighbourhoods(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(universe: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(universe, lists).unwrap()
    }

    #[test]
    fn shatter_examples() {
        let f = fam(2, &[&[], &[0], &[1], &[0, 1]]);
        assert!(shatters(&f, &VertexSet::full(2)).unwrap());
        let f = fam(1, &[&[]]);
        assert!(!shatters(&f, &VertexSet::full(1)).unwrap());
        let f = fam(2, &[&[0], &[0, 1]]);
        assert!(shatters(&f, &VertexSet::from_iter_in(2, [1])).unwrap());
        let big = VertexSet::full(30);
        assert!(matches!(
            shatters(&fam(30, &[&[]]), &big),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn vc_examples() {
        assert_eq!(
            vc_dimension(&graph_neighbourhoods(&Graph::empty(3))).unwrap(),
            0
        );
        assert_eq!(
            vc_dimension(&graph_neighbourhoods(&Graph::complete(3))).unwrap(),
            1
        );
        let power: Vec<Vec<usize>> = (0..8u32)
            .map(|m| (0..3).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        let lists: Vec<&[usize]> = power.iter().map(|v| v.as_slice()).collect();
        assert_eq!(vc_dimension(&fam(3, &lists)).unwrap(), 3);
        assert!(matches!(
            vc_dimension(&fam(41, &[])),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn k3_family() {
        let f = graph_neighbourhoods(&Graph::complete(3));
        let lists: Vec<Vec<usize>> = f.sets().iter().map(|s| s.to_vec()).collect();
        assert_eq!(lists, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn lower_bound_is_flagged_and_sound() {
        let g = Graph::cycle(60);
        let est = vc_lower_bound(&graph_neighbourhoods(&g), 3, 20);
        assert!(est.approximate);
        assert!(est.lower_bound >= 1);
    }
}
