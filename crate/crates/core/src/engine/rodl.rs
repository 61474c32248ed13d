//! Initial restricted subgraphs and the descent that ends in a restricted
//! subgraph or a complete/anticomplete blockade.

use log::debug;

use crate::bigraph::Bigraph;
use crate::blockade::{extract_pure_blockade, Blockade};
use crate::error::{BoundNotMet, Error, Result, Stage};
use crate::graph::{is_eps_restricted, Graph, Restriction, Side};
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

use super::anticomplete::restricted_dispatch;
use super::driver::{sparsify_driver, DriverOutcome, DriverRun, Step};
use super::outcome::{lift, BlockadeKind, ExtractionOutcome, Restricted};

/// A `c`-restricted induced subgraph, best effort.
///
/// Strategy A descends into the largest block of a pure blockade until the
/// current subgraph is `c`-restricted; strategy B deletes the vertex of
/// largest `min(degree, co-degree)` until it is. The larger result wins.
pub fn rodl_initial(g: &Graph, c: &Rational, params: &ExponentParams) -> Result<Restricted> {
    if g.n() == 0 {
        return Err(Error::input("empty graph"));
    }
    if !c.in_open_half() {
        return Err(Error::input(format!("c = {c} outside (0, 1/2)")));
    }
    if let Some(side) = is_eps_restricted(g, c)?.side() {
        return Ok(Restricted {
            set: g.vertex_set(),
            side,
            eps: c.clone(),
        });
    }
    let a = by_blockade(g, c, params)?;
    let b = by_deletion(g, c);
    debug!(
        "rodl: blockade descent {} vertices, deletion {} vertices",
        a.as_ref().map_or(0, |r| r.set.len()),
        b.set.len()
    );
    Ok(match a {
        Some(a) if a.set.len() >= b.set.len() => a,
        _ => b,
    })
}

fn side_at(g: &Graph, set: &VertexSet, c: &Rational) -> Option<Side> {
    match g.restriction_of(set, c) {
        Restriction::No => None,
        r => r.side(),
    }
}

fn by_blockade(g: &Graph, c: &Rational, params: &ExponentParams) -> Result<Option<Restricted>> {
    let n = g.n();
    let mut cur = g.vertex_set();
    loop {
        if let Some(side) = side_at(g, &cur, c) {
            return Ok(Some(Restricted {
                set: cur,
                side,
                eps: c.clone(),
            }));
        }
        let (sub, map) = g.induced(&cur);
        let pb = match extract_pure_blockade(&sub, c, params) {
            Ok(pb) => pb,
            Err(Error::BoundNotMet(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let Some(largest) = pb.blockade.blocks().iter().rev().max_by_key(|b| b.len()) else {
            return Ok(None);
        };
        if largest.len() >= cur.len() {
            return Ok(None);
        }
        cur = lift(largest, &map, n);
    }
}

fn by_deletion(g: &Graph, c: &Rational) -> Restricted {
    let n = g.n();
    let mut set = g.vertex_set();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        if let Some(side) = side_at(g, &set, c) {
            return Restricted {
                set,
                side,
                eps: c.clone(),
            };
        }
        let s = set.len();
        let v = set
            .iter()
            .max_by_key(|&v| (deg[v].min(s - 1 - deg[v]), std::cmp::Reverse(v)))
            .expect("a nonrestricted set is nonempty");
        set.remove(v);
        for u in g.neighbours(v).intersection(&set).iter() {
            deg[u] -= 1;
        }
    }
}

pub(crate) type PolyrodlRun = DriverRun<(BlockadeKind, Blockade)>;

/// Descent from a `c`-restricted start by complement dispatch, keeping the trace.
pub(crate) fn polyrodl_run(
    g: &Graph,
    h: &Bigraph,
    x: &Rational,
    params: &ExponentParams,
) -> Result<PolyrodlRun> {
    let n = g.n();
    let c = params.c.clone();
    sparsify_driver(
        g,
        x,
        &c,
        true,
        |g| rodl_initial(g, &c, params),
        |g, cur| {
            let (sub, map) = g.induced(&cur.set);
            match restricted_dispatch(&sub, h, &cur.eps, params) {
                Ok(ExtractionOutcome::RestrictedSubgraph(r)) => Ok(Step::Descend(r.lift(&map, n))),
                Ok(ExtractionOutcome::PureBlockade { kind, blockade }) => {
                    let blocks = blockade.blocks().iter().map(|b| lift(b, &map, n)).collect();
                    let blockade = Blockade::new(n, blocks)
                        .map_err(|e| BoundNotMet::new(Stage::Descent, e.to_string()))?;
                    Ok(Step::Preempt((kind, blockade)))
                }
                Err(Error::BoundNotMet(b)) => Err(*b),
                Err(e) => Err(BoundNotMet::new(Stage::Descent, e.to_string())),
            }
        },
    )
}

/// An `x`-restricted induced subgraph or a complete/anticomplete blockade.
pub fn polyrodl_dispatch(
    g: &Graph,
    h: &Bigraph,
    x: &Rational,
    params: &ExponentParams,
) -> Result<ExtractionOutcome> {
    if Rational::ratio(1, 2).pow(params.d) <= *x {
        debug!("polyrodl: x = {x} not below 2^-{}", params.d);
    }
    let run = polyrodl_run(g, h, x, params)?;
    let out = match run.outcome {
        Ok(DriverOutcome::Restricted(r)) => ExtractionOutcome::RestrictedSubgraph(r),
        Ok(DriverOutcome::Preempted((kind, blockade))) => {
            ExtractionOutcome::PureBlockade { kind, blockade }
        }
        Err(b) => return Err(b.into()),
    };
    if !out.verify(g) {
        return Err(
            BoundNotMet::new(Stage::Verification, "descent outcome failed verification")
                .with_trace(run.trace)
                .into(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cliques(k: usize, s: usize) -> Graph {
        let mut edges = Vec::new();
        for c in 0..k {
            for i in 0..s {
                for j in i + 1..s {
                    edges.push((c * s + i, c * s + j));
                }
            }
        }
        Graph::from_edges(k * s, &edges).unwrap()
    }

    #[test]
    fn cycle_is_already_restricted() {
        let g = Graph::cycle(5);
        let r = rodl_initial(&g, &Rational::ratio(2, 5), &ExponentParams::default()).unwrap();
        assert_eq!(r.set.len(), 5);
        assert!(r.verify(&g));
    }

    #[test]
    fn two_cliques_with_matching() {
        let mut edges = Vec::new();
        for side in 0..2 {
            for i in 0..50 {
                for j in i + 1..50 {
                    edges.push((side * 50 + i, side * 50 + j));
                }
            }
        }
        edges.extend((0..50).map(|i| (i, 50 + i)));
        let g = Graph::from_edges(100, &edges).unwrap();
        let r = rodl_initial(&g, &Rational::ratio(1, 10), &ExponentParams::default()).unwrap();
        assert!(r.verify(&g));
        assert!(r.set.len() >= 40, "size {}", r.set.len());
    }

    #[test]
    fn clique_union_gives_blockade() {
        let g = cliques(10, 50);
        let out = polyrodl_dispatch(
            &g,
            &Bigraph::shattering_witness(1),
            &Rational::ratio(1, 10),
            &ExponentParams::default(),
        )
        .unwrap();
        assert!(out.verify(&g));
        let ExtractionOutcome::PureBlockade { kind, blockade } = out else {
            panic!("expected a blockade")
        };
        assert_eq!(kind, BlockadeKind::Anticomplete);
        assert!(blockade.len() >= 2);
    }

    #[test]
    fn complete_graph_is_dense_restricted() {
        let g = Graph::complete(100);
        let r = rodl_initial(&g, &Rational::ratio(1, 4), &ExponentParams::default()).unwrap();
        assert_eq!((r.set.len(), r.side), (100, Side::Dense));
    }

    #[test]
    fn empty_graph_outcome_verifies() {
        let g = Graph::empty(64);
        let out = polyrodl_dispatch(
            &g,
            &Bigraph::shattering_witness(1),
            &Rational::ratio(1, 16),
            &ExponentParams::default(),
        )
        .unwrap();
        assert!(out.verify(&g));
    }
}
