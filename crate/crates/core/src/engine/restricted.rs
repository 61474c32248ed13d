//! `eps`-restricted induced subgraphs from unions of pure blocks.

use log::debug;

use crate::bigraph::{find_bi_induced, Bigraph};
use crate::blockade::extract_pure_blockade;
use crate::error::{BoundNotMet, Error, Result, Stage};
use crate::graph::{is_eps_restricted, Graph, SetKind, Side};
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

use super::anticomplete::block_graph;
use super::cograph::clique_or_stable;
use super::outcome::Restricted;

/// Largest block graph searched for a bi-induced copy of the pattern.
const PATTERN_CHECK_MAX: usize = 64;

/// An `eps`-restricted induced subgraph of `g`.
///
/// A pure blockade at `eps^{2a}` is reduced to its block graph (edge iff the
/// pair is not mutually sparse); a clique or stable set there selects blocks
/// whose union is dense or sparse. Blocks holding the worst vertex are dropped
/// until the union verifies. With `desk_scale`, the blockade tolerance falls
/// back through `eps^{2a-1}, …, eps` when `n` is too small.
pub fn restricted_extract(
    g: &Graph,
    h: &Bigraph,
    eps: &Rational,
    params: &ExponentParams,
) -> Result<Restricted> {
    params.validate()?;
    if !eps.in_open_half() {
        return Err(Error::input(format!("eps = {eps} outside (0, 1/2)")));
    }
    if g.n() == 0 {
        return Err(Error::input("empty graph"));
    }
    if let Some(side) = is_eps_restricted(g, eps)?.side() {
        return Ok(Restricted {
            set: g.vertex_set(),
            side,
            eps: eps.clone(),
        });
    }
    let top = 2 * params.a;
    let ladder: Vec<u32> = if params.desk_scale {
        (1..=top).rev().collect()
    } else {
        vec![top]
    };
    let mut best = (0, 0);
    let mut last: Option<String> = None;
    for e in ladder {
        let pe = eps.pow(e);
        let pb = match extract_pure_blockade(g, &pe, params) {
            Ok(pb) => pb,
            Err(Error::BoundNotMet(b)) => {
                last = Some(b.to_string());
                continue;
            }
            Err(err) => return Err(err),
        };
        let blocks: Vec<&VertexSet> = pb.blockade.blocks().iter().collect();
        let j = block_graph(g, &blocks, &pe);
        if j.n() <= PATTERN_CHECK_MAX && h.side1() <= j.n() && h.side2() <= j.n() {
            let copy = find_bi_induced(&j, h)?;
            debug!(
                "restricted: block graph on {} blocks, pattern copy {}",
                j.n(),
                copy.is_some()
            );
        }
        let pick = clique_or_stable(&j, h, params)?;
        let side = match pick.kind {
            SetKind::Stable => Side::Sparse,
            SetKind::Clique => Side::Dense,
        };
        let mut chosen = pick.set.to_vec();
        best = best.max((chosen.len(), pb.blockade.width()));
        while !chosen.is_empty() {
            let mut union = VertexSet::new(g.n());
            for &i in &chosen {
                union.union_with(blocks[i]);
            }
            if g.is_restricted_on(&union, side, eps) {
                debug!(
                    "restricted: {} blocks at eps^{e}, {} vertices",
                    chosen.len(),
                    union.len()
                );
                return Ok(Restricted {
                    set: union,
                    side,
                    eps: eps.clone(),
                });
            }
            let worst = worst_vertex(g, &union, side);
            chosen.retain(|&i| !blocks[i].contains(worst));
        }
        last = Some(format!("no verified union at eps^{e}"));
    }
    Err(
        BoundNotMet::new(Stage::RestrictedUnion, last.unwrap_or_default())
            .with_achieved(best.0, best.1)
            .into(),
    )
}

fn worst_vertex(g: &Graph, set: &VertexSet, side: Side) -> usize {
    let s = set.len();
    set.iter()
        .max_by_key(|&v| {
            let d = g.neighbours(v).intersection_len(set);
            let bad = match side {
                Side::Sparse => d,
                Side::Dense => s - 1 - d,
            };
            (bad, std::cmp::Reverse(v))
        })
        .expect("nonempty union")
}
