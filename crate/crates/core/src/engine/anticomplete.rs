//! Anticomplete pairs and blockades in sparse graphs, and the complement dispatch.

use log::{debug, warn};

use crate::bigraph::Bigraph;
use crate::blockade::{extract_pure_blockade, Blockade};
use crate::error::{BoundNotMet, Error, Result, Stage};
use crate::graph::{is_eps_restricted, Graph, Restriction, SetKind, Side};
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

use super::baseline::ramsey_baseline;
use super::cograph::clique_or_stable;
use super::outcome::{lift, BlockadeKind, ExtractionOutcome, Restricted};

/// Result of the anticomplete pair search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    Restricted(Restricted),
    /// `a` and `b` are disjoint and anticomplete.
    Pair {
        a: VertexSet,
        b: VertexSet,
    },
}

/// Searches a `y`-sparse graph for a large anticomplete pair `(A, B)` with
/// `|B| ≥ (1-3y)|F|`, or a `y^a`-sparse induced subgraph.
///
/// A pure blockade is built at `y^{3a²}` (with `desk_scale`, falling back to
/// larger tolerances). A block with few mixed outside vertices gives the pair;
/// otherwise the blocks mixed by the most-mixing outside vertex form a block
/// graph, whose clique or stable set (under the shrunk pattern) selects blocks
/// for a sparse or dense union. Without any blockade, `A` is grown greedily
/// from a minimum-degree vertex.
pub fn find_anticomplete_pair(
    f: &Graph,
    h: &Bigraph,
    y: &Rational,
    params: &ExponentParams,
) -> Result<PairOutcome> {
    let n = f.n();
    if n == 0 {
        return Err(Error::input("empty graph"));
    }
    if !y.in_open_half() {
        return Err(Error::input(format!("y = {y} outside (0, 1/2)")));
    }
    if f.max_degree() > y.floor_mul(n) {
        return Err(Error::input(format!("graph is not {y}-sparse")));
    }
    if y.mul_int(h.size()) >= Rational::one() {
        if !params.desk_scale {
            return Err(Error::input(format!(
                "y = {y} is not below 1/|H| = 1/{}",
                h.size()
            )));
        }
        debug!("pair search: y = {y} not below 1/{}", h.size());
    }
    let a = params.a;
    let min_a = y.pow(3 * params.b * a * a).ceil_mul(n).max(1);
    let min_b = mass_bound(y, n);

    let top = 3 * a * a;
    let ladder: Vec<u32> = if params.desk_scale {
        (1..=top).rev().collect()
    } else {
        vec![top]
    };
    let mut best: Option<BoundNotMet> = None;
    for e in ladder {
        let eps = y.pow(e);
        let pb = match extract_pure_blockade(f, &eps, params) {
            Ok(pb) => pb,
            Err(Error::BoundNotMet(b)) => {
                best = Some(*b);
                continue;
            }
            Err(err) => return Err(err),
        };
        let blocks = pb.blockade.blocks();
        let union = pb.blockade.union();
        let outside = union.complement();
        let mixed_cap = y.floor_mul(outside.len());
        let mut mixers = vec![0usize; n];
        for (i, block) in blocks.iter().enumerate() {
            let mut mixed = 0;
            let mut anti = VertexSet::new(n);
            for (v, m) in mixers.iter_mut().enumerate() {
                if block.contains(v) {
                    continue;
                }
                let d = f.neighbours(v).intersection_len(block);
                if d == 0 {
                    anti.insert(v);
                } else if d < block.len() && outside.contains(v) {
                    mixed += 1;
                    *m += 1;
                }
            }
            if mixed <= mixed_cap && anti.len() >= min_b && block.len() >= min_a {
                let (a_set, b_set) = extend_pair(f, block.clone(), anti, min_b, y.floor_mul(n));
                debug!(
                    "pair search: block {i} at eps = {eps} gives |A| = {}, |B| = {}",
                    a_set.len(),
                    b_set.len()
                );
                return Ok(PairOutcome::Pair { a: a_set, b: b_set });
            }
        }
        let w = (0..n)
            .filter(|&v| outside.contains(v))
            .max_by_key(|&v| (mixers[v], std::cmp::Reverse(v)));
        let chosen: Vec<usize> = match w {
            Some(w) if mixers[w] >= 2 => (0..blocks.len())
                .filter(|&i| {
                    let d = f.neighbours(w).intersection_len(&blocks[i]);
                    d > 0 && d < blocks[i].len()
                })
                .collect(),
            _ => (0..blocks.len()).collect(),
        };
        let target = y.pow(a * params.t).ceil_mul(n).max(1);
        match union_route(
            f,
            h,
            &blocks.iter().collect::<Vec<_>>(),
            &chosen,
            &eps,
            &y.pow(a),
            target,
            params,
        )? {
            Some(r) => return Ok(PairOutcome::Restricted(r)),
            None => {
                best = Some(BoundNotMet::new(
                    Stage::AnticompletePair,
                    format!("no pair or restricted union at eps = {eps}"),
                ))
            }
        }
    }

    if let Some((a_set, b_set)) = greedy_pair(f, y, min_b) {
        if a_set.len() >= min_a {
            return Ok(PairOutcome::Pair { a: a_set, b: b_set });
        }
    }
    let detail = best.map(|b| b.to_string()).unwrap_or_default();
    Err(BoundNotMet::new(
        Stage::AnticompletePair,
        format!("no anticomplete pair with |B| ≥ {min_b}; {detail}"),
    )
    .into())
}

/// `⌈(1-3y)n⌉`, or 0 when `3y ≥ 1`.
fn mass_bound(y: &Rational, n: usize) -> usize {
    let rest = Rational::one().sub(&y.mul_int(3));
    if rest.is_positive() {
        rest.ceil_mul(n)
    } else {
        0
    }
}

/// Grows `A` from a minimum-degree vertex with `B` the common non-neighbours.
fn greedy_pair(f: &Graph, y: &Rational, min_b: usize) -> Option<(VertexSet, VertexSet)> {
    let n = f.n();
    let v = (0..n).min_by_key(|&v| (f.degree(v), v))?;
    let mut b = f.vertex_set();
    b.remove(v);
    b.difference_with(f.neighbours(v));
    if b.len() < min_b {
        return None;
    }
    Some(extend_pair(
        f,
        VertexSet::from_iter_in(n, [v]),
        b,
        min_b,
        y.floor_mul(n),
    ))
}

/// Moves vertices of fewest neighbours in `B` from `B` into `A`, dropping
/// their neighbours from `B`, while `|B|` stays at least `min_b` and `|A|`
/// stays at most `cap`.
fn extend_pair(
    f: &Graph,
    mut a: VertexSet,
    mut b: VertexSet,
    min_b: usize,
    cap: usize,
) -> (VertexSet, VertexSet) {
    let mut deg = vec![0usize; f.n()];
    for u in &b {
        deg[u] = f.neighbours(u).intersection_len(&b);
    }
    while a.len() < cap {
        let Some(u) = b.iter().min_by_key(|&u| (deg[u], u)) else {
            break;
        };
        if b.len() - 1 - deg[u] < min_b.max(1) {
            break;
        }
        let mut gone = b.intersection(f.neighbours(u));
        gone.insert(u);
        b.difference_with(&gone);
        for r in &gone {
            for w in f.neighbours(r).intersection(&b).iter() {
                deg[w] -= 1;
            }
        }
        a.insert(u);
    }
    (a, b)
}

/// Picks blocks by a clique or stable set of the block graph on `chosen`
/// (edge iff the pair is not mutually `eps`-sparse) and returns their union if
/// it is `level`-restricted after greedy shrinking with at least `target`
/// vertices.
#[allow(clippy::too_many_arguments)]
pub(crate) fn union_route(
    g: &Graph,
    h: &Bigraph,
    blocks: &[&VertexSet],
    chosen: &[usize],
    eps: &Rational,
    level: &Rational,
    target: usize,
    params: &ExponentParams,
) -> Result<Option<Restricted>> {
    let k = chosen.len();
    if k == 0 {
        return Ok(None);
    }
    let sel: Vec<&VertexSet> = chosen.iter().map(|&i| blocks[i]).collect();
    let j = block_graph(g, &sel, eps);
    let pick = match h.shrink() {
        Some(h2) if h2.size() > 1 => clique_or_stable(&j, &h2, params)?,
        _ => ramsey_baseline(&j),
    };
    let side = match pick.kind {
        SetKind::Stable => Side::Sparse,
        SetKind::Clique => Side::Dense,
    };
    let mut set = VertexSet::new(g.n());
    for x in &pick.set {
        set.union_with(sel[x]);
    }
    debug!(
        "union route: {} of {k} blocks as {}, {} vertices",
        pick.set.len(),
        pick.kind,
        set.len()
    );
    Ok(shrink_to_level(g, set, side, level, target))
}

/// Graph on the blocks with an edge iff the pair is not mutually `eps`-sparse.
pub(crate) fn block_graph(g: &Graph, blocks: &[&VertexSet], eps: &Rational) -> Graph {
    let k = blocks.len();
    let mut j = Graph::empty(k);
    for x in 0..k {
        for z in x + 1..k {
            let (p, q) = (blocks[x], blocks[z]);
            let lp = eps.floor_mul(p.len());
            let lq = eps.floor_mul(q.len());
            let sparse = p.iter().all(|v| g.neighbours(v).intersection_len(q) <= lq)
                && q.iter().all(|v| g.neighbours(v).intersection_len(p) <= lp);
            if !sparse {
                j.add_edge(x, z);
            }
        }
    }
    j
}

/// Deletes the worst vertex until the set is `level`-restricted on `side`;
/// gives up below `target` vertices.
pub(crate) fn shrink_to_level(
    g: &Graph,
    mut set: VertexSet,
    side: Side,
    level: &Rational,
    target: usize,
) -> Option<Restricted> {
    let n = g.n();
    let mut deg = vec![0usize; n];
    for v in &set {
        deg[v] = g.neighbours(v).intersection_len(&set);
    }
    loop {
        let s = set.len();
        if s < target || s == 0 {
            return None;
        }
        let bad = |v: usize| match side {
            Side::Sparse => deg[v],
            Side::Dense => s - 1 - deg[v],
        };
        let (worst, w) = set
            .iter()
            .map(|v| (bad(v), v))
            .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)))?;
        if worst <= level.floor_mul(s) {
            let r = Restricted {
                set,
                side,
                eps: level.clone(),
            };
            return Some(r);
        }
        set.remove(w);
        for u in g.neighbours(w).intersection(&set).iter() {
            deg[u] -= 1;
        }
    }
}

/// Grows an anticomplete blockade of length `⌈y^{-1/2}⌉` in a `y`-sparse
/// graph by repeatedly splitting an anticomplete pair off the residual block.
/// A restricted subgraph found by the pair search is forwarded.
pub fn grow_anticomplete_blockade(
    f: &Graph,
    h: &Bigraph,
    y: &Rational,
    params: &ExponentParams,
) -> Result<ExtractionOutcome> {
    let n = f.n();
    if n == 0 {
        return Err(Error::input("empty graph"));
    }
    if !y.in_open_half() {
        return Err(Error::input(format!("y = {y} outside (0, 1/2)")));
    }
    if f.max_degree() > y.floor_mul(n) {
        return Err(Error::input(format!("graph is not {y}-sparse")));
    }
    let limit = Rational::ratio(1, 2).pow(12 * h.size().min(20) as u32);
    if *y > limit {
        if params.desk_scale {
            debug!("blockade growth: y = {y} above 2^(-12|H|)");
        } else {
            warn!("blockade growth: y = {y} above 2^(-12|H|)");
        }
    }
    let length = y.ceil_inv_sqrt().max(2);
    let width = y.pow(2 * params.b * params.a * params.a).ceil_mul(n).max(1);
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut residual = f.vertex_set();
    let partial = |blocks: &Vec<VertexSet>, residual: &VertexSet| {
        let w = blocks
            .iter()
            .map(VertexSet::len)
            .chain([residual.len()])
            .min()
            .unwrap_or(0);
        (blocks.len() + 1, w)
    };
    while blocks.len() + 1 < length {
        let (sub, map) = f.induced(&residual);
        let r = residual.len();
        let measured = Rational::ratio(sub.max_degree() as u64, r as u64);
        let mut y_pair = y.sqrt_upper().max(measured.clone());
        if !y_pair.in_open_half() && params.desk_scale {
            y_pair = measured.max(y.clone());
        }
        if !y_pair.in_open_half() {
            let (l, w) = partial(&blocks, &residual);
            return Err(BoundNotMet::new(
                Stage::BlockadeGrowth,
                format!("residual of {r} vertices is not sparse enough"),
            )
            .with_achieved(l, w)
            .into());
        }
        match find_anticomplete_pair(&sub, h, &y_pair, params) {
            Ok(PairOutcome::Restricted(rs)) => {
                return Ok(ExtractionOutcome::RestrictedSubgraph(rs.lift(&map, n)));
            }
            Ok(PairOutcome::Pair { a, b }) => {
                let a = lift(&a, &map, n);
                let b = lift(&b, &map, n);
                if a.len() < width || b.len() < width {
                    let (l, w) = partial(&blocks, &residual);
                    return Err(BoundNotMet::new(
                        Stage::BlockadeGrowth,
                        format!("pair ({}, {}) below width {width}", a.len(), b.len()),
                    )
                    .with_achieved(l, w)
                    .into());
                }
                blocks.push(a);
                residual = b;
            }
            Err(Error::BoundNotMet(mut e)) => {
                let (l, w) = partial(&blocks, &residual);
                e.stage = Stage::BlockadeGrowth;
                e.achieved = (l, w);
                return Err(Error::BoundNotMet(e));
            }
            Err(err) => return Err(err),
        }
    }
    blocks.push(residual);
    let blockade = Blockade::new(n, blocks)?;
    if !blockade.is_anticomplete_in(f) {
        return Err(
            BoundNotMet::new(Stage::Verification, "grown blockade is not anticomplete").into(),
        );
    }
    Ok(ExtractionOutcome::PureBlockade {
        kind: BlockadeKind::Anticomplete,
        blockade,
    })
}

/// Runs the blockade growth on whichever of `F` and its complement is `y`-sparse.
pub fn restricted_dispatch(
    f: &Graph,
    h: &Bigraph,
    y: &Rational,
    params: &ExponentParams,
) -> Result<ExtractionOutcome> {
    match is_eps_restricted(f, y)? {
        Restriction::SparseSide => grow_anticomplete_blockade(f, h, y, params),
        Restriction::DenseSide => {
            let out = grow_anticomplete_blockade(&f.complement(), &h.bicomplement(), y, params)?;
            Ok(match out {
                ExtractionOutcome::RestrictedSubgraph(r) => {
                    ExtractionOutcome::RestrictedSubgraph(Restricted {
                        side: r.side.flip(),
                        ..r
                    })
                }
                ExtractionOutcome::PureBlockade { kind, blockade } => {
                    ExtractionOutcome::PureBlockade {
                        kind: kind.flip(),
                        blockade,
                    }
                }
            })
        }
        Restriction::No => Err(Error::input(format!("graph is not {y}-restricted"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Bigraph {
        Bigraph::shattering_witness(1)
    }

    fn params() -> ExponentParams {
        ExponentParams::default()
    }

    fn check_pair(f: &Graph, out: &PairOutcome) {
        match out {
            PairOutcome::Pair { a, b } => {
                assert!(a.is_disjoint(b));
                assert!(f.anticomplete(a, b));
            }
            PairOutcome::Restricted(r) => assert!(r.verify(f)),
        }
    }

    #[test]
    fn pair_in_empty_graph() {
        let f = Graph::empty(100);
        let out = find_anticomplete_pair(&f, &h(), &Rational::ratio(1, 20), &params()).unwrap();
        check_pair(&f, &out);
        let PairOutcome::Pair { a, b } = out else {
            panic!("expected a pair")
        };
        assert!(!a.is_empty());
        assert!(b.len() >= 85);
    }

    #[test]
    fn pair_in_matching() {
        let edges: Vec<_> = (0..100).map(|i| (2 * i, 2 * i + 1)).collect();
        let f = Graph::from_edges(200, &edges).unwrap();
        let out = find_anticomplete_pair(&f, &h(), &Rational::ratio(1, 50), &params()).unwrap();
        check_pair(&f, &out);
        assert!(matches!(out, PairOutcome::Pair { .. }));
    }

    #[test]
    fn pair_rejects_dense() {
        let f = Graph::complete(20);
        assert!(matches!(
            find_anticomplete_pair(&f, &h(), &Rational::ratio(1, 20), &params()),
            Err(Error::Input(_))
        ));
    }

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
    fn blockade_in_clique_union() {
        let f = cliques(30, 10);
        let out = grow_anticomplete_blockade(&f, &h(), &Rational::ratio(1, 25), &params()).unwrap();
        assert!(out.verify(&f));
        let ExtractionOutcome::PureBlockade { kind, blockade } = out else {
            panic!("expected a blockade")
        };
        assert_eq!(kind, BlockadeKind::Anticomplete);
        assert!(blockade.len() >= 5);
    }

    #[test]
    fn blockade_in_empty_graph() {
        let f = Graph::empty(100);
        let out = grow_anticomplete_blockade(&f, &h(), &Rational::ratio(1, 25), &params()).unwrap();
        assert!(out.verify(&f));
        let ExtractionOutcome::PureBlockade { blockade, .. } = out else {
            panic!("expected a blockade")
        };
        assert_eq!(blockade.len(), 5);
    }

    #[test]
    fn blockade_rejects_clique() {
        assert!(grow_anticomplete_blockade(
            &Graph::complete(30),
            &h(),
            &Rational::ratio(1, 25),
            &params()
        )
        .is_err());
    }

    #[test]
    fn dispatch_sides() {
        let p = params();
        let y = Rational::ratio(1, 10);
        let out = restricted_dispatch(&Graph::complete(100), &h(), &y, &p).unwrap();
        assert!(out.verify(&Graph::complete(100)));
        assert!(matches!(
            out,
            ExtractionOutcome::PureBlockade {
                kind: BlockadeKind::Complete,
                ..
            }
        ));
        let out = restricted_dispatch(&Graph::empty(100), &h(), &y, &p).unwrap();
        assert!(matches!(
            out,
            ExtractionOutcome::PureBlockade {
                kind: BlockadeKind::Anticomplete,
                ..
            }
        ));
        assert!(matches!(
            restricted_dispatch(&Graph::path(4), &h(), &Rational::ratio(1, 4), &p),
            Err(Error::Input(_))
        ));
    }
}
