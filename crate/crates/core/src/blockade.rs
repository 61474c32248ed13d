//! Blockades, purity certificates, and pure-blockade extraction from a
//! regularity partition.

use log::debug;

use crate::error::{BoundNotMet, Error, Result, Stage};
use crate::graph::{Graph, Side};
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::regularity::{
    ultra_strong_partition, PairStatus, PartitionStrategy, RegularityOptions, RegularityResult,
};
use crate::turan::greedy_stable;
use crate::vertex_set::VertexSet;

/// Most blocks an extracted blockade keeps; lowest part indices win.
pub const MAX_BLOCKS: usize = 1024;

/// An ordered sequence of pairwise disjoint vertex sets of one host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blockade {
    universe: usize,
    blocks: Vec<VertexSet>,
}

impl Blockade {
    pub fn new(universe: usize, blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::new(universe);
        for b in &blocks {
            if b.universe() != universe {
                return Err(Error::input("block over a different universe"));
            }
            if seen.intersects(b) {
                return Err(Error::input("blockade blocks overlap"));
            }
            seen.union_with(b);
        }
        Ok(Blockade { universe, blocks })
    }

    pub fn empty(universe: usize) -> Self {
        Blockade {
            universe,
            blocks: Vec::new(),
        }
    }

    pub fn push(&mut self, block: VertexSet) -> Result<()> {
        if block.universe() != self.universe {
            return Err(Error::input("block over a different universe"));
        }
        if self.blocks.iter().any(|b| b.intersects(&block)) {
            return Err(Error::input("blockade blocks overlap"));
        }
        self.blocks.push(block);
        Ok(())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<VertexSet> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Smallest block size; 0 for an empty blockade.
    pub fn width(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).min().unwrap_or(0)
    }

    pub fn union(&self) -> VertexSet {
        let mut u = VertexSet::new(self.universe);
        for b in &self.blocks {
            u.union_with(b);
        }
        u
    }

    /// True iff every pair of blocks is anticomplete in `g`.
    pub fn is_anticomplete_in(&self, g: &Graph) -> bool {
        self.all_pairs(|a, b| g.anticomplete(a, b))
    }

    /// True iff every pair of blocks is complete in `g`.
    pub fn is_complete_in(&self, g: &Graph) -> bool {
        self.all_pairs(|a, b| g.complete_between(a, b))
    }

    fn all_pairs(&self, f: impl Fn(&VertexSet, &VertexSet) -> bool) -> bool {
        let k = self.blocks.len();
        (0..k).all(|i| (i + 1..k).all(|j| f(&self.blocks[i], &self.blocks[j])))
    }
}

/// Largest number of neighbours (`Side::Sparse`) or non-neighbours
/// (`Side::Dense`) a vertex of `from` has in `to`. The sets must be disjoint.
pub fn max_cross_degree(g: &Graph, from: &VertexSet, to: &VertexSet, side: Side) -> usize {
    let t = to.len();
    from.iter()
        .map(|v| {
            let d = g.neighbours(v).intersection_len(to);
            match side {
                Side::Sparse => d,
                Side::Dense => t - d,
            }
        })
        .max()
        .unwrap_or(0)
}

/// Which of the four one-way sparsity relations hold for a pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSparsity {
    /// Every vertex of `a` has at most `eps|b|` neighbours in `b`.
    pub a_to_b: bool,
    pub b_to_a: bool,
    /// As `a_to_b`, counting non-neighbours.
    pub a_to_b_complement: bool,
    pub b_to_a_complement: bool,
}

impl PairSparsity {
    /// Mutually sparse in `G` or mutually sparse in the complement.
    pub fn is_pure(&self) -> bool {
        (self.a_to_b && self.b_to_a) || (self.a_to_b_complement && self.b_to_a_complement)
    }
}

/// Exact per-vertex sparsity test of the pair `(a, b)` in both directions, in `G` and its complement.
pub fn check_pair_sparse_to(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Rational,
) -> Result<PairSparsity> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("sparsity test on an empty block"));
    }
    if a.universe() != g.n() || b.universe() != g.n() {
        return Err(Error::input("block over a different universe"));
    }
    if a.intersects(b) {
        return Err(Error::input("sparsity test needs disjoint blocks"));
    }
    let la = eps.floor_mul(a.len());
    let lb = eps.floor_mul(b.len());
    Ok(PairSparsity {
        a_to_b: max_cross_degree(g, a, b, Side::Sparse) <= lb,
        b_to_a: max_cross_degree(g, b, a, Side::Sparse) <= la,
        a_to_b_complement: max_cross_degree(g, a, b, Side::Dense) <= lb,
        b_to_a_complement: max_cross_degree(g, b, a, Side::Dense) <= la,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    SparseInG,
    SparseInComplement,
}

impl Direction {
    pub fn side(self) -> Side {
        match self {
            Direction::SparseInG => Side::Sparse,
            Direction::SparseInComplement => Side::Dense,
        }
    }
}

/// Purity witness for blocks `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub i: u32,
    pub j: u32,
    pub direction: Direction,
    /// Largest cross-degree (in the direction's graph) from block `i` into block `j`.
    pub max_i_to_j: u32,
    pub max_j_to_i: u32,
}

/// Per-pair directions and witnessed cross-degrees for a blockade at tolerance `eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityCertificate {
    pub eps: Rational,
    pub pairs: Vec<PairCertificate>,
}

impl PurityCertificate {
    /// Records the witnessed cross-degrees of every pair under the given directions.
    pub fn witness(
        g: &Graph,
        blockade: &Blockade,
        eps: &Rational,
        direction: impl Fn(usize, usize) -> Direction,
    ) -> Self {
        let bl = blockade.blocks();
        let mut pairs = Vec::with_capacity(bl.len() * bl.len().saturating_sub(1) / 2);
        for i in 0..bl.len() {
            for j in i + 1..bl.len() {
                let dir = direction(i, j);
                pairs.push(PairCertificate {
                    i: i as u32,
                    j: j as u32,
                    direction: dir,
                    max_i_to_j: max_cross_degree(g, &bl[i], &bl[j], dir.side()) as u32,
                    max_j_to_i: max_cross_degree(g, &bl[j], &bl[i], dir.side()) as u32,
                });
            }
        }
        PurityCertificate {
            eps: eps.clone(),
            pairs,
        }
    }

    /// Witnessed cross-degree of `i` into `j` relative to `|B_j|`.
    pub fn ratio(&self, blockade: &Blockade, pair: &PairCertificate) -> (Rational, Rational) {
        let bi = blockade.blocks()[pair.i as usize].len() as u64;
        let bj = blockade.blocks()[pair.j as usize].len() as u64;
        (
            Rational::ratio(pair.max_i_to_j as u64, bj),
            Rational::ratio(pair.max_j_to_i as u64, bi),
        )
    }

    /// Recomputes every pair from the host graph and checks it against `eps`.
    pub fn verify(&self, g: &Graph, blockade: &Blockade) -> bool {
        let bl = blockade.blocks();
        let k = bl.len();
        if blockade.universe() != g.n() || self.pairs.len() != k * k.saturating_sub(1) / 2 {
            return false;
        }
        let mut idx = 0;
        for i in 0..k {
            for j in i + 1..k {
                let p = &self.pairs[idx];
                idx += 1;
                if (p.i as usize, p.j as usize) != (i, j) {
                    return false;
                }
                let side = p.direction.side();
                let ij = max_cross_degree(g, &bl[i], &bl[j], side);
                let ji = max_cross_degree(g, &bl[j], &bl[i], side);
                if ij != p.max_i_to_j as usize || ji != p.max_j_to_i as usize {
                    return false;
                }
                if ij > self.eps.floor_mul(bl[j].len()) || ji > self.eps.floor_mul(bl[i].len()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn count(&self, direction: Direction) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.direction == direction)
            .count()
    }
}

/// An `eps`-pure blockade with its certificate.
#[derive(Clone, Debug)]
pub struct PureBlockade {
    pub blockade: Blockade,
    pub certificate: PurityCertificate,
    /// Tolerance the underlying regularity partition was built at.
    pub partition_eps: Rational,
}

impl PureBlockade {
    pub fn direction(&self, i: usize, j: usize) -> Direction {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let k = self.blockade.len();
        self.certificate.pairs[a * (2 * k - a - 1) / 2 + (b - a - 1)].direction
    }
}

/// Extracts an equal-width `eps`-pure blockade of length at least `⌈1/eps⌉`.
///
/// Builds a regularity partition at `eps^4`, selects a pairwise weakly-pure
/// family of parts by greedy min-degree independent set on the impure-pair
/// graph, equalizes them, keeps vertices with at most `(eps/2)|V_i|`
/// neighbours (or non-neighbours) in every other selected part, and truncates
/// to a common size of at most `eps^2 n`. With `desk_scale`, the partition
/// tolerance falls back to `eps^3` then `eps^2` when `n` is too small for
/// `eps^4`.
pub fn extract_pure_blockade(
    g: &Graph,
    eps: &Rational,
    params: &ExponentParams,
) -> Result<PureBlockade> {
    if !eps.in_open_half() {
        return Err(Error::input(format!("eps {eps} outside (0, 1/2)")));
    }
    let n = g.n();
    let ladder: &[u32] = if params.desk_scale { &[4, 3, 2] } else { &[4] };
    let Some(&k) = ladder.iter().find(|&&k| n >= eps.pow(k).ceil_recip()) else {
        return Err(BoundNotMet::new(
            Stage::PartitionBound,
            format!(
                "{n} vertices is too few for a partition at eps^{}",
                ladder.last().unwrap()
            ),
        )
        .into());
    };
    let pe = eps.pow(k);
    let mut opts = RegularityOptions {
        k_cap: params.k_cap,
        parts: None,
        singleton_fallback: false,
    };
    let res = ultra_strong_partition(g, &pe, &opts)?;
    debug!(
        "blockade: partition at {pe} has {} parts, impure fraction {}",
        res.parts(),
        res.impure_fraction
    );
    let first = from_partition(g, eps, &res);
    match first {
        Ok(b) => Ok(b),
        Err(e)
            if matches!(res.strategy, PartitionStrategy::Clustered { .. })
                && n <= max_parts(n, &pe, params) =>
        {
            debug!("blockade: clustered partition failed ({e}); retrying with singletons");
            opts.parts = Some(n);
            let res = ultra_strong_partition(g, &pe, &opts)?;
            from_partition(g, eps, &res).map_err(|e2| {
                // Report whichever attempt got further.
                (if e2.achieved >= e.achieved { e2 } else { e }).into()
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn max_parts(n: usize, pe: &Rational, params: &ExponentParams) -> usize {
    crate::regularity::part_window(n, pe, params.k_cap).1
}

fn from_partition(
    g: &Graph,
    eps: &Rational,
    res: &RegularityResult,
) -> std::result::Result<PureBlockade, BoundNotMet> {
    let n = g.n();
    let ell = eps.ceil_recip();
    let l = res.parts();
    let parts = res.partition.parts();

    let mut impure = Graph::empty(l);
    for p in &res.pair_table {
        if p.status == PairStatus::Impure {
            impure.add_edge(p.i, p.j);
        }
    }
    let mut selected = greedy_stable(&impure, &impure.vertex_set()).to_vec();
    let min_size = selected.iter().map(|&i| parts[i].len()).min().unwrap_or(0);
    if selected.len() < ell {
        return Err(BoundNotMet::new(
            Stage::TuranSelection,
            format!("{} pairwise pure parts, need {ell}", selected.len()),
        )
        .with_achieved(selected.len(), min_size));
    }
    selected.truncate(MAX_BLOCKS);
    let dir = |i: usize, j: usize| match res.status(selected[i], selected[j]) {
        PairStatus::WeaklyDense => Direction::SparseInComplement,
        _ => Direction::SparseInG,
    };

    let equal: Vec<VertexSet> = selected
        .iter()
        .map(|&i| truncate(&parts[i], min_size))
        .collect();
    let threshold = eps.div_int(2).floor_mul(min_size);
    let mut trimmed: Vec<VertexSet> = (0..equal.len())
        .map(|j| {
            VertexSet::from_iter_in(
                n,
                equal[j].iter().filter(|&v| {
                    (0..equal.len())
                        .all(|i| i == j || cross(g, v, &equal[i], dir(i, j).side()) <= threshold)
                }),
            )
        })
        .collect();

    // Keep blocks that lost at most half; otherwise the `ell` largest.
    let half = min_size.div_ceil(2);
    let mut keep: Vec<usize> = (0..trimmed.len())
        .filter(|&j| trimmed[j].len() >= half)
        .collect();
    if keep.len() < ell {
        let mut order: Vec<usize> = (0..trimmed.len()).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(trimmed[j].len()), j));
        keep = order[..ell].to_vec();
        keep.sort_unstable();
    }
    let kept_dir: Vec<Vec<Direction>> = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    if i == j {
                        Direction::SparseInG
                    } else {
                        dir(i, j)
                    }
                })
                .collect()
        })
        .collect();
    trimmed = keep
        .iter()
        .map(|&j| std::mem::replace(&mut trimmed[j], VertexSet::new(0)))
        .collect();

    let cap = eps.pow(2).floor_mul(n);
    let mut size = trimmed.iter().map(|b| b.len()).min().unwrap_or(0).min(cap);
    let mut blocks: Vec<VertexSet> = trimmed.iter().map(|b| truncate(b, size)).collect();
    for _ in 0..64 {
        if size == 0 {
            break;
        }
        let limit = eps.floor_mul(size);
        let violators: Vec<Vec<usize>> = (0..blocks.len())
            .map(|j| {
                blocks[j]
                    .iter()
                    .filter(|&v| {
                        (0..blocks.len()).any(|i| {
                            i != j && cross(g, v, &blocks[i], kept_dir[i][j].side()) > limit
                        })
                    })
                    .collect()
            })
            .collect();
        if violators.iter().all(|v| v.is_empty()) {
            let blockade = Blockade::new(n, blocks).expect("parts are disjoint");
            let certificate = PurityCertificate::witness(g, &blockade, eps, |i, j| kept_dir[i][j]);
            if !certificate.verify(g, &blockade) {
                return Err(BoundNotMet::new(
                    Stage::Verification,
                    "purity certificate failed to verify",
                )
                .with_achieved(blockade.len(), size));
            }
            return Ok(PureBlockade {
                blockade,
                certificate,
                partition_eps: res.eps.clone(),
            });
        }
        for (b, vs) in blocks.iter_mut().zip(&violators) {
            for &v in vs {
                b.remove(v);
            }
        }
        size = blocks.iter().map(|b| b.len()).min().unwrap_or(0);
        blocks = blocks.iter().map(|b| truncate(b, size)).collect();
    }
    Err(BoundNotMet::new(
        Stage::Trimming,
        "trimming could not reach a pure common width",
    )
    .with_achieved(blocks.len(), size))
}

#[inline]
fn cross(g: &Graph, v: usize, block: &VertexSet, side: Side) -> usize {
    let d = g.neighbours(v).intersection_len(block);
    match side {
        Side::Sparse => d,
        Side::Dense => block.len() - d,
    }
}

/// The `size` lowest ids of `s`.
fn truncate(s: &VertexSet, size: usize) -> VertexSet {
    VertexSet::from_iter_in(s.universe(), s.iter().take(size))
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

    #[test]
    fn pair_sparsity_examples() {
        let g = Graph::empty(20);
        let a = VertexSet::from_iter_in(20, 0..10);
        let b = VertexSet::from_iter_in(20, 10..20);
        let s = check_pair_sparse_to(&g, &a, &b, &Rational::zero()).unwrap();
        assert!(s.a_to_b && s.b_to_a && s.is_pure());

        let k = Graph::complete(20);
        let s = check_pair_sparse_to(&k, &a, &b, &Rational::zero()).unwrap();
        assert!(s.a_to_b_complement && s.b_to_a_complement && !s.a_to_b);

        let mut m = Graph::empty(20);
        for i in 0..10 {
            m.add_edge(i, 10 + i);
        }
        let s = check_pair_sparse_to(&m, &a, &b, &Rational::ratio(1, 10)).unwrap();
        assert!(s.b_to_a);
        assert!(check_pair_sparse_to(&m, &VertexSet::new(20), &b, &Rational::half()).is_err());
    }

    #[test]
    fn blockade_rejects_overlap() {
        let a = VertexSet::from_iter_in(5, [0, 1]);
        let b = VertexSet::from_iter_in(5, [1, 2]);
        assert!(Blockade::new(5, vec![a, b]).is_err());
    }

    #[test]
    fn clique_union_blocks_in_distinct_cliques() {
        let eps = Rational::ratio(1, 8);
        let g = cliques(10, 64);
        let pb = extract_pure_blockade(&g, &eps, &ExponentParams::default()).unwrap();
        assert!(pb.blockade.len() >= 8);
        assert!(pb.certificate.verify(&g, &pb.blockade));
        let w = pb.blockade.width();
        assert!(pb.blockade.blocks().iter().all(|b| b.len() == w));
        assert!(w <= eps.pow(2).floor_mul(g.n()));
    }

    #[test]
    fn complete_graph_is_sparse_in_complement() {
        let eps = Rational::ratio(1, 8);
        let g = Graph::complete(512);
        let pb = extract_pure_blockade(&g, &eps, &ExponentParams::default()).unwrap();
        assert!(pb
            .certificate
            .pairs
            .iter()
            .all(|p| p.direction == Direction::SparseInComplement));
        assert!(pb.certificate.verify(&g, &pb.blockade));
    }

    #[test]
    fn too_small_reports_partition_bound() {
        let err = extract_pure_blockade(
            &Graph::empty(10),
            &Rational::ratio(1, 4),
            &ExponentParams::default(),
        )
        .unwrap_err();
        assert_eq!(err.bound().unwrap().stage, Stage::PartitionBound);
    }
}
