use crate::blockade::Blockade;
use crate::graph::{Graph, SetKind, Side};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

/// An induced subgraph claimed `eps`-sparse on `side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restricted {
    pub set: VertexSet,
    pub side: Side,
    pub eps: Rational,
}

impl Restricted {
    pub fn verify(&self, g: &Graph) -> bool {
        self.set.universe() == g.n() && g.is_restricted_on(&self.set, self.side, &self.eps)
    }

    /// Smallest level this set is restricted at on its side: max degree (or co-degree) over size.
    pub fn exact_level(&self, g: &Graph) -> Rational {
        let k = self.set.len();
        if k == 0 {
            return Rational::zero();
        }
        let d = match self.side {
            Side::Sparse => g.max_degree_within(&self.set),
            Side::Dense => g.max_codegree_within(&self.set),
        };
        Rational::ratio(d as u64, k as u64)
    }

    pub(crate) fn lift(&self, map: &[usize], universe: usize) -> Restricted {
        Restricted {
            set: lift(&self.set, map, universe),
            side: self.side,
            eps: self.eps.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockadeKind {
    Complete,
    Anticomplete,
}

impl BlockadeKind {
    pub fn flip(self) -> BlockadeKind {
        match self {
            BlockadeKind::Complete => BlockadeKind::Anticomplete,
            BlockadeKind::Anticomplete => BlockadeKind::Complete,
        }
    }
}

impl std::fmt::Display for BlockadeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockadeKind::Complete => "complete",
            BlockadeKind::Anticomplete => "anticomplete",
        })
    }
}

/// Either a restricted induced subgraph or a complete/anticomplete blockade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractionOutcome {
    RestrictedSubgraph(Restricted),
    PureBlockade {
        kind: BlockadeKind,
        blockade: Blockade,
    },
}

impl ExtractionOutcome {
    pub fn verify(&self, g: &Graph) -> bool {
        match self {
            ExtractionOutcome::RestrictedSubgraph(r) => r.verify(g),
            ExtractionOutcome::PureBlockade { kind, blockade } => {
                blockade.universe() == g.n()
                    && match kind {
                        BlockadeKind::Complete => blockade.is_complete_in(g),
                        BlockadeKind::Anticomplete => blockade.is_anticomplete_in(g),
                    }
            }
        }
    }
}

/// A clique or stable set of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOrStable {
    pub set: VertexSet,
    pub kind: SetKind,
}

impl CliqueOrStable {
    pub fn verify(&self, g: &Graph) -> bool {
        self.set.universe() == g.n()
            && match self.kind {
                SetKind::Clique => g.is_clique(&self.set),
                SetKind::Stable => g.is_stable(&self.set),
            }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Maps a set over an induced subgraph back to host ids.
pub(crate) fn lift(set: &VertexSet, map: &[usize], universe: usize) -> VertexSet {
    VertexSet::from_iter_in(universe, set.iter().map(|v| map[v]))
}
