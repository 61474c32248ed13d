//! Seeded instance generators. Every generator is deterministic in its arguments.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{equipartition_sizes, Graph};
use crate::hyper::{for_each_subset, Hypergraph};
use crate::tournament::Tournament;
use crate::vertex_set::VertexSet;

/// Grid points per unit length for geometric families.
pub const GRID: u64 = 1000;
/// Largest pattern for `blowup-noise`.
pub const MAX_BLOWUP_PATTERN: usize = 8;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::input(format!("unknown family {other:?}"))),
                }
            }
        }
    };
}

named_enum!(GraphFamily {
    UnitInterval => "unit-interval",
    BoxIntersection2d => "box-intersection-2d",
    BlowupNoise => "blowup-noise",
    UniformRandom => "uniform-random",
});

named_enum!(TournamentFamily {
    TwoColourable => "two-colourable",
    UniformRandom => "uniform-random",
    Transitive => "transitive",
});

named_enum!(HyperFamily {
    Random => "random",
    ThresholdSum => "threshold-sum",
});

impl GraphFamily {
    /// Families with bounded VC-dimension.
    pub fn bounded_vc(self) -> bool {
        !matches!(self, GraphFamily::UniformRandom)
    }
}

/// Optional knobs for [`gen_graph`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphGenParams {
    /// Side of the placement region in unit lengths. Defaults to `n/4` for
    /// intervals and `√(n/2)` for squares; `0` stacks every object on the origin.
    pub span: Option<u64>,
    /// Pattern order for `blowup-noise`, at most 8. Defaults to `min(n, 4)`.
    pub pattern: Option<usize>,
}

pub fn gen_graph(
    family: GraphFamily,
    n: usize,
    seed: u64,
    params: &GraphGenParams,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("need at least one vertex"));
    }
    let mut r = rng(seed);
    match family {
        GraphFamily::UnitInterval => {
            let span = params.span.unwrap_or((n as u64 / 4).max(1));
            let xs: Vec<u64> = (0..n).map(|_| r.gen_range(0..=span * GRID)).collect();
            Ok(from_pairs(n, |u, v| xs[u].abs_diff(xs[v]) <= GRID))
        }
        GraphFamily::BoxIntersection2d => {
            let span = params
                .span
                .unwrap_or(((n as f64 / 2.0).sqrt() as u64).max(1));
            let pts: Vec<(u64, u64)> = (0..n)
                .map(|_| (r.gen_range(0..=span * GRID), r.gen_range(0..=span * GRID)))
                .collect();
            Ok(from_pairs(n, |u, v| {
                pts[u].0.abs_diff(pts[v].0) <= GRID && pts[u].1.abs_diff(pts[v].1) <= GRID
            }))
        }
        GraphFamily::BlowupNoise => {
            let p = params.pattern.unwrap_or(n.min(4));
            if p == 0 || p > MAX_BLOWUP_PATTERN || p > n {
                return Err(Error::input(format!(
                    "pattern order {p} outside 1..={}",
                    MAX_BLOWUP_PATTERN.min(n)
                )));
            }
            let mut pattern = vec![false; p * p];
            for i in 0..p {
                for j in i + 1..p {
                    let e = r.gen_bool(0.5);
                    pattern[i * p + j] = e;
                    pattern[j * p + i] = e;
                }
            }
            let mut blob = Vec::with_capacity(n);
            for (i, s) in equipartition_sizes(n, p).into_iter().enumerate() {
                blob.extend(std::iter::repeat_n(i, s));
            }
            Ok(from_pairs(n, |u, v| pattern[blob[u] * p + blob[v]]))
        }
        GraphFamily::UniformRandom => Ok(from_pairs(n, |_, _| r.gen_bool(0.5))),
    }
}

/// Graph with `uv` an edge iff `edge(u, v)`, queried once per pair `u < v` in lexicographic order.
fn from_pairs(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Graph {
    let mut rows = vec![VertexSet::new(n); n];
    for u in 0..n {
        for v in u + 1..n {
            if edge(u, v) {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
    }
    Graph::from_rows(rows).expect("symmetric rows")
}

pub fn gen_tournament(family: TournamentFamily, n: usize, seed: u64) -> Result<Tournament> {
    if n == 0 {
        return Err(Error::input("need at least one vertex"));
    }
    let mut r = rng(seed);
    match family {
        TournamentFamily::Transitive => Ok(Tournament::transitive(n)),
        TournamentFamily::UniformRandom => Ok(Tournament::from_fn(n, |_, _| r.gen_bool(0.5))),
        TournamentFamily::TwoColourable => {
            let half = n / 2;
            let mut rank: Vec<usize> = (0..n).collect();
            rank[..half].shuffle(&mut r);
            rank[half..].shuffle(&mut r);
            Ok(Tournament::from_fn(n, |i, j| {
                if (i < half) == (j < half) {
                    rank[i] < rank[j]
                } else {
                    r.gen_bool(0.5)
                }
            }))
        }
    }
}

/// `random`: each `k`-set is an edge with probability `p`. `threshold-sum`:
/// vertices get weights in `1..=1000` and a `k`-set is an edge iff its weight
/// exceeds `⌊(1-p)·k·1000⌋`.
pub fn gen_hypergraph(
    family: HyperFamily,
    k: usize,
    n: usize,
    seed: u64,
    p: f64,
) -> Result<Hypergraph> {
    if k < 2 || n < k {
        return Err(Error::input(format!(
            "need k ≥ 2 and n ≥ k, got k = {k}, n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("probability {p} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut hg = Hypergraph::empty(n, k)?;
    let mut edges = Vec::new();
    match family {
        HyperFamily::Random => for_each_subset(n, k, |e| {
            if r.gen_bool(p) {
                edges.push(e.to_vec());
            }
        }),
        HyperFamily::ThresholdSum => {
            let w: Vec<u64> = (0..n).map(|_| r.gen_range(1..=1000)).collect();
            let cutoff = ((1.0 - p) * k as f64 * 1000.0).floor() as u64;
            for_each_subset(n, k, |e| {
                if e.iter().map(|&v| w[v]).sum::<u64>() > cutoff {
                    edges.push(e.to_vec());
                }
            });
        }
    }
    for e in &edges {
        hg.insert(e)?;
    }
    Ok(hg)
}
