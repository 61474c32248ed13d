//! Cograph extraction and the clique-or-stable-set search built on it.

use log::debug;
use rayon::prelude::*;

use crate::bigraph::Bigraph;
use crate::error::{Result, Stage};
use crate::graph::{Graph, SetKind, Side};
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::turan::{greedy_clique, greedy_stable};
use crate::vertex_set::VertexSet;

use super::baseline::ramsey_baseline;
use super::driver::DriverOutcome;
use super::outcome::{BlockadeKind, CliqueOrStable};
use super::rodl::polyrodl_run;

/// Cotree of an induced cograph: `Union` children are pairwise anticomplete,
/// `Join` children pairwise complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CographTree {
    Leaf(usize),
    Union(Vec<CographTree>),
    Join(Vec<CographTree>),
}

impl CographTree {
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            CographTree::Leaf(v) => out.push(*v),
            CographTree::Union(ch) | CographTree::Join(ch) => {
                ch.iter().for_each(|c| c.collect(out))
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            CographTree::Leaf(_) => 1,
            CographTree::Union(ch) | CographTree::Join(ch) => {
                ch.iter().map(CographTree::leaf_count).sum()
            }
        }
    }

    /// Leaves are distinct host vertices and every node's children are
    /// pairwise anticomplete (`Union`) or complete (`Join`) in `host`.
    pub fn verify(&self, host: &Graph) -> bool {
        let leaves = self.leaves();
        let n = host.n();
        if leaves.iter().any(|&v| v >= n) {
            return false;
        }
        let set = VertexSet::from_iter_in(n, leaves.iter().copied());
        set.len() == leaves.len() && self.verify_nodes(host)
    }

    fn verify_nodes(&self, host: &Graph) -> bool {
        let (children, complete) = match self {
            CographTree::Leaf(_) => return true,
            CographTree::Union(ch) => (ch, false),
            CographTree::Join(ch) => (ch, true),
        };
        let n = host.n();
        let sets: Vec<VertexSet> = children
            .iter()
            .map(|c| VertexSet::from_iter_in(n, c.leaves()))
            .collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let ok = if complete {
                    host.complete_between(&sets[i], &sets[j])
                } else {
                    host.anticomplete(&sets[i], &sets[j])
                };
                if !ok {
                    return false;
                }
            }
        }
        children.iter().all(|c| c.verify_nodes(host))
    }

    /// Largest clique of the cograph: sum over `Join` children, max over `Union` children.
    pub fn best_clique(&self) -> Vec<usize> {
        self.best(true)
    }

    /// Largest stable set of the cograph: sum over `Union` children, max over `Join` children.
    pub fn best_stable(&self) -> Vec<usize> {
        self.best(false)
    }

    fn best(&self, clique: bool) -> Vec<usize> {
        match self {
            CographTree::Leaf(v) => vec![*v],
            CographTree::Union(ch) | CographTree::Join(ch) => {
                let sums = matches!(self, CographTree::Join(_)) == clique;
                let parts = ch.iter().map(|c| c.best(clique));
                if sums {
                    parts.flatten().collect()
                } else {
                    parts.max_by_key(|p| p.len()).unwrap_or_default()
                }
            }
        }
    }

    pub fn relabel(self, map: &[usize]) -> CographTree {
        match self {
            CographTree::Leaf(v) => CographTree::Leaf(map[v]),
            CographTree::Union(ch) => {
                CographTree::Union(ch.into_iter().map(|c| c.relabel(map)).collect())
            }
            CographTree::Join(ch) => {
                CographTree::Join(ch.into_iter().map(|c| c.relabel(map)).collect())
            }
        }
    }

    fn score(&self) -> usize {
        self.best_clique().len().max(self.best_stable().len())
    }
}

fn flat(set: &VertexSet, kind: SetKind) -> CographTree {
    let leaves = set.iter().map(CographTree::Leaf).collect();
    match kind {
        SetKind::Clique => CographTree::Join(leaves),
        SetKind::Stable => CographTree::Union(leaves),
    }
}

fn baseline_tree(g: &Graph) -> CographTree {
    let b = ramsey_baseline(g);
    flat(&b.set, b.kind)
}

fn turan_tree(g: &Graph, set: &VertexSet, side: Side) -> CographTree {
    match side {
        Side::Sparse => flat(&greedy_stable(g, set), SetKind::Stable),
        Side::Dense => flat(&greedy_clique(g, set), SetKind::Clique),
    }
}

/// Smallest `r` with `r^k ≥ n`.
fn ceil_root(n: usize, k: u32) -> usize {
    let mut r = (n as f64).powf(1.0 / k as f64).floor().max(1.0) as usize;
    while (r as u128).pow(k) < n as u128 {
        r += 1;
    }
    while r > 1 && ((r - 1) as u128).pow(k) >= n as u128 {
        r -= 1;
    }
    r
}

/// Descent target `min(1/⌈n^{1/(2d)}⌉, c^a)`.
fn descent_target(n: usize, params: &ExponentParams) -> Rational {
    let root = ceil_root(n, 2 * params.d).max(2);
    Rational::ratio(1, root as u64).min(params.c.pow(params.a))
}

/// Builds an induced cograph of `g`: descend to an `x`-restricted subgraph
/// and take a Turán set there, or split along a complete/anticomplete
/// blockade and recurse into every block. The result is never worse than
/// the majority-walk baseline.
pub fn extract_cograph(g: &Graph, h: &Bigraph, params: &ExponentParams) -> Result<CographTree> {
    extract_cograph_traced(g, h, params).map(|(t, _)| t)
}

/// Descent diagnostics of the top level of a cograph extraction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DescentSummary {
    /// `(y, |F|)` per verified level.
    pub trace: Vec<(Rational, usize)>,
    /// Stage at which the top-level descent stopped short, if it did.
    pub stage: Option<Stage>,
}

/// [`extract_cograph`] together with the top-level descent diagnostics.
pub fn extract_cograph_traced(
    g: &Graph,
    h: &Bigraph,
    params: &ExponentParams,
) -> Result<(CographTree, DescentSummary)> {
    params.validate()?;
    let mut summary = DescentSummary::default();
    let tree = build(g, h, params, Some(&mut summary));
    if tree.verify(g) {
        Ok((tree, summary))
    } else {
        debug!("cograph: tree failed verification, using baseline");
        summary.stage = Some(Stage::Verification);
        Ok((baseline_tree(g), summary))
    }
}

fn build(
    g: &Graph,
    h: &Bigraph,
    params: &ExponentParams,
    summary: Option<&mut DescentSummary>,
) -> CographTree {
    let n = g.n();
    match n {
        0 => return CographTree::Union(Vec::new()),
        1 => return CographTree::Leaf(0),
        2 => return baseline_tree(g),
        _ => {}
    }
    let x = descent_target(n, params);
    let run = polyrodl_run(g, h, &x, params);
    if let Some(s) = summary {
        match &run {
            Ok(r) => {
                s.trace = r.trace.clone();
                s.stage = r.outcome.as_ref().err().map(|b| b.stage.clone());
            }
            Err(_) => s.stage = Some(Stage::Init),
        }
    }
    let tree = match run {
        Ok(run) => match run.outcome {
            Ok(DriverOutcome::Restricted(r)) => turan_tree(g, &r.set, r.side),
            Ok(DriverOutcome::Preempted((kind, blockade))) => {
                let children: Vec<CographTree> = blockade
                    .blocks()
                    .par_iter()
                    .map(|b| {
                        let (sub, map) = g.induced(b);
                        build(&sub, h, params, None).relabel(&map)
                    })
                    .collect();
                match kind {
                    BlockadeKind::Complete => CographTree::Join(children),
                    BlockadeKind::Anticomplete => CographTree::Union(children),
                }
            }
            Err(b) => {
                debug!("cograph: n = {n}: {b}");
                match run.deepest {
                    Some(r) => turan_tree(g, &r.set, r.side),
                    None => baseline_tree(g),
                }
            }
        },
        Err(e) => {
            debug!("cograph: n = {n}: {e}");
            baseline_tree(g)
        }
    };
    let base = baseline_tree(g);
    if tree.score() >= base.score() {
        tree
    } else {
        base
    }
}

/// A clique or stable set of `g` read off an extracted cograph, or the
/// baseline walk if that is larger. Its size is at least the square root of
/// the cograph's order and at least `⌈½·log2 n⌉`.
pub fn clique_or_stable(g: &Graph, h: &Bigraph, params: &ExponentParams) -> Result<CliqueOrStable> {
    clique_or_stable_traced(g, h, params).map(|(r, _)| r)
}

/// [`clique_or_stable`] together with the top-level descent diagnostics.
pub fn clique_or_stable_traced(
    g: &Graph,
    h: &Bigraph,
    params: &ExponentParams,
) -> Result<(CliqueOrStable, DescentSummary)> {
    let n = g.n();
    let (tree, summary) = extract_cograph_traced(g, h, params)?;
    let clique = VertexSet::from_iter_in(n, tree.best_clique());
    let stable = VertexSet::from_iter_in(n, tree.best_stable());
    let from_tree = if clique.len() >= stable.len() {
        CliqueOrStable {
            set: clique,
            kind: SetKind::Clique,
        }
    } else {
        CliqueOrStable {
            set: stable,
            kind: SetKind::Stable,
        }
    };
    let base = ramsey_baseline(g);
    let out = if from_tree.len() >= base.len() && from_tree.verify(g) {
        from_tree
    } else {
        base
    };
    debug_assert!(out.len() * out.len() >= tree.leaf_count());
    Ok((out, summary))
}
