//! Iterative sparsification: descend through induced subgraphs that are
//! increasingly restricted until the level drops below a target.

use crate::error::{BoundNotMet, Error, Result, Stage};
use crate::graph::Graph;
use crate::rational::Rational;

use super::outcome::Restricted;

/// What a descent step hands back.
#[derive(Clone, Debug)]
pub enum Step<P> {
    /// A more restricted induced subgraph of the current one.
    Descend(Restricted),
    /// An alternative outcome that ends the descent.
    Preempt(P),
}

#[derive(Clone, Debug)]
pub enum DriverOutcome<P> {
    Restricted(Restricted),
    Preempted(P),
}

/// A finished descent.
#[derive(Clone, Debug)]
pub struct DriverRun<P> {
    pub outcome: std::result::Result<DriverOutcome<P>, BoundNotMet>,
    /// `(y, |F|)` for the initial subgraph and every verified step.
    pub trace: Vec<(Rational, usize)>,
    /// Last verified restricted subgraph, if any.
    pub deepest: Option<Restricted>,
}

/// Descends from `init` by repeated `step` calls while the level `y` is at least `x`.
///
/// Every subgraph is verified exactly at its claimed level and must be a
/// subset of the previous one. With `tighten`, the level of each verified
/// descent step is lowered to its exact restriction level. Each step must
/// reach a strictly smaller level. Initial failures are reported with an empty trace.
pub fn sparsify_driver<P>(
    g: &Graph,
    x: &Rational,
    c: &Rational,
    tighten: bool,
    init: impl FnOnce(&Graph) -> Result<Restricted>,
    mut step: impl FnMut(&Graph, &Restricted) -> std::result::Result<Step<P>, BoundNotMet>,
) -> Result<DriverRun<P>> {
    if !x.is_positive() || x >= c {
        return Err(Error::input(format!(
            "need 0 < x < c, got x = {x}, c = {c}"
        )));
    }
    let mut trace = Vec::new();
    let fail =
        |b: BoundNotMet, trace: &Vec<(Rational, usize)>, deepest: Option<Restricted>| DriverRun {
            outcome: Err(b.with_trace(trace.clone())),
            trace: trace.clone(),
            deepest,
        };

    let mut current = match init(g) {
        Ok(r) => r,
        Err(Error::BoundNotMet(b)) => return Ok(fail(*b, &trace, None)),
        Err(e) => {
            return Ok(fail(
                BoundNotMet::new(Stage::Init, e.to_string()),
                &trace,
                None,
            ))
        }
    };
    if !current.verify(g) {
        return Ok(fail(
            BoundNotMet::new(Stage::Verification, "initial subgraph is not restricted"),
            &trace,
            None,
        ));
    }
    trace.push((current.eps.clone(), current.set.len()));

    while current.eps >= *x {
        match step(g, &current) {
            Ok(Step::Preempt(p)) => {
                return Ok(DriverRun {
                    outcome: Ok(DriverOutcome::Preempted(p)),
                    trace,
                    deepest: Some(current),
                })
            }
            Ok(Step::Descend(mut next)) => {
                if !next.set.is_subset(&current.set) || !next.verify(g) {
                    let b =
                        BoundNotMet::new(Stage::Verification, "descent step failed verification");
                    return Ok(fail(b, &trace, Some(current)));
                }
                if tighten {
                    next.eps = next.eps.clone().min(next.exact_level(g));
                }
                if next.eps >= current.eps {
                    let b = BoundNotMet::new(
                        Stage::Descent,
                        format!("step did not lower the level below {}", current.eps),
                    );
                    return Ok(fail(b, &trace, Some(current)));
                }
                trace.push((next.eps.clone(), next.set.len()));
                current = next;
            }
            Err(b) => return Ok(fail(b, &trace, Some(current))),
        }
    }
    Ok(DriverRun {
        outcome: Ok(DriverOutcome::Restricted(current.clone())),
        trace,
        deepest: Some(current),
    })
}
