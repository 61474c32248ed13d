//! Grid experiments: generate instances, run a pipeline, verify, and fit
//! `log(size) = slope·log(n) + intercept`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::bigraph::Bigraph;
use crate::engine::{clique_or_stable_traced, restricted_extract};
use crate::error::{Error, Result, Stage};
use crate::gen::{
    gen_graph, gen_hypergraph, gen_tournament, GraphFamily, GraphGenParams, HyperFamily,
    TournamentFamily,
};
use crate::hyper::hyper_clique_or_stable;
use crate::params::ExponentParams;
use crate::rational::Rational;
use crate::tournament::largest_transitive;

/// CSV header; `wall_ms` is last so it can be dropped for comparisons.
pub const CSV_HEADER: &str =
    "kind,family,n,eps,seed,size,verified,trace_depth,bound_stage,slope,intercept,r2,wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    CliqueStable,
    Restricted,
    Hyper,
    Tournament,
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clique-stable" => Ok(Pipeline::CliqueStable),
            "restricted" => Ok(Pipeline::Restricted),
            "hyper" => Ok(Pipeline::Hyper),
            "tournament" => Ok(Pipeline::Tournament),
            other => Err(Error::input(format!("unknown pipeline {other:?}"))),
        }
    }
}

/// Which generator a configuration draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Graph(GraphFamily),
    Tournament(TournamentFamily),
    Hyper(HyperFamily),
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Graph(f) => f.name(),
            Family::Tournament(f) => f.name(),
            Family::Hyper(f) => f.name(),
        }
    }
}

/// Flat `key = value` experiment configuration.
///
/// Keys: `pipeline`, `family`, `n` (comma list), `eps` (comma list of
/// rationals, required for `restricted`), `seeds` (count, default 1),
/// `seed_base` (default 0), `params` (exponent string), `witness` (order `d`
/// of the shattering-witness pattern, default 2), `k` and `p` (hypergraphs,
/// defaults 3 and 0.5), `span` and `blowup` (graph generator knobs).
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    pub family: Family,
    pub ns: Vec<usize>,
    pub eps: Vec<Rational>,
    pub seeds: u64,
    pub seed_base: u64,
    pub params: ExponentParams,
    pub witness: usize,
    pub k: usize,
    pub p: f64,
    pub graph: GraphGenParams,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, "expected key = value"))?;
            if kv
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(Error::parse(
                    idx + 1,
                    format!("duplicate key {:?}", k.trim()),
                ));
            }
        }
        let take = |kv: &mut std::collections::BTreeMap<String, String>, key: &str| kv.remove(key);
        let pipeline: Pipeline = take(&mut kv, "pipeline")
            .ok_or_else(|| Error::input("missing key: pipeline"))?
            .parse()?;
        let family_name =
            take(&mut kv, "family").ok_or_else(|| Error::input("missing key: family"))?;
        let family = match pipeline {
            Pipeline::CliqueStable | Pipeline::Restricted => Family::Graph(family_name.parse()?),
            Pipeline::Tournament => Family::Tournament(family_name.parse()?),
            Pipeline::Hyper => Family::Hyper(family_name.parse()?),
        };
        let ns = list::<usize>(
            &take(&mut kv, "n").ok_or_else(|| Error::input("missing key: n"))?,
            "n",
        )?;
        if ns.is_empty() || ns.contains(&0) {
            return Err(Error::input("n grid must be nonempty and positive"));
        }
        let eps = match take(&mut kv, "eps") {
            Some(v) => list::<Rational>(&v, "eps")?,
            None => Vec::new(),
        };
        if pipeline == Pipeline::Restricted && eps.is_empty() {
            return Err(Error::input("pipeline restricted needs an eps grid"));
        }
        if eps.iter().any(|e| !e.in_open_half()) {
            return Err(Error::input("eps values must lie in (0, 1/2)"));
        }
        let num = |kv: &mut std::collections::BTreeMap<String, String>,
                   key: &str,
                   default: u64|
         -> Result<u64> {
            match take(kv, key) {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::input(format!("bad integer for {key}: {v:?}"))),
                None => Ok(default),
            }
        };
        let seeds = num(&mut kv, "seeds", 1)?;
        let seed_base = num(&mut kv, "seed_base", 0)?;
        let witness = num(&mut kv, "witness", 2)? as usize;
        let k = num(&mut kv, "k", 3)? as usize;
        if seeds == 0 {
            return Err(Error::input("seeds must be positive"));
        }
        if !(1..=3).contains(&witness) {
            return Err(Error::input("witness order must be 1, 2 or 3"));
        }
        let p = match take(&mut kv, "p") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::input(format!("bad probability {v:?}")))?,
            None => 0.5,
        };
        let params = match take(&mut kv, "params") {
            Some(v) => v.parse()?,
            None => ExponentParams::default(),
        };
        let span = take(&mut kv, "span").map(|v| {
            v.parse()
                .map_err(|_| Error::input(format!("bad span {v:?}")))
        });
        let blowup = take(&mut kv, "blowup").map(|v| {
            v.parse()
                .map_err(|_| Error::input(format!("bad blowup {v:?}")))
        });
        let graph = GraphGenParams {
            span: span.transpose()?,
            pattern: blowup.transpose()?,
        };
        if let Some(key) = kv.keys().next() {
            return Err(Error::input(format!("unknown key {key:?}")));
        }
        Ok(ExperimentConfig {
            pipeline,
            family,
            ns,
            eps,
            seeds,
            seed_base,
            params,
            witness,
            k,
            p,
            graph,
        })
    }
}

fn list<T: FromStr>(text: &str, key: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::input(format!("bad value for {key}: {s:?}")))
        })
        .collect()
}

/// One instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub family: &'static str,
    pub n: usize,
    pub eps: Option<Rational>,
    pub seed: u64,
    pub size: usize,
    /// Exact re-verification of the returned object; `None` when no object was returned.
    pub verified: Option<bool>,
    pub trace_depth: usize,
    pub bound_stage: Option<Stage>,
    pub wall_ms: u128,
}

/// Fit per `(family, eps)` over per-`n` medians (or all rows with fewer than three distinct `n`).
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub family: &'static str,
    pub eps: Option<Rational>,
    pub fit: Option<Fit>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<SummaryRow>,
}

impl ExperimentReport {
    /// No returned object failed verification.
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified != Some(false))
    }

    /// CSV with [`CSV_HEADER`]; with `timing` off the `wall_ms` column is left empty.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let eps_text = |e: &Option<Rational>| e.as_ref().map(|e| e.to_string()).unwrap_or_default();
        for r in &self.rows {
            let verified = match r.verified {
                Some(v) => v.to_string(),
                None => "n/a".to_string(),
            };
            let stage = r
                .bound_stage
                .as_ref()
                .map(|s| s.to_string())
                .unwrap_or_default();
            let wall = if timing {
                r.wall_ms.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "row,{},{},{},{},{},{},{},{},,,,{}",
                r.family,
                r.n,
                eps_text(&r.eps),
                r.seed,
                r.size,
                verified,
                r.trace_depth,
                stage,
                wall
            );
        }
        for s in &self.summaries {
            let fit = match s.fit {
                Some(f) => format!("{:.6},{:.6},{:.6}", f.slope, f.intercept, f.r2),
                None => ",,".to_string(),
            };
            let _ = writeln!(
                out,
                "summary,{},,{},,,,,,{},",
                s.family,
                eps_text(&s.eps),
                fit
            );
        }
        out
    }
}

/// Ordinary least squares of `ln(size)` on `ln(n)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::input(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::input("points must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::input("all points share one n"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 {
        if ss_res < 1e-12 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(Fit {
        slope,
        intercept,
        r2,
    })
}

/// Median of the sizes, lower middle for even counts.
pub fn median(values: &mut [usize]) -> usize {
    values.sort_unstable();
    values[(values.len() - 1) / 2]
}

/// Runs every `(n, eps, seed)` cell on up to `jobs` threads; rows come back in grid order.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport> {
    cfg.params.validate()?;
    let eps_grid: Vec<Option<Rational>> = if cfg.eps.is_empty() {
        vec![None]
    } else {
        cfg.eps.iter().cloned().map(Some).collect()
    };
    let mut cells = Vec::new();
    for &n in &cfg.ns {
        for e in &eps_grid {
            for s in 0..cfg.seeds {
                cells.push((n, e.clone(), cfg.seed_base + s));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::input(format!("thread pool: {e}")))?;
    let rows: Vec<ExperimentRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|(n, e, seed)| run_cell(cfg, *n, e.clone(), *seed))
            .collect::<Result<Vec<_>>>()
    })?;
    let summaries = eps_grid
        .iter()
        .map(|e| {
            let mut by_n: Vec<(usize, Vec<usize>)> =
                cfg.ns.iter().map(|&n| (n, Vec::new())).collect();
            for r in rows.iter().filter(|r| r.eps == *e && r.size > 0) {
                if let Some(slot) = by_n.iter_mut().find(|(n, _)| *n == r.n) {
                    slot.1.push(r.size);
                }
            }
            by_n.retain(|(_, v)| !v.is_empty());
            let points: Vec<(f64, f64)> = if by_n.len() >= 3 {
                by_n.iter_mut()
                    .map(|(n, v)| (*n as f64, median(v) as f64))
                    .collect()
            } else {
                by_n.iter()
                    .flat_map(|(n, v)| v.iter().map(move |&s| (*n as f64, s as f64)))
                    .collect()
            };
            SummaryRow {
                family: cfg.family.name(),
                eps: e.clone(),
                fit: fit_exponent(&points).ok(),
            }
        })
        .collect();
    Ok(ExperimentReport { rows, summaries })
}

fn run_cell(
    cfg: &ExperimentConfig,
    n: usize,
    eps: Option<Rational>,
    seed: u64,
) -> Result<ExperimentRow> {
    let start = Instant::now();
    let h = Bigraph::shattering_witness(cfg.witness);
    let params = &cfg.params;
    let mut row = ExperimentRow {
        family: cfg.family.name(),
        n,
        eps: eps.clone(),
        seed,
        size: 0,
        verified: None,
        trace_depth: 0,
        bound_stage: None,
        wall_ms: 0,
    };
    match (cfg.pipeline, cfg.family) {
        (Pipeline::CliqueStable, Family::Graph(f)) => {
            let g = gen_graph(f, n, seed, &cfg.graph)?;
            let (r, summary) = clique_or_stable_traced(&g, &h, params)?;
            row.size = r.len();
            row.verified = Some(r.verify(&g));
            row.trace_depth = summary.trace.len();
            row.bound_stage = summary.stage;
        }
        (Pipeline::Restricted, Family::Graph(f)) => {
            let g = gen_graph(f, n, seed, &cfg.graph)?;
            let e = eps.expect("restricted runs carry eps");
            match restricted_extract(&g, &h, &e, params) {
                Ok(r) => {
                    row.size = r.set.len();
                    row.verified = Some(r.verify(&g));
                }
                Err(Error::BoundNotMet(b)) => row.bound_stage = Some(b.stage),
                Err(err) => return Err(err),
            }
        }
        (Pipeline::Hyper, Family::Hyper(f)) => {
            let hg = gen_hypergraph(f, cfg.k, n, seed, cfg.p)?;
            let r = hyper_clique_or_stable(&hg, &h, params)?;
            row.size = r.set.len();
            row.verified = Some(hg.is_homogeneous(&r.set, r.kind));
        }
        (Pipeline::Tournament, Family::Tournament(f)) => {
            let q = gen_tournament(f, n, seed)?;
            match largest_transitive(&q, &h, params) {
                Ok(t) => {
                    row.size = t.set.len();
                    row.verified = Some(q.is_transitive(&t.set));
                }
                Err(Error::BoundNotMet(b)) => row.bound_stage = Some(b.stage),
                Err(err) => return Err(err),
            }
        }
        _ => return Err(Error::input("family does not match pipeline")),
    }
    row.wall_ms = start.elapsed().as_millis();
    Ok(row)
}
