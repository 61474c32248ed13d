use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bvc_core::blockade::{extract_pure_blockade, Direction};
use bvc_core::engine::{clique_or_stable_traced, restricted_extract};
use bvc_core::experiment::{run_experiment, ExperimentConfig, CSV_HEADER};
use bvc_core::gen::{
    gen_graph, gen_hypergraph, gen_tournament, GraphFamily, GraphGenParams, HyperFamily,
    TournamentFamily,
};
use bvc_core::hyper::{default_p_target, erdos_rado_reduce, hyper_clique_or_stable};
use bvc_core::oracle;
use bvc_core::regularity::{ultra_strong_partition, PairStatus, RegularityOptions};
use bvc_core::tournament::{
    backedge_graph, colour_heuristic, is_k_colourable, largest_transitive, Colouring, Ordering,
    MAX_EXACT_COLOURING,
};
use bvc_core::vc::{
    neighbourhood_family, vc_dimension, vc_lower_bound, Source, MAX_EXACT_UNIVERSE,
};
use bvc_core::{
    Bigraph, Error, ExponentParams, Graph, Hypergraph, Rational, Side, Tournament, VertexSet,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "bvc",
    version,
    about = "Cliques, stable sets and restricted subgraphs in graphs of bounded VC-dimension"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input file; `-` or absent reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; absent writes standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the experiment runner.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Exponent overrides, e.g. `a=2,b=2,t=1,c=1/4`.
    #[arg(long, global = true)]
    params: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Graph,
    Tournament,
    Hyper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    CliqueStable,
    Restricted,
}

#[derive(Clone, Copy, ValueEnum)]
enum TournamentOp {
    Backedge,
    Colour,
    Transitive,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleOp {
    CliqueStable,
    Transitive,
    Hyper,
    Equipartition,
    Vc,
    BiInduced,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance in its text format.
    Gen {
        #[arg(long, value_enum, default_value = "graph")]
        kind: Kind,
        /// Family name: unit-interval, box-intersection-2d, blowup-noise,
        /// uniform-random; two-colourable, uniform-random, transitive;
        /// random, threshold-sum.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Hypergraph uniformity.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Hypergraph edge probability or threshold level.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Coordinate span for the geometric families.
        #[arg(long)]
        span: Option<u64>,
        /// Pattern size for blowup-noise.
        #[arg(long)]
        blowup: Option<usize>,
    },
    /// VC-dimension of the neighbourhood family of a graph, hypergraph or tournament.
    Vcdim {
        /// Report a sampled lower bound instead of the exact value.
        #[arg(long)]
        approx: bool,
        #[arg(long, default_value_t = 64)]
        attempts: usize,
    },
    /// Search for a bi-induced copy of a pattern.
    BiInduced {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Ultra-strong regularity partition; writes the pair table as CSV.
    Regularity {
        #[arg(long)]
        eps: Rational,
        /// Force the part count.
        #[arg(long)]
        parts: Option<usize>,
    },
    /// Equal-width pure blockade with its certificate.
    Blockade {
        #[arg(long)]
        eps: Rational,
    },
    /// Clique/stable set or restricted subgraph with the descent trace.
    Extract {
        #[arg(long, value_enum, default_value = "clique-stable")]
        mode: Mode,
        /// Required for restricted mode.
        #[arg(long)]
        eps: Option<Rational>,
        /// Pattern bigraph; defaults to the order-2 shattering witness.
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
    /// Homogeneous set of a hypergraph with the top-level stepping trace.
    Hyper {
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Stepping target for the trace; defaults to the instance-scale value.
        #[arg(long)]
        p_target: Option<usize>,
    },
    /// Tournament operations.
    Tournament {
        #[arg(long, value_enum)]
        op: TournamentOp,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Read the backedge graph off the descending out-degree ordering.
        #[arg(long)]
        by_out_degree: bool,
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
    /// Exhaustive reference computations for small instances.
    Oracle {
        #[arg(long, value_enum)]
        op: OracleOp,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        parts: Option<usize>,
        #[arg(long)]
        eps: Option<Rational>,
    },
    /// Sweep a config grid and write one CSV row per instance.
    ///
    /// Columns: kind,family,n,eps,seed,size,verified,trace_depth,bound_stage,slope,intercept,r2,wall_ms.
    /// `kind` is `row` or `summary`; summary rows carry the fitted log-log slope per (family, eps).
    /// Exits 0 iff no returned object failed verification.
    Experiment {
        /// Leave the wall_ms column empty.
        #[arg(long)]
        no_timing: bool,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

enum Instance {
    Graph(Graph),
    Hyper(Hypergraph),
    Tournament(Tournament),
}

impl Common {
    fn read_input(&self) -> CliResult<String> {
        match &self.input {
            Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
            _ => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn instance(&self) -> CliResult<Instance> {
        let text = self.read_input()?;
        let header = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .and_then(|l| l.split_whitespace().next())
            .unwrap_or("");
        match header {
            "graph" => Ok(Instance::Graph(Graph::parse(&text)?)),
            "hgraph" => Ok(Instance::Hyper(Hypergraph::parse(&text)?)),
            "tour" => Ok(Instance::Tournament(Tournament::parse(&text)?)),
            other => Err(Failure::Usage(format!(
                "unrecognized input header {other:?}"
            ))),
        }
    }

    fn graph(&self) -> CliResult<Graph> {
        match self.instance()? {
            Instance::Graph(g) => Ok(g),
            _ => Err(Failure::Usage("expected a graph input".into())),
        }
    }

    fn hypergraph(&self) -> CliResult<Hypergraph> {
        match self.instance()? {
            Instance::Hyper(h) => Ok(h),
            _ => Err(Failure::Usage("expected a hypergraph input".into())),
        }
    }

    fn tournament(&self) -> CliResult<Tournament> {
        match self.instance()? {
            Instance::Tournament(t) => Ok(t),
            _ => Err(Failure::Usage("expected a tournament input".into())),
        }
    }

    fn exponent_params(&self) -> CliResult<ExponentParams> {
        let mut p = match &self.params {
            Some(s) => ExponentParams::parse(s)?,
            None => ExponentParams::default(),
        };
        if let Some(seed) = self.seed {
            p.seed = seed;
        }
        Ok(p)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(p) => fs::write(p, text)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
            None => {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn read_pattern(path: &Option<PathBuf>) -> CliResult<Bigraph> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            Ok(Bigraph::parse(&text)?)
        }
        None => Ok(Bigraph::shattering_witness(2)),
    }
}

fn ids(set: &VertexSet) -> Vec<usize> {
    set.to_vec()
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Sparse => "sparse",
        Side::Dense => "dense",
    }
}

fn line(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let c = &cli.common;
    match cli.command {
        Command::Gen {
            kind,
            family,
            n,
            k,
            p,
            span,
            blowup,
        } => {
            let seed = c.seed.unwrap_or(0);
            let text = match kind {
                Kind::Graph => {
                    let family: GraphFamily = family.parse()?;
                    gen_graph(
                        family,
                        n,
                        seed,
                        &GraphGenParams {
                            span,
                            pattern: blowup,
                        },
                    )?
                    .to_text()
                }
                Kind::Tournament => {
                    let family: TournamentFamily = family.parse()?;
                    gen_tournament(family, n, seed)?.to_text()
                }
                Kind::Hyper => {
                    let family: HyperFamily = family.parse()?;
                    gen_hypergraph(family, k, n, seed, p)?.to_text()
                }
            };
            c.emit(&text)?;
        }
        Command::Vcdim { approx, attempts } => {
            let inst = c.instance()?;
            let fam = match &inst {
                Instance::Graph(g) => neighbourhood_family(Source::Graph(g))?,
                Instance::Hyper(h) => neighbourhood_family(Source::Hypergraph(h))?,
                Instance::Tournament(t) => neighbourhood_family(Source::Tournament(t))?,
            };
            let out = if approx || fam.universe() > MAX_EXACT_UNIVERSE {
                let est = vc_lower_bound(&fam, c.seed.unwrap_or(0), attempts);
                json!({"vc_lower_bound": est.lower_bound, "approximate": true})
            } else {
                json!({"vc": vc_dimension(&fam)?, "approximate": false})
            };
            c.emit(&line(out))?;
        }
        Command::BiInduced { pattern } => {
            let g = c.graph()?;
            let h = read_pattern(&Some(pattern))?;
            let found = bvc_core::bigraph::find_bi_induced(&g, &h)?;
            let verified = found.as_ref().map(|m| h.is_bi_induced_copy(&g, m));
            c.emit(&line(
                json!({"found": found.is_some(), "map": found, "verified": verified}),
            ))?;
        }
        Command::Regularity { eps, parts } => {
            let g = c.graph()?;
            let p = c.exponent_params()?;
            let opts = RegularityOptions {
                k_cap: p.k_cap,
                parts,
                ..RegularityOptions::default()
            };
            let res = ultra_strong_partition(&g, &eps, &opts)?;
            let mut csv = String::from("i,j,density_num,density_den,status\n");
            for pc in &res.pair_table {
                let status = match pc.status {
                    PairStatus::WeaklySparse => "sparse",
                    PairStatus::WeaklyDense => "dense",
                    PairStatus::Impure => "impure",
                };
                let d = pc.density();
                csv.push_str(&format!(
                    "{},{},{},{},{status}\n",
                    pc.i,
                    pc.j,
                    d.numer(),
                    d.denom()
                ));
            }
            c.emit(&csv)?;
            eprintln!(
                "parts={} impure_fraction={} met_bound={} strategy={:?}",
                res.parts(),
                res.impure_fraction,
                res.met_bound,
                res.strategy
            );
        }
        Command::Blockade { eps } => {
            let g = c.graph()?;
            let p = c.exponent_params()?;
            let pb = extract_pure_blockade(&g, &eps, &p)?;
            let sizes: Vec<usize> = pb.blockade.blocks().iter().map(|b| b.len()).collect();
            let directions: Vec<String> = pb
                .certificate
                .pairs
                .iter()
                .map(|pc| {
                    let d = match pc.direction {
                        Direction::SparseInG => "sparse",
                        Direction::SparseInComplement => "dense",
                    };
                    format!("{}-{}:{d}", pc.i, pc.j)
                })
                .collect();
            let out = json!({
                "length": pb.blockade.len(),
                "width": pb.blockade.width(),
                "block_sizes": sizes,
                "directions": directions,
                "certificate": {
                    "eps": pb.certificate.eps.to_string(),
                    "partition_eps": pb.partition_eps.to_string(),
                    "sparse_pairs": pb.certificate.count(Direction::SparseInG),
                    "dense_pairs": pb.certificate.count(Direction::SparseInComplement),
                    "verified": pb.certificate.verify(&g, &pb.blockade),
                },
            });
            c.emit(&line(out))?;
        }
        Command::Extract { mode, eps, pattern } => {
            let g = c.graph()?;
            let h = read_pattern(&pattern)?;
            let p = c.exponent_params()?;
            let mut out = String::new();
            match mode {
                Mode::CliqueStable => {
                    let (r, summary) = clique_or_stable_traced(&g, &h, &p)?;
                    for (level, (y, size)) in summary.trace.iter().enumerate() {
                        out.push_str(&line(
                            json!({"level": level, "y": y.to_string(), "size": size}),
                        ));
                    }
                    out.push_str(&line(json!({
                        "kind": r.kind.to_string(),
                        "size": r.len(),
                        "vertices": ids(&r.set),
                        "verified": r.verify(&g),
                        "bound_stage": summary.stage.map(|s| s.to_string()),
                    })));
                }
                Mode::Restricted => {
                    let eps =
                        eps.ok_or_else(|| Failure::Usage("restricted mode needs --eps".into()))?;
                    match restricted_extract(&g, &h, &eps, &p) {
                        Ok(r) => out.push_str(&line(json!({
                            "side": side_name(r.side),
                            "eps": r.eps.to_string(),
                            "size": r.set.len(),
                            "vertices": ids(&r.set),
                            "verified": r.verify(&g),
                        }))),
                        Err(Error::BoundNotMet(b)) => {
                            for (level, (y, size)) in b.trace.iter().enumerate() {
                                out.push_str(&line(
                                    json!({"level": level, "y": y.to_string(), "size": size}),
                                ));
                            }
                            out.push_str(&line(json!({
                                "bound_stage": b.stage.to_string(),
                                "detail": b.detail,
                                "achieved": [b.achieved.0, b.achieved.1],
                            })));
                            c.emit(&out)?;
                            return Ok(ExitCode::FAILURE);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            c.emit(&out)?;
        }
        Command::Hyper { pattern, p_target } => {
            let hg = c.hypergraph()?;
            let h = read_pattern(&pattern)?;
            let p = c.exponent_params()?;
            let set = hyper_clique_or_stable(&hg, &h, &p)?;
            let mut out = format!(
                "kind,{}\nsize,{}\nset,{}\nverified,{}\n",
                set.kind,
                set.set.len(),
                set.set
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                hg.is_homogeneous(&set.set, set.kind)
            );
            if hg.k() >= 3 && hg.n() >= hg.k() {
                let target = p_target.unwrap_or_else(|| default_p_target(hg.n(), hg.k()));
                let red = erdos_rado_reduce(&hg, target, p.seed)?;
                out.push_str("step,a_size,b_size\n");
                for (q, (a, b)) in red.trace.iter().enumerate() {
                    out.push_str(&format!("{q},{a},{b}\n"));
                }
            }
            c.emit(&out)?;
        }
        Command::Tournament {
            op,
            k,
            by_out_degree,
            pattern,
        } => {
            let q = c.tournament()?;
            match op {
                TournamentOp::Backedge => {
                    let phi = if by_out_degree {
                        Ordering::by_out_degree(&q)
                    } else {
                        Ordering::identity(q.n())
                    };
                    c.emit(&backedge_graph(&q, &phi)?.to_text())?;
                }
                TournamentOp::Colour => {
                    let exact = q.n() <= MAX_EXACT_COLOURING;
                    let col = if exact {
                        is_k_colourable(&q, k)?
                    } else {
                        colour_heuristic(&q, k, c.seed.unwrap_or(0), 64)
                    };
                    let out = match col {
                        Colouring::Found(parts) => {
                            let parts: Vec<Vec<usize>> = parts.iter().map(ids).collect();
                            json!({"colourable": true, "exact": exact, "parts": parts})
                        }
                        Colouring::NotColourable => json!({"colourable": false, "exact": exact}),
                        Colouring::Unknown => json!({"colourable": null, "exact": exact}),
                    };
                    c.emit(&line(out))?;
                }
                TournamentOp::Transitive => {
                    let h = read_pattern(&pattern)?;
                    let p = c.exponent_params()?;
                    let t = largest_transitive(&q, &h, &p)?;
                    c.emit(&line(json!({
                        "size": t.set.len(),
                        "vertices": ids(&t.set),
                        "ordering": t.ordering.as_slice(),
                        "reversed": t.reversed,
                        "verified": q.is_transitive(&t.set),
                    })))?;
                }
            }
        }
        Command::Oracle {
            op,
            pattern,
            parts,
            eps,
        } => {
            let out = match op {
                OracleOp::CliqueStable => {
                    let cs = oracle::max_clique_stable_exact(&c.graph()?)?;
                    json!({"clique": ids(&cs.clique), "stable": ids(&cs.stable)})
                }
                OracleOp::Transitive => {
                    let best = oracle::max_transitive_exact(&c.tournament()?)?;
                    json!({"size": best.len(), "vertices": ids(&best)})
                }
                OracleOp::Hyper => {
                    let (clique, stable) = oracle::max_hyper_clique_stable_exact(&c.hypergraph()?)?;
                    json!({"clique": clique, "stable": stable})
                }
                OracleOp::Equipartition => {
                    let parts = parts
                        .ok_or_else(|| Failure::Usage("equipartition needs --parts".into()))?;
                    let eps =
                        eps.ok_or_else(|| Failure::Usage("equipartition needs --eps".into()))?;
                    let (frac, best) = oracle::best_equipartition_exact(&c.graph()?, parts, &eps)?;
                    let best: Vec<Vec<usize>> = best.iter().map(ids).collect();
                    json!({"impure_fraction": frac.to_string(), "parts": best})
                }
                OracleOp::Vc => {
                    let fam = match c.instance()? {
                        Instance::Graph(g) => neighbourhood_family(Source::Graph(&g))?,
                        Instance::Hyper(h) => neighbourhood_family(Source::Hypergraph(&h))?,
                        Instance::Tournament(t) => neighbourhood_family(Source::Tournament(&t))?,
                    };
                    json!({"vc": oracle::naive_vc_dimension(&fam)?})
                }
                OracleOp::BiInduced => {
                    let path = pattern
                        .ok_or_else(|| Failure::Usage("bi-induced needs --pattern".into()))?;
                    let h = read_pattern(&Some(path))?;
                    json!({"found": oracle::naive_bi_induced(&c.graph()?, &h)?})
                }
            };
            c.emit(&line(out))?;
        }
        Command::Experiment { no_timing } => {
            let cfg = ExperimentConfig::parse(&c.read_input()?)?;
            let jobs = c
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = run_experiment(&cfg, jobs.max(1))?;
            c.emit(&report.to_csv(!no_timing))?;
            log::info!("{} rows; header {CSV_HEADER}", report.rows.len());
            if !report.all_verified() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
