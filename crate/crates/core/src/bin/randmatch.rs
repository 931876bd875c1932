//! Command-line front end: generate random instances, solve graph files,
//! run the experiment catalog, reshape results into plot tables, and probe
//! alternating-path structure.
//!
//! Exit codes: 0 success, 2 infeasible instance, 3 parse error,
//! 4 precondition violation, 1 internal error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use randmatch::bipartite::{solve_sequence, DualCertificate};
use randmatch::diagnostics::{
    ab_diameter, build_alternating_digraph, build_general_alternating_digraph,
    max_matching_edge_cost, min_alternating_cost, DiagnosticsConfig,
};
use randmatch::general::{solve_perfect_matching, verify_certificate};
use randmatch::graph::{generate, Model, ModelSpec};
use randmatch::io::{format_graph, read_graph};
use randmatch::montecarlo::{
    concentration_tail, estimate_pnr, increment_profile, membership_frequency, render_csv,
    render_jsonl, run_experiment, ExperimentParams, ExperimentSpec, Quantity, Summary,
    TrialRecord, DEFAULT_LAMBDA,
};
use randmatch::theory;
use randmatch::{Error, GeneratedGraph, RngStream};

#[derive(Parser)]
#[command(name = "randmatch", version, about = "Exact matching on random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random weighted graph and write it in edge-list format.
    Generate(GenerateArgs),
    /// Solve a graph file and print cost, matching, and certificate status.
    Solve(SolveArgs),
    /// Run a named experiment from the catalog.
    Experiment(ExperimentArgs),
    /// Reshape experiment result files into plot-ready tables.
    Plotdata(PlotdataArgs),
    /// Probe alternating-path structure of an optimal matching.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// complete_bipartite | gnnp | complete | gnp
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Exponential rate of the edge costs.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Assignment,
    Sequence,
    General,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    mode: SolveMode,
    /// Matching size for --mode sequence (default: all of A).
    #[arg(long)]
    rmax: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct ExperimentArgs {
    /// theorem1 | theorem2 | parisi | pnr | increments | membership |
    /// concentration | maxedge | diameter
    name: String,
    /// TOML file with keys mirroring the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed (also settable via RANDMATCH_SEED).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu_factor: Option<f64>,
    #[arg(long)]
    pair_samples: Option<usize>,
    /// Comma-separated deviation thresholds for concentration.
    #[arg(long, value_delimiter = ',')]
    epsilons: Vec<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Result file; defaults to <name>.<format> in the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (also settable via RANDMATCH_THREADS).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    /// r vs empirical increment vs theory.
    Increments,
    /// n vs scaled mean cost with error bars.
    Convergence,
    /// epsilon vs exceedance frequency.
    Exceedance,
}

#[derive(Args)]
struct PlotdataArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    /// JSONL result files produced by `experiment`.
    inputs: Vec<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    graph: PathBuf,
    /// Matching size (bipartite; default n - floor(n / ln^2 n)).
    #[arg(long)]
    r: Option<usize>,
    /// Out-degree truncation (default 40 bipartite, 20 general).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// TOML configuration with keys mirroring the experiment flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    n: Option<usize>,
    p: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    r: Option<usize>,
    lambda: Option<f64>,
    mu_factor: Option<f64>,
    pair_samples: Option<usize>,
    epsilons: Option<Vec<f64>>,
    format: Option<String>,
    out: Option<PathBuf>,
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 3,
        Error::NoMatching(_) | Error::NoPerfectMatching => 2,
        Error::OddVertexCount(_) | Error::InvalidArgument(_) => 4,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Plotdata(args) => cmd_plotdata(args),
        Command::Diagnose(args) => cmd_diagnose(args),
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("RANDMATCH_SEED").ok()?.parse().ok()
}

fn env_threads() -> Option<usize> {
    std::env::var("RANDMATCH_THREADS").ok()?.parse().ok()
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Error> {
    let model = Model::from_str(&args.model)?;
    let spec = ModelSpec {
        model,
        n: args.n,
        p: args.p,
        rate: args.rate,
    }
    .validated()?;
    let seed = args.seed.or_else(env_seed).unwrap_or(1);
    let mut rng = RngStream::for_purpose(seed, "generate", 0);
    let graph = generate(spec, &mut rng)?;
    let text = format_graph(&graph);
    match args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), Error> {
    let graph = read_graph(&args.graph)?;
    match (args.mode, &graph) {
        (SolveMode::Assignment, GeneratedGraph::Bipartite(g)) => {
            if g.n_left() != g.n_right() {
                return Err(Error::InvalidArgument(format!(
                    "assignment requires a square instance, got {} x {}",
                    g.n_left(),
                    g.n_right()
                )));
            }
            let seq = match solve_sequence(g, g.n_left(), true) {
                Err(Error::NoMatching(_)) => return Err(Error::NoPerfectMatching),
                other => other?,
            };
            let m = &seq.final_matching;
            let cert_ok = seq
                .certificates
                .as_ref()
                .and_then(|cs| cs.last())
                .map(|c: &DualCertificate| c.verify(g, m, g.n_left()))
                .unwrap_or(false);
            println!("cost {:.12}", m.cost);
            for &(a, b, w) in &m.pairs {
                println!("match {a} {b} {w:.12}");
            }
            println!("certificate {}", if cert_ok { "ok" } else { "FAILED" });
            if !cert_ok {
                return Err(Error::OptimalityViolation);
            }
        }
        (SolveMode::Sequence, GeneratedGraph::Bipartite(g)) => {
            let r_max = args.rmax.unwrap_or_else(|| g.n_left());
            let seq = solve_sequence(g, r_max, false)?;
            for r in 1..=r_max {
                println!(
                    "r {r} cost {:.12} increment {:.12}",
                    seq.costs[r - 1],
                    seq.increments[r - 1]
                );
            }
        }
        (SolveMode::General, GeneratedGraph::General(g)) => {
            let (m, state) = solve_perfect_matching(g)?;
            let cert_ok = verify_certificate(g, &m, &state);
            println!("cost {:.12}", m.cost);
            for &(u, v, w) in &m.pairs {
                println!("match {u} {v} {w:.12}");
            }
            println!("certificate {}", if cert_ok { "ok" } else { "FAILED" });
            if !cert_ok {
                return Err(Error::OptimalityViolation);
            }
        }
        (SolveMode::General, GeneratedGraph::Bipartite(_)) => {
            return Err(Error::InvalidArgument(
                "general mode needs a general graph file".into(),
            ));
        }
        (_, GeneratedGraph::General(_)) => {
            return Err(Error::InvalidArgument(
                "assignment/sequence modes need a bipartite graph file".into(),
            ));
        }
    }
    Ok(())
}

/// Catalog defaults; file config and flags override them in that order.
struct CatalogEntry {
    model: Model,
    n: usize,
    p: f64,
    trials: usize,
    quantity: Quantity,
    r: Option<usize>,
    epsilons: Vec<f64>,
    pair_samples: Option<usize>,
}

fn catalog(name: &str) -> Result<CatalogEntry, Error> {
    let e = match name {
        "theorem1" => CatalogEntry {
            model: Model::Gnnp,
            n: 400,
            p: 0.25,
            trials: 200,
            quantity: Quantity::PerfectCost,
            r: None,
            epsilons: vec![],
            pair_samples: None,
        },
        "theorem2" => CatalogEntry {
            model: Model::Gnp,
            n: 400,
            p: 0.25,
            trials: 200,
            quantity: Quantity::PerfectCost,
            r: None,
            epsilons: vec![],
            pair_samples: None,
        },
        "parisi" => CatalogEntry {
            model: Model::CompleteBipartite,
            n: 10,
            p: 1.0,
            trials: 20_000,
            quantity: Quantity::PerfectCost,
            r: None,
            epsilons: vec![],
            pair_samples: None,
        },
        "pnr" => CatalogEntry {
            model: Model::CompleteBipartite,
            n: 20,
            p: 1.0,
            trials: 1_000_000,
            quantity: Quantity::Pnr,
            r: Some(10),
            epsilons: vec![],
            pair_samples: None,
        },
        "increments" => CatalogEntry {
            model: Model::CompleteBipartite,
            n: 10,
            p: 1.0,
            trials: 20_000,
            quantity: Quantity::CostSequence,
            r: None,
            epsilons: vec![],
            pair_samples: None,
        },
        "membership" => CatalogEntry {
            model: Model::CompleteBipartite,
            n: 6,
            p: 1.0,
            trials: 10_000,
            quantity: Quantity::Membership,
            r: Some(3),
            epsilons: vec![],
            pair_samples: None,
        },
        "concentration" => CatalogEntry {
            model: Model::Gnnp,
            n: 400,
            p: 0.25,
            trials: 300,
            quantity: Quantity::Concentration,
            r: None,
            epsilons: vec![0.3],
            pair_samples: None,
        },
        "maxedge" => CatalogEntry {
            model: Model::Gnnp,
            n: 400,
            p: 0.25,
            trials: 100,
            quantity: Quantity::MaxEdge,
            r: None,
            epsilons: vec![],
            pair_samples: None,
        },
        "diameter" => {
            let n = 300usize;
            CatalogEntry {
                model: Model::Gnnp,
                n,
                p: 3.0 * (n as f64).ln().powi(2) / n as f64,
                trials: 20,
                quantity: Quantity::Diameter,
                r: None,
                epsilons: vec![],
                pair_samples: Some(50),
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown experiment '{other}'"
            )))
        }
    };
    Ok(e)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Error> {
    let entry = catalog(&args.name)?;
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str(&text)
                .map_err(|e| Error::InvalidArgument(format!("config file: {e}")))?
        }
        None => FileConfig::default(),
    };

    if let Some(t) = args.threads.or(file.threads).or_else(env_threads) {
        // Ignore failure: the global pool can only be installed once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }

    let model = match file.model.as_deref() {
        Some(name) => Model::from_str(name)?,
        None => entry.model,
    };
    let n = args.n.or(file.n).unwrap_or(entry.n);
    let p = args.p.or(file.p).unwrap_or(entry.p);
    let trials = args.trials.or(file.trials).unwrap_or(entry.trials);
    let seed = args
        .seed
        .or(file.seed)
        .or_else(env_seed)
        .unwrap_or(1);
    let r = args.r.or(file.r).or(entry.r);
    let lambda = args.lambda.or(file.lambda);
    let mu_factor = args.mu_factor.or(file.mu_factor);
    let pair_samples = args
        .pair_samples
        .or(file.pair_samples)
        .or(entry.pair_samples);
    let epsilons = if !args.epsilons.is_empty() {
        args.epsilons.clone()
    } else {
        file.epsilons.unwrap_or(entry.epsilons)
    };
    let format = match (args.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("csv")) => OutputFormat::Csv,
        (None, Some("jsonl")) | (None, None) => OutputFormat::Jsonl,
        (None, Some(other)) => {
            return Err(Error::InvalidArgument(format!(
                "unknown format '{other}'"
            )))
        }
    };
    let ext = match format {
        OutputFormat::Jsonl => "jsonl",
        OutputFormat::Csv => "csv",
    };
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", args.name)));

    let spec = ExperimentSpec {
        name: args.name.clone(),
        model: ModelSpec {
            model,
            n,
            p,
            rate: 1.0,
        }
        .validated()?,
        trials,
        base_seed: seed,
        quantity: entry.quantity,
        params: ExperimentParams {
            r,
            lambda,
            epsilons: epsilons.clone(),
            mu_factor,
            pair_samples,
        },
    };

    // Run the experiment; quantity-specific reports ride along with records.
    let mut reports: Vec<(&str, serde_json::Value)> = vec![];
    let (records, summary): (Vec<TrialRecord>, Option<Summary>) = match spec.quantity {
        Quantity::Pnr => {
            let est = estimate_pnr(
                n,
                r.unwrap_or(n),
                p,
                lambda.unwrap_or(DEFAULT_LAMBDA),
                trials,
                seed,
            )?;
            println!(
                "{}: estimate {:.7} theory {:.7} se {:.7}",
                args.name, est.estimate, est.theory, est.standard_error
            );
            reports.push(("pnr", serde_json::to_value(&est).unwrap()));
            (vec![], None)
        }
        Quantity::Membership => {
            let rep = membership_frequency(n, r.unwrap_or(n), p, trials, seed)?;
            println!(
                "{}: chi_square {:.4} critical {:.4} -> {}",
                args.name,
                rep.chi_square,
                rep.critical_value,
                if rep.passes { "pass" } else { "FAIL" }
            );
            reports.push(("membership", serde_json::to_value(&rep).unwrap()));
            (vec![], None)
        }
        Quantity::CostSequence => {
            let (records, prof) = increment_profile(n, p, trials, seed)?;
            println!(
                "{}: {} increment rows, max |z| {:.3}",
                args.name,
                prof.rows.len(),
                prof.rows
                    .iter()
                    .map(|r| r.z_score.abs())
                    .fold(0.0, f64::max)
            );
            reports.push(("increments", serde_json::to_value(&prof).unwrap()));
            (records, None)
        }
        Quantity::Concentration => {
            let (records, rep) = concentration_tail(&spec, &epsilons)?;
            for &(eps, freq) in &rep.exceedance {
                println!(
                    "{}: n {} epsilon {:.3} exceedance {:.4} truncation_mismatch {:.4}",
                    args.name, n, eps, freq, rep.truncation_mismatch
                );
            }
            reports.push(("concentration", serde_json::to_value(&rep).unwrap()));
            (records, None)
        }
        _ => {
            let (records, summary) = run_experiment(&spec)?;
            match &summary.comparison {
                Some(c) => println!(
                    "{}: mean {:.7} theory {:.7} relative_deviation {:.4} z {:.3}",
                    args.name, summary.mean, c.theory_value, c.relative_deviation, c.z_score
                ),
                None => println!(
                    "{}: mean {:.7} se {:.7} ok {} infeasible {}",
                    args.name,
                    summary.mean,
                    summary.standard_error,
                    summary.trials_ok,
                    summary.trials_infeasible
                ),
            }
            (records, Some(summary))
        }
    };

    let config = serde_json::to_value(&spec).map_err(|e| Error::Numeric(e.to_string()))?;
    let text = match format {
        OutputFormat::Jsonl => render_jsonl(&config, &records, &reports, summary.as_ref())?,
        OutputFormat::Csv => render_csv(&config, &records, &reports, summary.as_ref())?,
    };
    std::fs::write(&out, text)?;
    println!("wrote {}", out.display());
    Ok(())
}

/// One parsed JSONL result file.
struct ResultFile {
    config: serde_json::Value,
    reports: Vec<(String, serde_json::Value)>,
    summary: Option<serde_json::Value>,
}

fn read_result_file(path: &PathBuf) -> Result<ResultFile, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut config = None;
    let mut reports = vec![];
    let mut summary = None;
    for (i, line) in text.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("{}: {e}", path.display()),
        })?;
        match v.get("type").and_then(|t| t.as_str()) {
            Some("config") => config = v.get("config").cloned(),
            Some("report") => {
                let kind = v
                    .get("kind")
                    .and_then(|k| k.as_str())
                    .unwrap_or("")
                    .to_string();
                reports.push((kind, v.get("report").cloned().unwrap_or_default()));
            }
            Some("summary") => summary = v.get("summary").cloned(),
            _ => {}
        }
    }
    let config = config.ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("{}: missing config line", path.display()),
    })?;
    Ok(ResultFile {
        config,
        reports,
        summary,
    })
}

fn cmd_plotdata(args: PlotdataArgs) -> Result<(), Error> {
    use std::fmt::Write;

    let mut out = String::new();
    match args.kind {
        PlotKind::Increments => {
            writeln!(out, "r,empirical,theory,z").ok();
            for path in &args.inputs {
                let f = read_result_file(path)?;
                let prof = f
                    .reports
                    .iter()
                    .find(|(k, _)| k == "increments")
                    .map(|(_, v)| v)
                    .ok_or_else(|| Error::Parse {
                        line: 0,
                        message: format!("{}: no increments report", path.display()),
                    })?;
                for row in prof["rows"].as_array().into_iter().flatten() {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        row["r"], row["empirical_mean"], row["theory"], row["z_score"]
                    )
                    .ok();
                }
            }
        }
        PlotKind::Convergence => {
            writeln!(out, "n,p,mean,p_mean,standard_error,theory,relative_deviation").ok();
            let mut rows = vec![];
            for path in &args.inputs {
                let f = read_result_file(path)?;
                let summary = f.summary.ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("{}: no summary line", path.display()),
                })?;
                let n = f.config["model"]["n"].as_u64().unwrap_or(0);
                let p = f.config["model"]["p"].as_f64().unwrap_or(f64::NAN);
                let mean = summary["mean"].as_f64().unwrap_or(f64::NAN);
                let se = summary["standard_error"].as_f64().unwrap_or(f64::NAN);
                let (theory, dev) = match summary.get("comparison") {
                    Some(c) if !c.is_null() => (
                        c["theory_value"].as_f64().unwrap_or(f64::NAN),
                        c["relative_deviation"].as_f64().unwrap_or(f64::NAN),
                    ),
                    _ => (f64::NAN, f64::NAN),
                };
                rows.push((n, p, mean, se, theory, dev));
            }
            rows.sort_by_key(|r| r.0);
            for (n, p, mean, se, theory, dev) in rows {
                writeln!(out, "{n},{p},{mean},{},{se},{theory},{dev}", p * mean).ok();
            }
        }
        PlotKind::Exceedance => {
            writeln!(out, "n,epsilon,frequency,truncation_mismatch").ok();
            for path in &args.inputs {
                let f = read_result_file(path)?;
                let rep = f
                    .reports
                    .iter()
                    .find(|(k, _)| k == "concentration")
                    .map(|(_, v)| v)
                    .ok_or_else(|| Error::Parse {
                        line: 0,
                        message: format!("{}: no concentration report", path.display()),
                    })?;
                let n = rep["n"].as_u64().unwrap_or(0);
                let mismatch = rep["truncation_mismatch"].as_f64().unwrap_or(f64::NAN);
                for pair in rep["exceedance"].as_array().into_iter().flatten() {
                    writeln!(out, "{n},{},{},{mismatch}", pair[0], pair[1]).ok();
                }
            }
        }
    }
    match args.out {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn cmd_diagnose(args: DiagnoseArgs) -> Result<(), Error> {
    let graph = read_graph(&args.graph)?;
    let seed = args.seed.or_else(env_seed).unwrap_or(1);
    let report = match &graph {
        GeneratedGraph::Bipartite(g) => {
            let n = g.n_left();
            let r = args
                .r
                .unwrap_or_else(|| n.saturating_sub(theory::default_cutoff(n)).max(1));
            let mut cfg = DiagnosticsConfig::bipartite(n);
            if let Some(k) = args.k {
                cfg.k = k;
            }
            cfg.pair_samples = args.pairs;
            cfg.a_limit = Some((r + 1).min(n));
            let seq = solve_sequence(g, r, false)?;
            let d = build_alternating_digraph(g, &seq.final_matching, &cfg);
            let mut rng = RngStream::for_purpose(seed, "diagnose/pairs", 0);
            let pairs = d.sample_pairs(cfg.pair_samples, &mut rng);
            let diam = ab_diameter(&d, &pairs)?;
            // Weighted probe doubles as the negative-cycle check.
            let mut weighted_max: Option<f64> = None;
            for &(a, b) in &pairs {
                match min_alternating_cost(&d, a, b) {
                    Ok(c) => weighted_max = Some(weighted_max.map_or(c, |m: f64| m.max(c))),
                    Err(Error::InvalidArgument(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            serde_json::json!({
                "graph": "bipartite",
                "n": n,
                "r": r,
                "k": cfg.k,
                "hop_bound_k0": cfg.k0,
                "pair_samples": pairs.len(),
                "max_hops": diam.max_hops,
                "unreachable": diam.unreachable,
                "max_hops_unmatched_targets": diam.max_hops_unmatched,
                "unreachable_unmatched_targets": diam.unreachable_unmatched,
                "max_weighted_ab_cost": weighted_max,
                "max_matching_edge_cost": max_matching_edge_cost(&seq.final_matching.pairs)?,
                "negative_alternating_cycle": false,
            })
        }
        GeneratedGraph::General(g) => {
            let n = g.n();
            let (m, _) = solve_perfect_matching(g)?;
            let mut cfg = DiagnosticsConfig::general(n);
            if let Some(k) = args.k {
                cfg.k = k;
            }
            cfg.pair_samples = args.pairs;
            let mut rng = RngStream::for_purpose(seed, "diagnose/orient", 0);
            let d = build_general_alternating_digraph(g, &m, &cfg, &mut rng);
            let mut pair_rng = RngStream::for_purpose(seed, "diagnose/pairs", 0);
            let pairs = d.sample_pairs(cfg.pair_samples, &mut pair_rng);
            let diam = ab_diameter(&d, &pairs)?;
            serde_json::json!({
                "graph": "general",
                "n": n,
                "k": cfg.k,
                "hop_bound_k0": cfg.k0,
                "pair_samples": pairs.len(),
                "max_hops": diam.max_hops,
                "unreachable": diam.unreachable,
                "max_matching_edge_cost": m.max_edge_cost()?,
            })
        }
    };
    println!("{report:#}");
    Ok(())
}
