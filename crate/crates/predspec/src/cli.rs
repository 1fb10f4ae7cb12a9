//! Argument parsing and command dispatch for the `predspec` binary.
//!
//! Exit codes: 0 on success, 1 on runtime or data errors (missing files,
//! malformed input), 2 on usage errors (unknown flags, missing or
//! out-of-range parameters).

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use predspec_core::dsr::{classic_decision, dsr_metrics, kd_decision, pdsr_decision, DsrConfig};
use predspec_core::metrics::MetricsPair;
use predspec_core::oms::{
    elyaniv_threshold, eps_pst_threshold, oms_eps_metrics, oms_metrics, pst_threshold,
    sun_threshold, OmsConfig,
};
use predspec_core::oracles::{
    dsr_frontier, dsr_metrics_sweep, oms_eps_metrics_sweep, oms_frontier, oms_metrics_sweep,
    rsr_frontier, rsr_metrics_sweep, verify_nondominated, FrontierScan, FRONTIER_X_GRID,
};
use predspec_core::rsr::{gamma_xi, karlin_distribution, kr_distribution, meta_rsr, prsr, rsr_metrics, RentBuyDistribution};
use predspec_core::sched2::{round_robin_cost, sched_opt, two_stage_metrics, JobPairActual, JobPairPrediction};
use serde::Serialize;

use crate::dpm::{run_dpm, DpmConfig, DpmPolicy, PowerState, PowerStateTable};
use crate::io::{load_idle_intervals, load_state_table, load_vix_csv, require_file, AlgorithmPointJson, FrontierJson};
use crate::records::{param_string, write_records, EvalRecord, OutputFormat, Record};
use crate::ski::{default_algorithms as ski_algorithms, gen_synthetic_ski, run_ski_experiment, SyntheticSkiConfig};
use crate::vix::{default_algorithms as vix_algorithms, run_vix, VixRunConfig};

#[derive(Parser, Debug)]
#[command(name = "predspec", version, about = "Prediction-specific online algorithms: metrics, frontiers and experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Consistency and robustness of one algorithm under one or many predictions.
    Eval(EvalArgs),
    /// Brute-force Pareto frontier for one prediction, with an algorithm's point checked against it.
    Frontier(FrontierArgs),
    /// Synthetic ski-rental trials with noisy predictions.
    SkiSynthetic(SkiArgs),
    /// Dynamic power management over an idle-interval trace.
    Dpm(DpmArgs),
    /// Monthly one-max-search trading on daily closes.
    Vix(VixArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Dsr,
    Rsr,
    Oms,
    Sched2,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Dsr => "dsr",
            Problem::Rsr => "rsr",
            Problem::Oms => "oms",
            Problem::Sched2 => "sched2",
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parameters shared by `eval` and `frontier`.
#[derive(Args, Debug, Clone)]
pub struct AlgorithmArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    /// dsr: classic, kd, pdsr. rsr: karlin, kr, prsr, lp. oms: el-yaniv,
    /// blind-trust, sun, pst, eps-pst. sched2: two-stage, round-robin.
    #[arg(long)]
    pub algorithm: String,
    /// Buying price for ski rental.
    #[arg(long, default_value_t = 100)]
    pub b: u64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "gamma-bar")]
    pub gamma_bar: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Lower price bound for one-max search.
    #[arg(long = "L")]
    pub lower: Option<f64>,
    /// Upper price bound for one-max search.
    #[arg(long = "U")]
    pub upper: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub alg: AlgorithmArgs,
    /// Single prediction; without it a grid of predictions is evaluated.
    /// For sched2 this is the first job's predicted size.
    #[arg(long)]
    pub y: Option<f64>,
    /// Second job's predicted size (sched2 only).
    #[arg(long)]
    pub y2: Option<f64>,
    /// Number of prediction points when `--y` is absent.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FrontierArgs {
    #[command(flatten)]
    pub alg: AlgorithmArgs,
    #[arg(long)]
    pub y: f64,
    /// Threshold grid size (oms) or robustness-target grid size (rsr).
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Largest robustness target on the rsr grid.
    #[arg(long = "gamma-max", default_value_t = 5.0)]
    pub gamma_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SkiArgs {
    #[arg(long, default_value_t = 100)]
    pub b: u64,
    #[arg(long = "x-max-multiplier", default_value_t = 10)]
    pub x_max_multiplier: u64,
    /// Prediction accuracy; a comma-separated list sweeps several values.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 500.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long = "kr-lambda", default_value_t = 1.5f64.ln())]
    pub kr_lambda: f64,
    #[arg(long = "gamma-bar", default_value_t = 3.0)]
    pub gamma_bar: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DpmArgs {
    /// Idle intervals, one per line.
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// JSON array of `{rate, wake_cost}`; defaults to the two-state table
    /// `(1, 0), (0, base-price)`.
    #[arg(long)]
    pub states: Option<PathBuf>,
    #[arg(long = "base-price", default_value_t = 100)]
    pub base_price: u64,
    /// Standard deviation of additive prediction noise on the scaled intervals.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "gamma-bar", default_value_t = 3.0)]
    pub gamma_bar: f64,
    #[arg(long = "kr-lambda", default_value_t = 1.5f64.ln())]
    pub kr_lambda: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VixArgs {
    /// CSV with header `date,close`.
    #[arg(long)]
    pub data: PathBuf,
    /// Comma-separated list of error levels in [0, 1].
    #[arg(long = "error-level", value_delimiter = ',', default_value = "1.0")]
    pub error_level: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Use the first month only as the prediction source for the second.
    #[arg(long = "lead-in")]
    pub lead_in: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A parameter problem detected before any work is done.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn need(value: Option<f64>, flag: &str, algorithm: &str) -> Result<f64> {
    value.ok_or_else(|| usage(format!("--{flag} is required for algorithm `{algorithm}`")))
}

/// 2 for usage and parameter-range errors, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let is_usage = err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<predspec_core::Error>(),
                Some(predspec_core::Error::OutOfRange { .. })
            )
    });
    if is_usage {
        2
    } else {
        1
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            eprintln!("{summary}");
            0
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Frontier(a) => cmd_frontier(&a),
        Command::SkiSynthetic(a) => cmd_ski(&a),
        Command::Dpm(a) => cmd_dpm(&a),
        Command::Vix(a) => cmd_vix(&a),
    }
}

fn open_output(out: &OutputArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(records: &[T], out: &OutputArgs) -> Result<()> {
    write_records(records, out.output, open_output(out)?)
}

fn fmt_opt(v: Option<f64>) -> Option<String> {
    v.map(|v| v.to_string())
}

/// The run configuration echoed into every record.
fn algorithm_params(a: &AlgorithmArgs) -> Vec<(&'static str, String)> {
    let mut p = vec![("problem", a.problem.to_string()), ("algorithm", a.algorithm.clone())];
    if matches!(a.problem, Problem::Dsr | Problem::Rsr) {
        p.push(("b", a.b.to_string()));
    }
    for (k, v) in [
        ("lambda", fmt_opt(a.lambda)),
        ("gamma_bar", fmt_opt(a.gamma_bar)),
        ("eps", fmt_opt(a.eps)),
        ("L", fmt_opt(a.lower)),
        ("U", fmt_opt(a.upper)),
    ] {
        if let Some(v) = v {
            p.push((k, v));
        }
    }
    p
}

/// `n` integer predictions spread over `[1, 3b]` (all of them if `n ≥ 3b`).
pub fn integer_grid(b: u64, n: usize) -> Vec<u64> {
    let hi = 3 * b;
    let n = n.max(1);
    if n as u64 >= hi {
        return (1..=hi).collect();
    }
    let mut out: Vec<u64> = (0..n)
        .map(|k| {
            if n == 1 {
                1
            } else {
                1 + ((hi - 1) as f64 * k as f64 / (n - 1) as f64).round() as u64
            }
        })
        .collect();
    out.dedup();
    out
}

/// `n` cell midpoints of `[L, U]`.
pub fn price_grid(cfg: &OmsConfig, n: usize) -> Vec<f64> {
    let (l, u) = (cfg.lower(), cfg.upper());
    (0..n).map(|k| l + (k as f64 + 0.5) * (u - l) / n as f64).collect()
}

fn oms_config(a: &AlgorithmArgs) -> Result<OmsConfig> {
    let l = a.lower.ok_or_else(|| usage("--L is required for problem `oms`"))?;
    let u = a.upper.ok_or_else(|| usage("--U is required for problem `oms`"))?;
    if !(l > 0.0 && u > l && u.is_finite()) {
        return Err(usage(format!("need 0 < L < U, got L={l}, U={u}")));
    }
    Ok(OmsConfig::new(l, u)?)
}

fn dsr_config(a: &AlgorithmArgs) -> Result<DsrConfig> {
    if a.b < 2 {
        return Err(usage(format!("--b must be at least 2, got {}", a.b)));
    }
    Ok(DsrConfig::new(a.b)?)
}

fn integer_prediction(y: f64) -> Result<u64> {
    if !(y >= 1.0 && y.fract() == 0.0 && y.is_finite()) {
        return Err(usage(format!("--y must be a positive integer for ski rental, got {y}")));
    }
    Ok(y as u64)
}

fn unknown_algorithm(a: &AlgorithmArgs, known: &str) -> anyhow::Error {
    usage(format!(
        "unknown algorithm `{}` for problem `{}` (expected one of: {known})",
        a.algorithm, a.problem
    ))
}

/// Deterministic ski rental purchase day for the named rule.
fn dsr_decision(a: &AlgorithmArgs, y: u64, cfg: &DsrConfig) -> Result<predspec_core::dsr::PurchaseDay> {
    Ok(match a.algorithm.as_str() {
        "classic" => classic_decision(cfg),
        "kd" => kd_decision(y, cfg, need(a.lambda, "lambda", "kd")?)?,
        "pdsr" => pdsr_decision(y, cfg, need(a.lambda, "lambda", "pdsr")?)?,
        _ => return Err(unknown_algorithm(a, "classic, kd, pdsr")),
    })
}

fn rsr_distribution(a: &AlgorithmArgs, y: u64, cfg: &DsrConfig) -> Result<RentBuyDistribution> {
    Ok(match a.algorithm.as_str() {
        "karlin" => karlin_distribution(cfg),
        "kr" => kr_distribution(y, cfg, need(a.lambda, "lambda", "kr")?)?,
        "prsr" => prsr(y, cfg, need(a.gamma_bar, "gamma-bar", "prsr")?)?,
        "lp" => meta_rsr(y, cfg, need(a.gamma_bar, "gamma-bar", "lp")?)?.distribution,
        _ => return Err(unknown_algorithm(a, "karlin, kr, prsr, lp")),
    })
}

fn oms_phi(a: &AlgorithmArgs, y: f64, cfg: &OmsConfig) -> Result<f64> {
    let policy = match a.algorithm.as_str() {
        "el-yaniv" => elyaniv_threshold(cfg),
        "blind-trust" => predspec_core::oms::ThresholdPolicy::custom(y, cfg)?,
        "sun" => sun_threshold(y, cfg, need(a.lambda, "lambda", "sun")?)?,
        "pst" => pst_threshold(y, cfg, need(a.lambda, "lambda", "pst")?)?,
        "eps-pst" => eps_pst_threshold(
            y,
            cfg,
            need(a.lambda, "lambda", "eps-pst")?,
            need(a.eps, "eps", "eps-pst")?,
        )?,
        _ => return Err(unknown_algorithm(a, "el-yaniv, blind-trust, sun, pst, eps-pst")),
    };
    Ok(policy.phi)
}

fn sched2_metrics(a: &AlgorithmArgs, pred: &JobPairPrediction) -> Result<MetricsPair> {
    match a.algorithm.as_str() {
        "two-stage" => Ok(two_stage_metrics(pred, need(a.lambda, "lambda", "two-stage")?)?),
        "round-robin" => {
            let accurate = JobPairActual::new(pred.y1(), pred.y2())?;
            Ok(MetricsPair::new(round_robin_cost(&accurate) / sched_opt(&accurate), 4.0 / 3.0))
        }
        _ => Err(unknown_algorithm(a, "two-stage, round-robin")),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<String> {
    let a = &args.alg;
    let params = param_string(&algorithm_params(a));
    let record = |y: f64, m: MetricsPair, extra: &str| EvalRecord {
        problem: a.problem.to_string(),
        algorithm: a.algorithm.clone(),
        y,
        beta_y: m.consistency,
        gamma_y: m.robustness,
        params: format!("{params}{extra}"),
    };
    if args.grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    let mut records = Vec::new();
    match a.problem {
        Problem::Dsr | Problem::Rsr => {
            let cfg = dsr_config(a)?;
            let ys = match args.y {
                Some(y) => vec![integer_prediction(y)?],
                None => integer_grid(cfg.price(), args.grid),
            };
            for y in ys {
                let m = if a.problem == Problem::Dsr {
                    dsr_metrics(dsr_decision(a, y, &cfg)?, y, &cfg)
                } else {
                    rsr_metrics(&rsr_distribution(a, y, &cfg)?, y, &cfg)?
                };
                records.push(record(y as f64, m, ""));
            }
        }
        Problem::Oms => {
            let cfg = oms_config(a)?;
            let ys = match args.y {
                Some(y) => vec![y],
                None => price_grid(&cfg, args.grid),
            };
            for y in ys {
                if !(y >= cfg.lower() && y <= cfg.upper()) {
                    return Err(usage(format!("--y must lie in [L, U], got {y}")));
                }
                let phi = oms_phi(a, y, &cfg)?;
                // ε-PST is judged by ε-consistency; any rule can be with --eps.
                let m = match a.eps {
                    Some(eps) => oms_eps_metrics(phi, y, eps, &cfg),
                    None => oms_metrics(phi, y, &cfg),
                };
                records.push(record(y, m, &format!(";phi={phi}")));
            }
        }
        Problem::Sched2 => {
            let y1 = args.y.ok_or_else(|| usage("--y is required for problem `sched2`"))?;
            let y2s = match args.y2 {
                Some(y2) => vec![y2],
                None => (0..args.grid)
                    .map(|k| y1 * (1.0 + 9.0 * k as f64 / (args.grid.max(2) - 1) as f64))
                    .collect(),
            };
            for y2 in y2s {
                let pred = JobPairPrediction::new(y1, y2).map_err(|e| usage(e.to_string()))?;
                let m = sched2_metrics(a, &pred)?;
                records.push(record(y1, m, &format!(";y2={y2}")));
            }
        }
    }
    emit(&records, &args.output)?;
    Ok(format!("eval: {} record(s) for {}/{}", records.len(), a.problem, a.algorithm))
}

#[derive(Serialize)]
struct FrontierRow {
    problem: String,
    prediction: f64,
    kind: String,
    value: f64,
    consistency: f64,
    robustness: f64,
    on_front: bool,
    params: String,
}

fn cmd_frontier(args: &FrontierArgs) -> Result<String> {
    let a = &args.alg;
    if args.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let params = param_string(&algorithm_params(a));
    // Closed-form points are compared with a tight margin; LP points with the
    // solver's tolerance.
    let (scan, point, tol): (FrontierScan, MetricsPair, f64) = match a.problem {
        Problem::Dsr => {
            let cfg = dsr_config(a)?;
            let y = integer_prediction(args.y)?;
            let m = dsr_decision(a, y, &cfg)?;
            (dsr_frontier(y, &cfg)?, dsr_metrics_sweep(m, y, &cfg), 1e-9)
        }
        Problem::Rsr => {
            let cfg = dsr_config(a)?;
            let y = integer_prediction(args.y)?;
            let pi = rsr_distribution(a, y, &cfg)?;
            let lo = gamma_xi(&cfg);
            if !(args.gamma_max > lo) {
                return Err(usage(format!("--gamma-max must exceed {lo}")));
            }
            let n = args.grid;
            let grid: Vec<f64> = (0..n)
                .map(|k| lo + (args.gamma_max - lo) * k as f64 / (n - 1) as f64)
                .collect();
            (rsr_frontier(y, &cfg, &grid)?, rsr_metrics_sweep(&pi, y, &cfg), 1e-6)
        }
        Problem::Oms => {
            let cfg = oms_config(a)?;
            if !(args.y >= cfg.lower() && args.y <= cfg.upper()) {
                return Err(usage(format!("--y must lie in [L, U], got {}", args.y)));
            }
            let phi = oms_phi(a, args.y, &cfg)?;
            let scan = oms_frontier(args.y, &cfg, args.grid, &[phi], a.eps)?;
            let point = match a.eps {
                Some(e) => oms_eps_metrics_sweep(phi, args.y, e, &cfg, FRONTIER_X_GRID),
                None => oms_metrics_sweep(phi, args.y, &cfg, FRONTIER_X_GRID),
            };
            (scan, point, 1e-9)
        }
        Problem::Sched2 => {
            return Err(usage("frontier supports problems dsr, rsr and oms"));
        }
    };
    let on_front = verify_nondominated(&point, &scan, tol);
    let report = FrontierJson::new(
        &a.problem.to_string(),
        params.clone(),
        &scan,
        Some(AlgorithmPointJson {
            name: a.algorithm.clone(),
            consistency: point.consistency,
            robustness: point.robustness,
            on_front,
        }),
    );
    let mut out = open_output(&args.output)?;
    match args.output.output {
        OutputFormat::Json => {
            serde_json::to_writer(&mut out, &report)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
        OutputFormat::Csv => {
            let mut rows: Vec<FrontierRow> = report
                .points
                .iter()
                .map(|p| FrontierRow {
                    problem: report.problem.clone(),
                    prediction: report.prediction,
                    kind: p.decision.kind.to_string(),
                    value: p.decision.value,
                    consistency: p.consistency,
                    robustness: p.robustness,
                    on_front: p.on_front,
                    params: params.clone(),
                })
                .collect();
            rows.push(FrontierRow {
                problem: report.problem.clone(),
                prediction: report.prediction,
                kind: format!("algorithm:{}", a.algorithm),
                value: f64::NAN,
                consistency: point.consistency,
                robustness: point.robustness,
                on_front,
                params: params.clone(),
            });
            write_records(&rows, OutputFormat::Csv, out)?;
        }
    }
    Ok(format!(
        "frontier: {} point(s), {} on the front; {} at ({}, {}) is {}",
        scan.points.len(),
        scan.front.len(),
        a.algorithm,
        point.consistency,
        point.robustness,
        if on_front { "non-dominated" } else { "dominated" }
    ))
}

fn cmd_ski(args: &SkiArgs) -> Result<String> {
    let mut records = Vec::new();
    let mut summary = Vec::new();
    for &p in &args.p {
        let cfg = SyntheticSkiConfig {
            b: args.b,
            x_max_multiplier: args.x_max_multiplier,
            p,
            sigma: args.sigma,
            trials: args.trials,
            seed: args.seed,
        };
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        let params = param_string(&[
            ("b", args.b.to_string()),
            ("x_max_multiplier", args.x_max_multiplier.to_string()),
            ("p", p.to_string()),
            ("sigma", args.sigma.to_string()),
            ("trials", args.trials.to_string()),
            ("seed", args.seed.to_string()),
            ("lambda", args.lambda.to_string()),
            ("kr_lambda", args.kr_lambda.to_string()),
            ("gamma_bar", args.gamma_bar.to_string()),
        ]);
        let instances = gen_synthetic_ski(&cfg)?;
        let algs = ski_algorithms(args.lambda, args.kr_lambda, args.gamma_bar);
        for r in run_ski_experiment(&instances, &algs, &cfg)? {
            summary.push(format!("{}@p={p}: {:.4}", r.algorithm, r.mean_cr));
            records.push(Record {
                experiment: "ski-synthetic".into(),
                algorithm: r.algorithm.to_string(),
                param: "p".into(),
                x: p,
                y: r.mean_cr,
                params: format!("{params};std_err={}", r.std_err),
            });
        }
    }
    emit(&records, &args.output)?;
    Ok(format!("ski-synthetic: {}", summary.join(", ")))
}

fn cmd_dpm(args: &DpmArgs) -> Result<String> {
    if args.base_price < 2 {
        return Err(usage(format!("--base-price must be at least 2, got {}", args.base_price)));
    }
    if !(args.scale > 0.0 && args.scale.is_finite()) {
        return Err(usage(format!("--scale must be positive, got {}", args.scale)));
    }
    if !(args.sigma >= 0.0 && args.sigma.is_finite()) {
        return Err(usage(format!("--sigma must be non-negative, got {}", args.sigma)));
    }
    if args.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    require_file(&args.trace)?;
    let intervals = load_idle_intervals(&args.trace, args.scale)?;
    let table = match &args.states {
        Some(path) => {
            require_file(path)?;
            load_state_table(path)?
        }
        None => PowerStateTable::new(vec![
            PowerState { rate: 1.0, wake_cost: 0.0 },
            PowerState { rate: 0.0, wake_cost: args.base_price as f64 },
        ])?,
    };
    let cfg = DpmConfig {
        base_price: args.base_price,
        sigma: args.sigma,
        samples: args.samples,
        seed: args.seed,
    };
    let policies = [
        DpmPolicy::Karlin,
        DpmPolicy::Kr { lambda: args.kr_lambda },
        DpmPolicy::Prsr { gamma_bar: args.gamma_bar },
    ];
    let params = param_string(&[
        ("trace", args.trace.display().to_string()),
        ("scale", args.scale.to_string()),
        (
            "states",
            args.states.as_ref().map_or("two-state".into(), |p| p.display().to_string()),
        ),
        ("base_price", args.base_price.to_string()),
        ("sigma", args.sigma.to_string()),
        ("samples", args.samples.to_string()),
        ("seed", args.seed.to_string()),
        ("kr_lambda", args.kr_lambda.to_string()),
        ("gamma_bar", args.gamma_bar.to_string()),
    ]);
    let results = run_dpm(&intervals, &table, &policies, &cfg)?;
    let mut records = Vec::new();
    for r in &results {
        for (experiment, value) in [("dpm", r.mean_cr), ("dpm-aggregate", r.aggregate_cr)] {
            records.push(Record {
                experiment: experiment.into(),
                algorithm: r.policy.to_string(),
                param: "sigma".into(),
                x: args.sigma,
                y: value,
                params: params.clone(),
            });
        }
    }
    emit(&records, &args.output)?;
    let summary: Vec<String> =
        results.iter().map(|r| format!("{}: {:.4}", r.policy, r.mean_cr)).collect();
    Ok(format!("dpm: {} interval(s); mean CR {}", intervals.len(), summary.join(", ")))
}

fn cmd_vix(args: &VixArgs) -> Result<String> {
    for &e in &args.error_level {
        if !(0.0..=1.0).contains(&e) {
            return Err(usage(format!("--error-level must be in [0, 1], got {e}")));
        }
    }
    require_file(&args.data)?;
    let data = load_vix_csv(&args.data)?;
    let algs = vix_algorithms(args.lambda, args.eps);
    let mut records = Vec::new();
    let mut summary = Vec::new();
    for &e in &args.error_level {
        let series = run_vix(&data, &algs, &VixRunConfig { error_level: e, lead_in: args.lead_in })?;
        let params = param_string(&[
            ("data", args.data.display().to_string()),
            ("error_level", e.to_string()),
            ("lambda", args.lambda.to_string()),
            ("eps", args.eps.to_string()),
            ("lead_in", args.lead_in.to_string()),
            ("L", data.lower.to_string()),
            ("U", data.upper.to_string()),
        ]);
        for s in &series {
            summary.push(format!("{}@e={e}: {:.4}", s.algorithm, s.final_ratio()));
            for (i, (month, ratio)) in s.cumulative.iter().enumerate() {
                records.push(Record {
                    experiment: "vix".into(),
                    algorithm: s.algorithm.to_string(),
                    param: "round".into(),
                    x: (i + 1) as f64,
                    y: *ratio,
                    params: format!("{params};month={month}"),
                });
            }
        }
    }
    emit(&records, &args.output)?;
    Ok(format!("vix: {} round(s); final ratios {}", data.rounds.len(), summary.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_grid_covers_range() {
        let g = integer_grid(100, 200);
        assert_eq!(g.first(), Some(&1));
        assert_eq!(g.last(), Some(&300));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(integer_grid(100, 1000).len(), 300);
    }

    #[test]
    fn price_grid_is_interior() {
        let cfg = OmsConfig::new(10.0, 20.0).unwrap();
        let g = price_grid(&cfg, 200);
        assert_eq!(g.len(), 200);
        assert!(g.iter().all(|&y| y > 10.0 && y < 20.0));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&usage("x")), 2);
        let core: anyhow::Error = predspec_core::dsr::pdsr_decision(
            5,
            &DsrConfig::new(10).unwrap(),
            2.0,
        )
        .unwrap_err()
        .into();
        assert_eq!(exit_code(&core), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("file missing")), 1);
    }
}
