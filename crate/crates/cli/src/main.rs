//! `sprecov`: bounds, validation suites and recovery simulations.
//!
//! Exit codes: 0 success, 1 a checked property failed (validate, regimes),
//! 2 domain error, 64 usage error.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sprecov_core::bounds::{
    self, compare_thm3_cor2, cor1_min_n, doubling_sequence, regime_scaling_check, thm1_min_n, thm3_min_n, wang_min_n,
    BoundResult, BoundStatus, RegimeReport, RegimeRow, Theorem, DEFAULT_SLACK,
};
use sprecov_core::recovery_sim::{parse_n_range, sha256_hex, sweep_n, ErrorMetric, ExperimentConfig, Sweep};
use sprecov_core::validate::{run_suite, Suite, ValidationReport};
use sprecov_core::{Error, SignalModel, SpectrumSummary};

const EXIT_PROPERTY: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;

const LOG_ENV: &str = "SPRECOV_LOG";
const DEFAULT_LOG: &str = "runs.jsonl";

#[derive(Parser, Debug)]
#[command(
    name = "sprecov",
    version,
    about = "Sample-complexity bounds and Monte Carlo checks for sparse support recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal number of measurements from a closed-form condition.
    Bounds(BoundsArgs),
    /// Run invariant suites.
    Validate(ValidateArgs),
    /// Estimate the error probability of the exhaustive decoder over a range of n.
    Simulate(SimulateArgs),
    /// Scaling of the relaxed sufficient condition along p = p_min, 2 p_min, ..., p_max.
    Regimes(RegimesArgs),
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "lambda-sq")]
    lambda_sq: Option<f64>,
    #[arg(long, default_value = "thm1", value_parser = ["thm1", "cor1", "wang", "thm3", "cor2"])]
    theorem: String,
    /// Spectrum constant for thm3.
    #[arg(long = "G", allow_negative_numbers = true)]
    g: Option<f64>,
    /// CSV with header `omega,S` (cor2; thm3 uses its infimum when --G is absent).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Fano additive constant in nats.
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug, Serialize)]
struct ValidateArgs {
    #[arg(long, default_value = "all", value_parser = ["wishart", "spectrum", "mi-bound", "all"])]
    suite: String,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MetricArg {
    Exact,
    Topk,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    k: usize,
    /// Unknown-support size (defaults to k: no side information).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "lambda-sq")]
    lambda_sq: f64,
    #[arg(long, default_value_t = 0.0)]
    xi: f64,
    /// `a:b` or `a:b:step`, inclusive.
    #[arg(long = "n-range")]
    n_range: String,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "exact")]
    metric: MetricArg,
    /// Curve CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run log (JSON lines); falls back to $SPRECOV_LOG, then ./runs.jsonl.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long = "enumeration-cap", default_value_t = sprecov_core::recovery_sim::DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: u64,
}

#[derive(Args, Debug, Serialize)]
struct RegimesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    row: u8,
    #[arg(long = "p-min")]
    p_min: usize,
    #[arg(long = "p-max")]
    p_max: usize,
    /// Ratio table CSV destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => Failure::usage(e.to_string()),
            other => Failure::domain(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::domain(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Regimes(a) => cmd_regimes(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn require_lambda_sq(a: &BoundsArgs) -> Result<SignalModel, Failure> {
    let l2 =
        a.lambda_sq.ok_or_else(|| Failure::usage(format!("--lambda-sq is required for --theorem {}", a.theorem)))?;
    Ok(SignalModel::worst_case(l2)?)
}

fn load_spectrum(path: &Path) -> Result<SpectrumSummary, Failure> {
    SpectrumSummary::load(path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn cmd_bounds(a: &BoundsArgs) -> CmdResult {
    let theorem: Theorem = a.theorem.parse()?;
    let mut note = None;
    let result = match theorem {
        Theorem::Thm1 => thm1_min_n(a.p, a.k, &require_lambda_sq(a)?, a.slack)?,
        Theorem::Cor1 => cor1_min_n(a.p, a.k, &require_lambda_sq(a)?, a.slack)?,
        Theorem::WangNecessary => wang_min_n(a.p, a.k, &require_lambda_sq(a)?, a.slack)?,
        Theorem::Thm3 => {
            let g = match (a.g, &a.spectrum) {
                (Some(g), _) => g,
                (None, Some(path)) => load_spectrum(path)?.g_inf,
                (None, None) => return Err(Failure::usage("--theorem thm3 needs --G or --spectrum")),
            };
            thm3_min_n(a.p, a.k, g, a.slack)?
        }
        Theorem::Cor2 => {
            let path = a.spectrum.as_ref().ok_or_else(|| Failure::usage("--theorem cor2 needs --spectrum"))?;
            let spec = load_spectrum(path)?;
            let cmp = compare_thm3_cor2(a.p, a.k, &spec, a.slack)?;
            note = Some(format!(
                "thm3 at spectrum infimum G={}: n_min = {}{}",
                cmp.thm3.g.unwrap_or(f64::NAN),
                fmt_n(cmp.thm3.n_min),
                if cmp.disagree { " (disagrees with log-average)" } else { "" }
            ));
            cmp.cor2
        }
    };
    let mut out = io::stdout().lock();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&result).expect("serializable"))?;
    } else if a.csv {
        writeln!(out, "{}", BoundResult::CSV_HEADER.join(","))?;
        writeln!(out, "{}", result.csv_record().join(","))?;
    } else {
        print_bound_table(&mut out, &result)?;
        if let Some(n) = note {
            writeln!(out, "{n}")?;
        }
    }
    match result.status {
        BoundStatus::Satisfied => Ok(0),
        BoundStatus::UnsatisfiableInDomain => {
            Err(Failure::domain(format!("{}: unsatisfiable for n in [1, p-1]", result.theorem)))
        }
        BoundStatus::InfiniteRequirement => {
            Err(Failure::domain(format!("{}: unsatisfiable (infinite requirement at zero SNR)", result.theorem)))
        }
    }
}

fn fmt_n(n: Option<usize>) -> String {
    n.map(|v| v.to_string()).unwrap_or_else(|| "none".into())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into())
}

fn print_bound_table(out: &mut impl Write, r: &BoundResult) -> io::Result<()> {
    writeln!(out, "theorem    {}", r.theorem)?;
    writeln!(out, "p          {}", r.p)?;
    writeln!(out, "k          {}", r.k)?;
    if let Some(l2) = r.lambda_sq {
        writeln!(out, "lambda_sq  {l2}")?;
    }
    if let Some(g) = r.g {
        writeln!(out, "G          {g}")?;
    }
    writeln!(out, "slack      {}", r.slack_constant)?;
    writeln!(out, "n_min      {}", fmt_n(r.n_min))?;
    writeln!(out, "status     {}", serde_json::to_value(r.status).expect("serializable").as_str().unwrap_or(""))?;
    match r.evaluated_n {
        Some(n) => writeln!(out, "\n  m  {:>14}  {:>14}  (at n = {n})", "lhs", "L")?,
        None => writeln!(out, "\n  m  {:>14}  {:>14}  {:>14}", "numerator", "denominator", "f_m")?,
    }
    for e in &r.per_m {
        let flag = if e.vacuous { "  vacuous" } else { "" };
        match e.f {
            Some(f) => writeln!(out, "{:>3}  {:>14.6}  {:>14}  {:>14.6}{flag}", e.m, e.lhs, fmt_opt(e.rhs), f)?,
            None => writeln!(out, "{:>3}  {:>14.6}  {:>14}{flag}", e.m, e.lhs, fmt_opt(e.rhs))?,
        }
    }
    Ok(())
}

fn cmd_validate(a: &ValidateArgs) -> CmdResult {
    let suite: Suite = a.suite.parse()?;
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let report = run_suite(suite, a.trials, a.seed)?;
    let mut out = io::stdout().lock();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
    } else {
        print_validation(&mut out, &report)?;
    }
    Ok(if report.all_passed { 0 } else { EXIT_PROPERTY })
}

fn print_validation(out: &mut impl Write, r: &ValidationReport) -> io::Result<()> {
    for c in &r.checks {
        let tag = match (c.asserted, c.passed) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        if c.asserted {
            writeln!(out, "{tag}  [{}] {}: {:.6e} (limit {:e})", c.suite, c.name, c.measured, c.tolerance)?;
        } else {
            writeln!(out, "{tag}  [{}] {}: {:.6e}", c.suite, c.name, c.measured)?;
        }
    }
    writeln!(out, "{}", if r.all_passed { "all asserted checks passed" } else { "some asserted checks FAILED" })
}

#[derive(Serialize)]
struct RunRecord<'a, P: Serialize> {
    timestamp: u64,
    subcommand: &'a str,
    parameters: &'a P,
    config_hash: String,
    output_digest: String,
}

fn log_path(explicit: Option<&PathBuf>) -> PathBuf {
    explicit
        .cloned()
        .or_else(|| std::env::var_os(LOG_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_LOG))
}

/// Append one JSON line under an exclusive file lock.
fn append_record<P: Serialize>(path: &Path, record: &RunRecord<'_, P>) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.lock()?;
    let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
    line.push('\n');
    let res = f.write_all(line.as_bytes()).and_then(|_| f.flush());
    f.unlock()?;
    res
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let n_values = parse_n_range(&a.n_range)?;
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    if a.lambda_sq.is_nan() || a.lambda_sq < 0.0 {
        return Err(Failure::domain(format!("lambda-sq must be non-negative, got {}", a.lambda_sq)));
    }
    let mut template = ExperimentConfig::new(a.p, a.k, n_values[0], a.lambda_sq.sqrt(), a.trials, a.seed);
    template.m = a.m.unwrap_or(a.k);
    template.xi = a.xi;
    template.enumeration_cap = a.enumeration_cap;
    template.error_metric = match a.metric {
        MetricArg::Exact => ErrorMetric::ExactSupport,
        MetricArg::Topk => ErrorMetric::TopK,
    };
    template.validate()?;

    let sweep = sweep_n(&template, &n_values, a.epsilon)?;
    let mut csv = Vec::new();
    sweep.write_csv(&mut csv)?;
    if let Some(path) = &a.out {
        File::create(path)?.write_all(&csv)?;
    }

    let sm = SignalModel::worst_case(a.lambda_sq)?;
    let theory = [
        ("cor1", cor1_min_n(a.p, a.k, &sm, DEFAULT_SLACK)?.n_min),
        ("wang", wang_min_n(a.p, a.k, &sm, DEFAULT_SLACK)?.n_min),
        ("thm1", thm1_min_n(a.p, a.k, &sm, DEFAULT_SLACK)?.n_min),
    ];
    let mut out = io::stdout().lock();
    print_sweep(&mut out, &sweep)?;
    writeln!(out, "n_star     {}", fmt_n(sweep.n_star))?;
    for (name, n) in theory {
        writeln!(out, "{name:<10} {}", fmt_n(n))?;
    }

    let record = RunRecord {
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        subcommand: "simulate",
        parameters: a,
        config_hash: template.hash(),
        output_digest: sha256_hex(&csv),
    };
    let path = log_path(a.log.as_ref());
    append_record(&path, &record).map_err(|e| Failure::domain(format!("run log {}: {e}", path.display())))?;
    Ok(0)
}

fn print_sweep(out: &mut impl Write, s: &Sweep) -> io::Result<()> {
    writeln!(out, "{:>5} {:>7} {:>8} {:>8} {:>8} {:>8}", "n", "trials", "failures", "p_err", "ci_low", "ci_high")?;
    for r in &s.curve {
        writeln!(
            out,
            "{:>5} {:>7} {:>8} {:>8.4} {:>8.4} {:>8.4}",
            r.config.n, r.trials, r.failures, r.p_err_hat, r.ci_low, r.ci_high
        )?;
    }
    if let Some(r) = s.curve.first() {
        writeln!(out, "seed       {}", r.master_seed)?;
    }
    Ok(())
}

fn write_regime_csv(w: impl Write, rep: &RegimeReport) -> io::Result<()> {
    let mut w = io::BufWriter::new(w);
    writeln!(w, "p,k,lambda_sq,n_min,growth,ratio")?;
    for pt in &rep.points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            pt.p,
            pt.k,
            pt.lambda_sq,
            pt.n_min.map(|n| n.to_string()).unwrap_or_default(),
            pt.growth,
            pt.ratio.map(|r| r.to_string()).unwrap_or_default()
        )?;
    }
    w.flush()
}

fn cmd_regimes(a: &RegimesArgs) -> CmdResult {
    if !a.p_min.is_power_of_two() || !a.p_max.is_power_of_two() || a.p_min < 4 || a.p_min > a.p_max {
        return Err(Failure::usage("--p-min and --p-max must be powers of two with 4 <= p-min <= p-max"));
    }
    let ps = doubling_sequence(a.p_min, a.p_max);
    if ps.len() < 4 {
        return Err(Failure::usage(format!("need at least 4 points, got {}", ps.len())));
    }
    let row = RegimeRow::from_index(a.row as usize)?;
    let rep = regime_scaling_check(row, &ps, a.slack)?;
    match &a.out {
        Some(path) => write_regime_csv(File::create(path)?, &rep)?,
        None => write_regime_csv(io::stdout().lock(), &rep)?,
    }
    let stability = rep.stability.unwrap_or(f64::INFINITY);
    eprintln!("row {}: stability {stability:.4} (limit {})", rep.row, bounds::REGIME_TOLERANCE);
    Ok(if rep.stable == Some(true) { 0 } else { EXIT_PROPERTY })
}
