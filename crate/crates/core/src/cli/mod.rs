//! Command-line front end: `simulate`, `eval`, `experiment`, `list-experiments`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or parameter error, 3 numeric failure.

pub mod config;
pub mod experiments;

use crate::analytic::{
    ccdf_annulus_metric, ccdf_gamma_opt, cdf_gamma_c2d, cdf_gamma_mid, cdf_gamma_opt, cdf_gamma_opt_diff,
    cdf_gamma_opt_finite, cdf_s_opt, mean_gamma_opt, pdf_gamma_c2d, pdf_gamma_mid, pdf_gamma_opt, pdf_s_opt,
    prob_mid_optimal, prob_sufficient, DistributionEvaluator, Law,
};
use crate::error::Error;
use crate::metrics::{
    average_rate, average_rate_feedback, mean_feedback_load, outage, outage_feedback, outage_for_law,
    prob_any_feedback, rate_upper_bound_midpoint, s_star, threshold_for_load, OutageRegime,
};
use crate::model::{snr_from_db, FadingModel, LinkBudget, NetworkGeometry, PathLossModel};
use crate::montecarlo::{run_trials, run_trials_parallel, TrialConfig};
use crate::numerics::{exp_integral_e1, f_exp_e1};
use crate::policy::PolicyKind;
use crate::process::{default_tau, ProcessSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{ExperimentConfig, EXPERIMENTS};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(Error::Parameter(_) | Error::Unsupported(_) | Error::EmptyField) => 2,
            CliError::Lib(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "optrelay", version, about = "Optimum relay selection over random relay fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a Monte Carlo batch and write one CSV row per trial.
    Simulate(SimulateArgs),
    /// Evaluate one analytic quantity and print it with 12 significant digits.
    Eval(EvalArgs),
    /// Run a named experiment and write its CSV.
    Experiment(ExperimentArgs),
    /// List the named experiments.
    ListExperiments,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fading {
    None,
    Rayleigh,
}

impl From<Fading> for FadingModel {
    fn from(f: Fading) -> Self {
        match f {
            Fading::None => FadingModel::NoFading,
            Fading::Rayleigh => FadingModel::RayleighUnitPower,
        }
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Window radius; defaults to max(6d, 6/sqrt(lambda)).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated: opt, mid, c2d, c2s, fb:<T>, optdiff.
    #[arg(long, default_value = "opt,mid,c2d")]
    pub policies: String,
    #[arg(long, default_value_t = 5.0)]
    pub snr_db: f64,
    /// Source-relay SNR for optdiff; defaults to --snr-db.
    #[arg(long)]
    pub snr1_db: Option<f64>,
    /// Relay-destination SNR for optdiff; defaults to --snr-db.
    #[arg(long)]
    pub snr2_db: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Output file; standard output when omitted or "-".
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run trials on all cores. Output is identical.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// Quantity name; `eval list` prints the set.
    pub quantity: String,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "T", alias = "t-threshold")]
    pub t: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    pub snr_db: f64,
    #[arg(long)]
    pub snr1_db: Option<f64>,
    #[arg(long)]
    pub snr2_db: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Fading::None)]
    pub fading: Fading,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub psi: Option<f64>,
    /// Metric level for ccdf-annulus.
    #[arg(long)]
    pub level: Option<f64>,
    /// SNR factor for cdf-s-opt and pdf-s-opt.
    #[arg(long)]
    pub s: Option<f64>,
    /// Feedback load for threshold-for-load.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Argument of e1 and f-e1.
    #[arg(long)]
    pub x: Option<f64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ExperimentArgs {
    pub name: String,
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; defaults to $OPTRELAY_OUT_DIR or ".".
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lambdas: Option<String>,
    #[arg(long)]
    pub ds: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub rhos: Option<String>,
    #[arg(long)]
    pub ts: Option<String>,
    #[arg(long)]
    pub taus: Option<String>,
    #[arg(long)]
    pub psis: Option<String>,
    #[arg(long)]
    pub snr_pairs_db: Option<String>,
    #[arg(long)]
    pub mu_target: Option<f64>,
    #[arg(long)]
    pub sweep_lambda: Option<f64>,
    /// Run trials sequentially.
    #[arg(long)]
    pub sequential: bool,
    /// Validate and print the planned grid without computing.
    #[arg(long)]
    pub dry_run: bool,
}

/// Quantities understood by `eval`, with their parameters.
pub const QUANTITIES: [(&str, &str); 31] = [
    ("cdf-gamma-opt", "--gamma"),
    ("ccdf-gamma-opt", "--gamma"),
    ("pdf-gamma-opt", "--gamma"),
    ("mean-gamma-opt", ""),
    ("cdf-gamma-opt-finite", "--gamma --tau"),
    ("cdf-gamma-mid", "--gamma"),
    ("pdf-gamma-mid", "--gamma"),
    ("cdf-gamma-c2d", "--gamma"),
    ("pdf-gamma-c2d", "--gamma"),
    ("cdf-gamma-opt-diff", "--gamma --snr1-db --snr2-db --alpha"),
    ("ccdf-annulus", "--level --psi --tau"),
    ("cdf-s-opt", "--s --snr-db --alpha"),
    ("pdf-s-opt", "--s --snr-db --alpha"),
    ("mu", "--T"),
    ("threshold-for-load", "--mu"),
    ("prob-any-feedback", "--T"),
    ("s-star", "--rho"),
    ("rate", "--snr-db --alpha --fading"),
    ("rate-mid", "--snr-db --alpha --fading"),
    ("rate-c2d", "--snr-db --alpha --fading"),
    ("rate-feedback", "--T --snr-db --alpha --fading"),
    ("rate-bound-mid", "--snr-db --alpha --fading"),
    ("outage", "--rho --snr-db --alpha --fading"),
    ("outage-mid", "--rho --snr-db --alpha --fading"),
    ("outage-c2d", "--rho --snr-db --alpha --fading"),
    ("outage-feedback", "--T --rho --snr-db --alpha --fading"),
    ("regime", "--T --rho --snr-db --alpha --fading"),
    ("prob-mid-opt", ""),
    ("prob-sufficient", ""),
    ("e1", "--x"),
    ("f-e1", "--x"),
];

/// `v` with 12 significant digits.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - e).max(0) as usize;
    format!("{v:.decimals$}")
}

fn need(v: Option<f64>, flag: &str, q: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("{q} needs {flag}")))
}

/// Evaluates one quantity; `regime` prints a label instead of a number.
pub fn eval(a: &EvalArgs) -> CliResult<String> {
    let q = a.quantity.as_str();
    let (l, d) = (a.lambda, a.d);
    NetworkGeometry::new(d)?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(CliError::Usage(format!("--lambda must be positive, got {l}")));
    }
    let snr = snr_from_db(a.snr_db);
    let g = PathLossModel::power_law(a.alpha)?;
    let fading: FadingModel = a.fading.into();
    let gamma = || need(a.gamma, "--gamma", q);
    let law = |law: Law| DistributionEvaluator::new(law, l, d);
    let v = match q {
        "list" => {
            let lines: Vec<String> = QUANTITIES.iter().map(|(n, p)| format!("{n} {p}").trim_end().to_string()).collect();
            return Ok(lines.join("\n"));
        }
        "cdf-gamma-opt" => cdf_gamma_opt(gamma()?, l, d),
        "ccdf-gamma-opt" => ccdf_gamma_opt(gamma()?, l, d),
        "pdf-gamma-opt" => pdf_gamma_opt(gamma()?, l, d),
        "mean-gamma-opt" => mean_gamma_opt(l, d)?,
        "cdf-gamma-opt-finite" => {
            let tau = need(a.tau, "--tau", q)?;
            law(Law::GammaOptFiniteDisc { tau })?;
            cdf_gamma_opt_finite(gamma()?, l, d, tau)
        }
        "cdf-gamma-mid" => cdf_gamma_mid(gamma()?, l, d)?,
        "pdf-gamma-mid" => pdf_gamma_mid(gamma()?, l, d)?,
        "cdf-gamma-c2d" => cdf_gamma_c2d(gamma()?, l, d)?,
        "pdf-gamma-c2d" => pdf_gamma_c2d(gamma()?, l, d)?,
        "cdf-gamma-opt-diff" => {
            let s1 = snr_from_db(need(a.snr1_db, "--snr1-db", q)?);
            let s2 = snr_from_db(need(a.snr2_db, "--snr2-db", q)?);
            let (e1, e2) = LinkBudget::new(snr, s1, s2, 0.0)?.effective_snrs(a.alpha);
            cdf_gamma_opt_diff(gamma()?, l, d, e1, e2)
        }
        "ccdf-annulus" => ccdf_annulus_metric(
            need(a.level, "--level", q)?,
            need(a.psi, "--psi", q)?,
            need(a.tau, "--tau", q)?,
            d,
        )?,
        "cdf-s-opt" => cdf_s_opt(need(a.s, "--s", q)?, l, d, snr, &g),
        "pdf-s-opt" => pdf_s_opt(need(a.s, "--s", q)?, l, d, snr, &g)?,
        "mu" => mean_feedback_load(need(a.t, "--T", q)?, l, d),
        "threshold-for-load" => threshold_for_load(need(a.mu, "--mu", q)?, l, d)?,
        "prob-any-feedback" => prob_any_feedback(need(a.t, "--T", q)?, l, d),
        "s-star" => s_star(need(a.rho, "--rho", q)?)?,
        "rate" => average_rate(&law(Law::GammaOpt)?, snr, &g, fading)?.value,
        "rate-mid" => average_rate(&law(Law::GammaMid)?, snr, &g, fading)?.value,
        "rate-c2d" => average_rate(&law(Law::GammaC2D)?, snr, &g, fading)?.value,
        "rate-feedback" => average_rate_feedback(need(a.t, "--T", q)?, l, d, snr, &g, fading)?.value,
        "rate-bound-mid" => rate_upper_bound_midpoint(l, d, snr, &g, fading)?.bound,
        "outage" => outage(need(a.rho, "--rho", q)?, l, d, snr, &g, fading)?,
        "outage-mid" => outage_for_law(&law(Law::GammaMid)?, need(a.rho, "--rho", q)?, snr, &g, fading)?,
        "outage-c2d" => outage_for_law(&law(Law::GammaC2D)?, need(a.rho, "--rho", q)?, snr, &g, fading)?,
        "outage-feedback" | "regime" => {
            let (p, regime) = outage_feedback(need(a.t, "--T", q)?, need(a.rho, "--rho", q)?, l, d, snr, &g, fading)?;
            if q == "regime" {
                return Ok(match regime {
                    OutageRegime::FeedbackLimited => "feedback-limited",
                    OutageRegime::RateLimited => "rate-limited",
                    OutageRegime::AlwaysOutage => "always-outage",
                }
                .to_string());
            }
            p
        }
        "prob-mid-opt" => prob_mid_optimal(l, d)?,
        "prob-sufficient" => prob_sufficient(l, d),
        "e1" => exp_integral_e1(need(a.x, "--x", q)?)?,
        "f-e1" => f_exp_e1(need(a.x, "--x", q)?)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown quantity '{other}'; run `optrelay eval list` for the set"
            )))
        }
    };
    Ok(format_sig(v))
}

fn parse_policies(s: &str, alpha: f64) -> CliResult<Vec<PolicyKind>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| match p {
            "opt" => Ok(PolicyKind::Optimum),
            "mid" => Ok(PolicyKind::MidPoint),
            "c2d" => Ok(PolicyKind::ClosestToDestination),
            "c2s" => Ok(PolicyKind::ClosestToSource),
            "optdiff" => Ok(PolicyKind::OptimumDiffSnr { alpha }),
            other => match other.strip_prefix("fb:").map(str::parse::<f64>) {
                Some(Ok(t)) => Ok(PolicyKind::ThresholdFeedback(t)),
                _ => Err(CliError::Usage(format!("unknown policy '{other}'"))),
            },
        })
        .collect()
}

/// Writes `f`'s output to `path` via a temporary sibling, removing it on failure.
pub fn write_atomic<F>(path: &Path, f: F) -> CliResult<()>
where
    F: FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>,
{
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = PathBuf::from(tmp);
    let res = (|| {
        let mut w = io::BufWriter::new(fs::File::create(&tmp)?);
        f(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}

fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let geom = NetworkGeometry::new(a.d)?;
    let spec = ProcessSpec::Hppp { lambda: a.lambda, tau: a.tau.unwrap_or_else(|| default_tau(a.lambda, a.d)) };
    let snr = snr_from_db(a.snr_db);
    let budget = LinkBudget::new(
        snr,
        snr_from_db(a.snr1_db.unwrap_or(a.snr_db)),
        snr_from_db(a.snr2_db.unwrap_or(a.snr_db)),
        0.0,
    )?;
    let policies = parse_policies(&a.policies, a.alpha)?;
    if policies.is_empty() {
        return Err(CliError::Usage("--policies is empty".into()));
    }
    let cfg = TrialConfig { spec, geom, budget, policies };
    let batch = if a.parallel { run_trials_parallel(&cfg, a.trials, a.seed)? } else { run_trials(&cfg, a.trials, a.seed)? };
    match &a.out {
        Some(p) if p.as_os_str() != "-" => write_atomic(p, |w| batch.write_csv(w)),
        _ => quiet_pipe(batch.write_csv(io::stdout().lock())),
    }
}

/// Builds the effective experiment configuration: defaults, then file, then flags.
pub fn experiment_config(a: &ExperimentArgs) -> CliResult<ExperimentConfig> {
    let mut c = ExperimentConfig::defaults(&a.name).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(p) = &a.config {
        let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
        c.apply_text(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let mut set = |k: &str, v: Option<String>| -> CliResult<()> {
        if let Some(v) = v {
            c.set(k, &v).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(())
    };
    let s = |v: Option<f64>| v.map(|x| x.to_string());
    set("lambdas", a.lambdas.clone())?;
    set("ds", a.ds.clone())?;
    set("alpha", s(a.alpha))?;
    set("snr_db", s(a.snr_db))?;
    set("rho", s(a.rho))?;
    set("rhos", a.rhos.clone())?;
    set("ts", a.ts.clone())?;
    set("taus", a.taus.clone())?;
    set("psis", a.psis.clone())?;
    set("snr_pairs_db", a.snr_pairs_db.clone())?;
    set("mu_target", s(a.mu_target))?;
    set("sweep_lambda", s(a.sweep_lambda))?;
    set("n_trials", a.trials.map(|x| x.to_string()))?;
    set("seed", a.seed.map(|x| x.to_string()))?;
    if a.sequential {
        set("parallel", Some("false".into()))?;
    }
    if let Some(o) = &a.out_dir {
        c.out_dir = o.clone();
    }
    c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(c)
}

/// Runs an experiment and returns the written CSV path.
pub fn run_experiment(c: &ExperimentConfig) -> CliResult<PathBuf> {
    let rows = experiments::compute(c)?;
    fs::create_dir_all(&c.out_dir)?;
    let path = c.out_dir.join(format!("{}.csv", c.name));
    write_atomic(&path, |w| experiments::write_rows(&rows, w))?;
    Ok(path)
}

/// A closed downstream pipe (`| head`) ends output quietly.
fn quiet_pipe(r: io::Result<()>) -> CliResult<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    quiet_pipe(out.write_all(text.as_bytes()).and_then(|_| out.flush()))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Eval(a) => {
            emit(&format!("{}\n", eval(&a)?))
        }
        Command::Experiment(a) => {
            let c = experiment_config(&a)?;
            if a.dry_run {
                return emit(&c.describe());
            }
            let path = run_experiment(&c)?;
            emit(&format!("{}\n", path.display()))
        }
        Command::ListExperiments => {
            let text: String = EXPERIMENTS.iter().map(|(name, what)| format!("{name:<22}{what}\n")).collect();
            emit(&text)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use config::parse_list;

    fn eval_str(args: &[&str]) -> CliResult<String> {
        let mut full = vec!["optrelay", "eval"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Eval(a) => eval(&a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn eval_examples() {
        let mu: f64 = eval_str(&["mu", "--lambda", "1", "--d", "1", "--T", "2"]).unwrap().parse().unwrap();
        assert!((mu - 4.91348).abs() < 5e-6);
        assert!(eval_str(&["s-star", "--rho", "0.3", "--snr-db", "5"]).unwrap().starts_with("0.6022"));
        assert_eq!(eval_str(&["cdf-gamma-opt", "--gamma", "0.5", "--d", "1"]).unwrap(), "0");
        assert_eq!(eval_str(&["regime", "--T", "2", "--rho", "0.3", "--fading", "rayleigh"]).unwrap(), "rate-limited");
    }

    #[test]
    fn eval_errors() {
        assert_eq!(eval_str(&["nope"]).unwrap_err().exit_code(), 2);
        assert_eq!(eval_str(&["mu"]).unwrap_err().exit_code(), 2);
        assert_eq!(eval_str(&["mu", "--T", "2", "--d", "-1"]).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sig_digits() {
        assert_eq!(format_sig(4.913483), "4.91348300000");
        assert_eq!(format_sig(0.6022), "0.602200000000");
        assert_eq!(format_sig(1234.5), "1234.50000000");
        assert_eq!(format_sig(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn policies_parse() {
        let p = parse_policies("opt, fb:1.5,optdiff", 4.0).unwrap();
        assert_eq!(p[1], PolicyKind::ThresholdFeedback(1.5));
        assert!(parse_policies("fb:x", 4.0).is_err());
    }

    #[test]
    fn list_helper_used() {
        assert_eq!(parse_list("k", "1,2").unwrap(), vec![1.0, 2.0]);
    }
}
