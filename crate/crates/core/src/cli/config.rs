//! Experiment configuration: flat `key = value` files plus flag overrides.
//!
//! Schema (lists are comma separated, `#` starts a comment):
//!
//! | key            | type        | meaning                                        |
//! |----------------|-------------|------------------------------------------------|
//! | `experiment`   | name        | one of [`EXPERIMENTS`]                         |
//! | `lambdas`      | list        | relay intensities                              |
//! | `ds`           | list        | half source-destination separations            |
//! | `alpha`        | real        | path-loss exponent                             |
//! | `snr_db`       | real        | transmit SNR in dB                             |
//! | `rho`          | real        | target rate for fixed-ρ sweeps                 |
//! | `rhos`         | list        | target rates for ρ sweeps                      |
//! | `ts`           | list        | feedback thresholds                            |
//! | `taus`         | list        | window or annulus outer radii                  |
//! | `psis`         | list        | annulus inner radii                            |
//! | `snr_pairs_db` | list of a:b | (source-relay, relay-destination) SNRs in dB   |
//! | `mu_target`    | real        | feedback load for `fixed-load`                 |
//! | `sweep_lambda` | real        | intensity used by ρ sweeps                     |
//! | `n_trials`     | integer     | Monte Carlo trials (samples for annulus-ccdf)  |
//! | `seed`         | integer     | master seed                                    |
//! | `out_dir`      | path        | output directory                               |
//! | `parallel`     | bool        | run trials on all cores (same output)          |

use crate::error::{param, Result};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "OPTRELAY_OUT_DIR";

pub const EXPERIMENTS: [(&str, &str); 10] = [
    ("midpoint-optimality", "P(sufficient condition) and P(mid = opt) against lambda"),
    ("finite-convergence", "cdf of the optimum CQI on finite discs against the limit law"),
    ("nfb-distribution", "distribution of the number of reporting relays"),
    ("feedback-load", "mean feedback load and P(at least one report) against T"),
    ("outage-and-rate", "outage and average rate of opt, mid and c2d against lambda"),
    ("rate-feedback", "average rate with threshold feedback against lambda"),
    ("outage-feedback", "outage with threshold feedback against lambda and rho"),
    ("fixed-load", "rate and outage with the threshold set for a fixed feedback load"),
    ("annulus-ccdf", "ccdf of the metric of a uniform point on an annulus"),
    ("diff-snr-cdf", "cdf of the optimum CQI with unequal hop SNRs"),
];

pub const DEFAULT_LAMBDAS: [f64; 8] = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub lambdas: Vec<f64>,
    pub ds: Vec<f64>,
    pub alpha: f64,
    pub snr_db: f64,
    pub rho: f64,
    pub rhos: Vec<f64>,
    pub ts: Vec<f64>,
    pub taus: Vec<f64>,
    pub psis: Vec<f64>,
    pub snr_pairs_db: Vec<(f64, f64)>,
    pub mu_target: f64,
    pub sweep_lambda: f64,
    pub n_trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

fn range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| ((lo + step * i as f64) * 1e9).round() / 1e9).collect()
}

impl ExperimentConfig {
    /// Defaults for a named experiment; unknown names are a usage error.
    pub fn defaults(name: &str) -> Result<Self> {
        if !EXPERIMENTS.iter().any(|(n, _)| *n == name) {
            return param(format!("unknown experiment '{name}'"));
        }
        let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        let mut c = ExperimentConfig {
            name: name.to_string(),
            lambdas: DEFAULT_LAMBDAS.to_vec(),
            ds: vec![1.0],
            alpha: 4.0,
            snr_db: 5.0,
            rho: 0.5,
            rhos: range(0.1, 1.0, 0.1),
            ts: vec![1.1, 1.25, 1.5, 2.0],
            taus: vec![1.0, 1.5, 2.0, 3.0, 5.0],
            psis: vec![2.0, 5.0],
            snr_pairs_db: vec![(5.0, 5.0), (5.0, 10.0), (10.0, 5.0), (10.0, 10.0)],
            mu_target: 5.0,
            sweep_lambda: 2.0,
            n_trials: 10_000,
            seed: 1,
            out_dir,
            parallel: true,
        };
        match name {
            "midpoint-optimality" => c.ds = vec![0.5, 1.0, 2.0],
            "finite-convergence" => c.lambdas = vec![1.0],
            "nfb-distribution" => {
                c.lambdas = vec![0.5, 1.0];
                c.ts = vec![3.0];
            }
            "feedback-load" => {
                c.lambdas = vec![0.5, 1.0, 2.0, 4.0];
                c.ts = range(1.0, 3.0, 0.1);
            }
            "outage-feedback" => c.rho = 0.3,
            "annulus-ccdf" => {
                c.taus = vec![10.0, 20.0];
                c.n_trials = 100_000;
            }
            "diff-snr-cdf" => {
                c.lambdas = vec![1.0];
                c.ds = vec![0.5];
            }
            _ => {}
        }
        Ok(c)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "experiment" => {
                if v != self.name {
                    return param(format!("config is for experiment '{v}', not '{}'", self.name));
                }
            }
            "lambdas" => self.lambdas = parse_list(key, v)?,
            "ds" | "d" => self.ds = parse_list(key, v)?,
            "alpha" => self.alpha = parse_num(key, v)?,
            "snr_db" => self.snr_db = parse_num(key, v)?,
            "rho" => self.rho = parse_num(key, v)?,
            "rhos" => self.rhos = parse_list(key, v)?,
            "ts" => self.ts = parse_list(key, v)?,
            "taus" => self.taus = parse_list(key, v)?,
            "psis" => self.psis = parse_list(key, v)?,
            "snr_pairs_db" => self.snr_pairs_db = parse_pairs(key, v)?,
            "mu_target" => self.mu_target = parse_num(key, v)?,
            "sweep_lambda" => self.sweep_lambda = parse_num(key, v)?,
            "n_trials" => {
                self.n_trials = v.parse().or_else(|_| param(format!("{key}: expected an integer, got '{v}'")))?
            }
            "seed" => self.seed = v.parse().or_else(|_| param(format!("{key}: expected an integer, got '{v}'")))?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "parallel" => {
                self.parallel = v.parse().or_else(|_| param(format!("{key}: expected true or false, got '{v}'")))?
            }
            other => return param(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    /// Applies every `key = value` line of a config file.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return param(format!("line {}: expected key = value", no + 1));
            };
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, xs: &[f64]| -> Result<()> {
            if xs.is_empty() {
                return param(format!("{name} must not be empty"));
            }
            match xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                Some(x) => param(format!("{name} entries must be positive, got {x}")),
                None => Ok(()),
            }
        };
        positive("lambdas", &self.lambdas)?;
        positive("ds", &self.ds)?;
        positive("taus", &self.taus)?;
        positive("psis", &self.psis)?;
        positive("ts", &self.ts)?;
        positive("alpha", &[self.alpha])?;
        positive("sweep_lambda", &[self.sweep_lambda])?;
        if self.rhos.is_empty() || self.rhos.iter().any(|r| !(*r >= 0.0)) || !(self.rho >= 0.0) {
            return param("target rates must be non-negative and rhos non-empty");
        }
        if self.snr_pairs_db.is_empty() {
            return param("snr_pairs_db must not be empty");
        }
        if !(self.mu_target > 0.0) {
            return param("mu_target must be positive");
        }
        if self.n_trials == 0 {
            return param("n_trials must be at least 1");
        }
        if !self.snr_db.is_finite() {
            return param("snr_db must be finite");
        }
        let d_max = self.ds.iter().cloned().fold(0.0, f64::max);
        if self.name.contains("feedback") || self.name == "nfb-distribution" {
            if let Some(t) = self.ts.iter().find(|t| **t < d_max) {
                return param(format!("thresholds must satisfy T >= d, got T={t}"));
            }
        }
        if self.name == "annulus-ccdf" {
            for &tau in &self.taus {
                for &psi in &self.psis {
                    if !(psi + d_max <= tau) {
                        return param(format!("annulus needs psi + d <= tau, got psi={psi}, tau={tau}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable grid summary for `--dry-run`.
    pub fn describe(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {}", self.name);
        let _ = writeln!(s, "lambdas = {}", list(&self.lambdas));
        let _ = writeln!(s, "ds = {}", list(&self.ds));
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "snr_db = {}", self.snr_db);
        let _ = writeln!(s, "rho = {}", self.rho);
        let _ = writeln!(s, "rhos = {}", list(&self.rhos));
        let _ = writeln!(s, "ts = {}", list(&self.ts));
        let _ = writeln!(s, "taus = {}", list(&self.taus));
        let _ = writeln!(s, "psis = {}", list(&self.psis));
        let pairs: Vec<String> = self.snr_pairs_db.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        let _ = writeln!(s, "snr_pairs_db = {}", pairs.join(","));
        let _ = writeln!(s, "mu_target = {}", self.mu_target);
        let _ = writeln!(s, "sweep_lambda = {}", self.sweep_lambda);
        let _ = writeln!(s, "n_trials = {}", self.n_trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(s, "parallel = {}", self.parallel);
        s
    }
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().or_else(|_| param(format!("{key}: expected a number, got '{v}'")))
}

pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s.trim())).collect()
}

fn parse_pairs(key: &str, v: &str) -> Result<Vec<(f64, f64)>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.split_once(':') {
            Some((a, b)) => Ok((parse_num(key, a.trim())?, parse_num(key, b.trim())?)),
            None => param(format!("{key}: expected a:b pairs, got '{s}'")),
        })
        .collect()
}
