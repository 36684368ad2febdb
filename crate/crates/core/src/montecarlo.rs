//! Trial batches and statistical comparison against the analytic laws.

use crate::analytic::DistributionEvaluator;
use crate::error::{param, Error, Result};
use crate::metrics::mean_feedback_load;
use crate::model::{LinkBudget, NetworkGeometry};
use crate::policy::{select, sufficient_condition_holds, PolicyKind};
use crate::process::{rng_for, sample_points, ProcessSpec};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub spec: ProcessSpec,
    pub geom: NetworkGeometry,
    pub budget: LinkBudget,
    pub policies: Vec<PolicyKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n_relays: usize,
    /// CQI per configured policy; `None` when nothing was selected.
    pub gammas: Vec<Option<f64>>,
    /// Reporters under the first threshold policy, else the number of relays.
    pub n_feedback: usize,
    pub sufficient: bool,
    pub mid_is_opt: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatch {
    pub config: TrialConfig,
    pub n_trials: usize,
    pub seed: u64,
    pub records: Vec<TrialRecord>,
}

fn run_one(config: &TrialConfig, seed: u64, index: u64) -> Result<TrialRecord> {
    let mut rng = rng_for(seed, index);
    let pts = sample_points(&config.spec, &mut rng)?;
    let (geom, budget) = (&config.geom, &config.budget);
    let mut gammas = Vec::with_capacity(config.policies.len());
    let mut n_feedback = None;
    for &kind in &config.policies {
        let out = match select(&pts, kind, geom, budget) {
            Ok(o) => o,
            Err(Error::EmptyField) => {
                gammas.push(None);
                continue;
            }
            Err(e) => return Err(e),
        };
        if matches!(kind, PolicyKind::ThresholdFeedback(_)) && n_feedback.is_none() {
            n_feedback = Some(out.n_feedback);
        }
        gammas.push(out.gamma);
    }
    let (sufficient, mid_is_opt) = if pts.is_empty() {
        (false, false)
    } else {
        let opt = select(&pts, PolicyKind::Optimum, geom, budget)?;
        let mid = select(&pts, PolicyKind::MidPoint, geom, budget)?;
        (sufficient_condition_holds(&pts, geom)?, opt.index == mid.index)
    };
    Ok(TrialRecord {
        n_relays: pts.len(),
        gammas,
        n_feedback: n_feedback.unwrap_or(pts.len()),
        sufficient,
        mid_is_opt,
    })
}

/// Runs `n_trials` independent trials; trial i draws from stream i of `seed`.
pub fn run_trials(config: &TrialConfig, n_trials: usize, seed: u64) -> Result<TrialBatch> {
    validate(config, n_trials)?;
    let records = (0..n_trials as u64)
        .map(|i| run_one(config, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialBatch { config: config.clone(), n_trials, seed, records })
}

/// Same output as [`run_trials`], computed on the rayon pool.
pub fn run_trials_parallel(config: &TrialConfig, n_trials: usize, seed: u64) -> Result<TrialBatch> {
    validate(config, n_trials)?;
    let records = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| run_one(config, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialBatch { config: config.clone(), n_trials, seed, records })
}

/// Applies `f` to `n` independent fields of `spec` (field i on stream i),
/// returning results in field order.
pub fn map_fields<T, F>(spec: &ProcessSpec, n: usize, seed: u64, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[crate::model::Point2]) -> Result<T> + Sync,
{
    spec.validate()?;
    let one = |i: u64| {
        let mut rng = rng_for(seed, i);
        f(&sample_points(spec, &mut rng)?)
    };
    if parallel {
        (0..n as u64).into_par_iter().map(one).collect()
    } else {
        (0..n as u64).map(one).collect()
    }
}

fn validate(config: &TrialConfig, n_trials: usize) -> Result<()> {
    if n_trials == 0 {
        return param("n_trials must be at least 1");
    }
    config.spec.validate()
}

/// Sample mean and its standard error.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Frequency of a binary event and its binomial standard error.
pub fn proportion(hits: usize, n: usize) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

impl TrialBatch {
    /// CQI samples of policy `k`; absent selections become +∞.
    pub fn gammas(&self, k: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.gammas[k].unwrap_or(f64::INFINITY)).collect()
    }

    pub fn feedback_counts(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.n_feedback).collect()
    }

    pub fn sufficient_fraction(&self) -> (f64, f64) {
        proportion(self.records.iter().filter(|r| r.sufficient).count(), self.n_trials)
    }

    pub fn mid_is_opt_fraction(&self) -> (f64, f64) {
        proportion(self.records.iter().filter(|r| r.mid_is_opt).count(), self.n_trials)
    }

    /// One row per trial.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "trial,n_relays,n_feedback,sufficient,mid_is_opt")?;
        for k in &self.config.policies {
            write!(w, ",gamma_{}", policy_label(k))?;
        }
        w.write_all(b"\n")?;
        for (i, r) in self.records.iter().enumerate() {
            write!(w, "{i},{},{},{},{}", r.n_relays, r.n_feedback, r.sufficient as u8, r.mid_is_opt as u8)?;
            for g in &r.gammas {
                match g {
                    Some(v) => write!(w, ",{v}")?,
                    None => w.write_all(b",")?,
                }
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn policy_label(k: &PolicyKind) -> String {
    match k {
        PolicyKind::Optimum => "opt".into(),
        PolicyKind::MidPoint => "mid".into(),
        PolicyKind::ClosestToDestination => "c2d".into(),
        PolicyKind::ClosestToSource => "c2s".into(),
        PolicyKind::ThresholdFeedback(t) => format!("fb{t}"),
        PolicyKind::OptimumDiffSnr { .. } => "optdiff".into(),
    }
}

/// Kolmogorov–Smirnov distance sup |F_n − F| over the sample range. Infinite
/// samples count as mass at +∞, which suits defective laws. Left limits are taken
/// one ulp below each jump, so step cdfs (an ecdf, say) are handled exactly.
pub fn ks_statistic<F: FnMut(f64) -> f64>(samples: &[f64], mut cdf: F) -> f64 {
    let mut xs: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    xs.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let left = cdf(xs[i].next_down());
        let right = cdf(xs[i]);
        d = d.max((left - i as f64 / n).abs()).max(((j + 1) as f64 / n - right).abs());
        i = j + 1;
    }
    d
}

/// Default KS acceptance threshold 1.63/√n (99% DKW band).
pub fn ks_threshold(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Empirical cdf at `x`.
pub fn ecdf(samples: &[f64], x: f64) -> f64 {
    samples.iter().filter(|&&s| s <= x).count() as f64 / samples.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub ks_statistic: f64,
    pub chi2_pvalue: Option<f64>,
    pub mean_abs_error: f64,
    /// (x, analytic, empirical)
    pub grid: Vec<(f64, f64, f64)>,
}

/// Compares the CQI of policy `policy` in `batch` with `law`. When that policy is
/// a threshold policy on an HPPP, the feedback counts are also tested against
/// Poisson(μ(T)) and the p-value is reported.
pub fn compare_to_analytic(batch: &TrialBatch, policy: usize, law: &DistributionEvaluator) -> Result<ComparisonReport> {
    let Some(&kind) = batch.config.policies.get(policy) else {
        return param(format!("batch has no policy {policy}"));
    };
    let mut report = compare_samples(&batch.gammas(policy), law)?;
    if let (PolicyKind::ThresholdFeedback(_), ProcessSpec::Hppp { lambda, .. }) = (kind, batch.config.spec) {
        // n_feedback tracks the first threshold policy of the batch.
        let t = batch
            .config
            .policies
            .iter()
            .find_map(|k| match k {
                PolicyKind::ThresholdFeedback(t) => Some(*t),
                _ => None,
            })
            .unwrap_or(f64::INFINITY);
        let mu = mean_feedback_load(t, lambda, batch.config.geom.d());
        report.chi2_pvalue = Some(chi2_poisson(&batch.feedback_counts(), mu)?.pvalue);
    }
    Ok(report)
}

/// KS comparison of CQI samples with `law`, plus a 50-point cdf grid.
pub fn compare_samples(samples: &[f64], law: &DistributionEvaluator) -> Result<ComparisonReport> {
    if samples.is_empty() {
        return param("cannot compare an empty batch");
    }
    let mut err = None;
    let ks = ks_statistic(samples, |x| {
        law.cdf(x).unwrap_or_else(|e| {
            err.get_or_insert(e);
            f64::NAN
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let lo = law.support_min();
    let hi = sorted.last().copied().unwrap_or(lo).max(lo);
    let n = samples.len() as f64;
    let mut grid = Vec::with_capacity(50);
    for i in 0..50 {
        let x = lo + (hi - lo) * i as f64 / 49.0;
        let emp = sorted.partition_point(|&s| s <= x) as f64 / n;
        grid.push((x, law.cdf(x)?, emp));
    }
    let mean_abs_error = grid.iter().map(|g| (g.1 - g.2).abs()).sum::<f64>() / grid.len() as f64;
    Ok(ComparisonReport { ks_statistic: ks, chi2_pvalue: None, mean_abs_error, grid })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub pvalue: f64,
}

/// χ² goodness of fit of counts against Poisson(μ). Bins with expected count
/// below 5 are merged; the last bin holds the upper tail.
pub fn chi2_poisson(counts: &[usize], mu: f64) -> Result<ChiSquareResult> {
    if counts.is_empty() {
        return param("no counts");
    }
    let n = counts.len() as f64;
    let max_k = *counts.iter().max().unwrap();
    // Poisson pmf by recurrence, extended until the tail is negligible.
    let mut pmf = vec![(-mu).exp()];
    while pmf.len() <= max_k || (pmf.len() as f64) < mu + 10.0 * mu.sqrt() + 10.0 {
        let k = pmf.len() as f64;
        pmf.push(pmf[pmf.len() - 1] * mu / k);
    }
    let mut observed = vec![0usize; pmf.len()];
    for &c in counts {
        observed[c] += 1;
    }
    // Left-to-right merge; bins: (expected, observed).
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut e_acc, mut o_acc) = (0.0, 0.0);
    let mut cum = 0.0;
    for k in 0..pmf.len() {
        cum += pmf[k];
        e_acc += n * pmf[k];
        o_acc += observed[k] as f64;
        if e_acc >= 5.0 {
            bins.push((e_acc, o_acc));
            e_acc = 0.0;
            o_acc = 0.0;
        }
    }
    // Remaining mass joins the open tail bin.
    e_acc += n * (1.0 - cum).max(0.0);
    if let Some(last) = bins.last_mut() {
        if e_acc < 5.0 {
            last.0 += e_acc;
            last.1 += o_acc;
        } else {
            bins.push((e_acc, o_acc));
        }
    } else {
        bins.push((e_acc, o_acc));
    }
    if bins.len() < 2 {
        return Ok(ChiSquareResult { statistic: 0.0, dof: 0, pvalue: 1.0 });
    }
    let statistic: f64 = bins.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numeric {
        message: format!("chi-squared distribution: {e}"),
        value: statistic,
        abs_error: 0.0,
        evaluations: 0,
    })?;
    Ok(ChiSquareResult { statistic, dof, pvalue: (1.0 - dist.cdf(statistic)).clamp(0.0, 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::ProcessSpec;

    fn cfg() -> TrialConfig {
        TrialConfig {
            spec: ProcessSpec::Hppp { lambda: 1.0, tau: 4.0 },
            geom: NetworkGeometry::new(1.0).unwrap(),
            budget: LinkBudget::homogeneous(1.0, 0.0).unwrap(),
            policies: vec![PolicyKind::Optimum, PolicyKind::MidPoint, PolicyKind::ThresholdFeedback(2.0)],
        }
    }

    #[test]
    fn reproducible_and_thread_independent() {
        let a = run_trials(&cfg(), 200, 11).unwrap();
        let b = run_trials(&cfg(), 200, 11).unwrap();
        let c = run_trials_parallel(&cfg(), 200, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let mut ba = Vec::new();
        let mut bb = Vec::new();
        a.write_csv(&mut ba).unwrap();
        b.write_csv(&mut bb).unwrap();
        assert_eq!(ba, bb);
    }

    #[test]
    fn ks_self_comparison() {
        let xs = [0.3, 0.1, 0.7, 0.5];
        assert_eq!(ks_statistic(&xs, |x| ecdf(&xs, x)), 0.0);
        let ties = [1.0, 1.0, 2.0];
        assert_eq!(ks_statistic(&ties, |x| ecdf(&ties, x)), 0.0);
        let u: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_statistic(&u, |x| x.clamp(0.0, 1.0)) <= 0.0005 + 1e-12);
    }

    #[test]
    fn ks_defective_mass() {
        let xs = [0.25, 0.75, f64::INFINITY, f64::INFINITY];
        let d = ks_statistic(&xs, |x| 0.5 * x.clamp(0.0, 1.0));
        assert!((d - 0.125).abs() < 1e-15);
    }

    #[test]
    fn chi2_exact_poisson() {
        // Counts laid out in proportion to the pmf give a near-zero statistic.
        let mu: f64 = 3.0;
        let mut counts = Vec::new();
        let mut p = (-mu).exp();
        for k in 0..20 {
            let m = (p * 100_000.0).round() as usize;
            counts.extend(std::iter::repeat(k).take(m));
            p *= mu / (k + 1) as f64;
        }
        let r = chi2_poisson(&counts, mu).unwrap();
        assert!(r.pvalue > 0.99, "{r:?}");
        let r = chi2_poisson(&counts, 4.0).unwrap();
        assert!(r.pvalue < 1e-6);
    }

    #[test]
    fn stats_helpers() {
        let (m, se) = mean_and_stderr(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(proportion(5, 10), (0.5, (0.025f64).sqrt()));
    }
}
