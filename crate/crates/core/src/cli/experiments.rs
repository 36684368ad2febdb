//! Named experiments. Each one produces rows `x, series, analytic, simulated, stderr`.

use super::config::ExperimentConfig;
use crate::analytic::{
    ccdf_annulus_metric, cdf_gamma_opt, cdf_gamma_opt_finite, prob_mid_optimal, prob_sufficient, DistributionEvaluator,
    Law,
};
use crate::error::Result;
use crate::metrics::{
    average_rate, average_rate_feedback, mean_feedback_load, outage, outage_feedback, outage_for_law,
    prob_any_feedback, rate_at_snr, snr_threshold, threshold_for_load,
};
use crate::model::{selection_metric, snr_from_db, FadingModel, LinkBudget, NetworkGeometry, PathLossModel};
use crate::montecarlo::{map_fields, mean_and_stderr, proportion, run_trials, run_trials_parallel, TrialBatch, TrialConfig};
use crate::policy::{select, PolicyKind};
use crate::process::{default_tau, sample, ProcessSpec};
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub series: String,
    pub analytic: Option<f64>,
    pub simulated: Option<f64>,
    pub stderr: Option<f64>,
}

impl Row {
    fn full(x: f64, series: impl Into<String>, analytic: f64, sim: (f64, f64)) -> Row {
        Row { x, series: series.into(), analytic: Some(analytic), simulated: Some(sim.0), stderr: Some(sim.1) }
    }

    fn analytic(x: f64, series: impl Into<String>, analytic: f64) -> Row {
        Row { x, series: series.into(), analytic: Some(analytic), simulated: None, stderr: None }
    }
}

/// Decimal for moderate magnitudes, exponent form otherwise.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_rows<W: Write>(rows: &[Row], mut w: W) -> std::io::Result<()> {
    w.write_all(b"x,series,analytic,simulated,stderr\n")?;
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    for r in rows {
        writeln!(w, "{},{},{},{},{}", fmt_num(r.x), r.series, opt(r.analytic), opt(r.simulated), opt(r.stderr))?;
    }
    Ok(())
}

const FADINGS: [(FadingModel, &str); 2] = [(FadingModel::NoFading, "none"), (FadingModel::RayleighUnitPower, "rayleigh")];

struct Ctx<'a> {
    c: &'a ExperimentConfig,
    snr: f64,
    g: PathLossModel,
    point: u64,
}

impl Ctx<'_> {
    /// Each grid point gets its own master seed: seed + point index.
    fn next_seed(&mut self) -> u64 {
        let s = self.c.seed.wrapping_add(self.point);
        self.point += 1;
        s
    }

    fn batch(&mut self, spec: ProcessSpec, d: f64, policies: Vec<PolicyKind>) -> Result<TrialBatch> {
        self.batch_with(spec, d, LinkBudget::homogeneous(self.snr, 0.0)?, policies)
    }

    fn batch_with(&mut self, spec: ProcessSpec, d: f64, budget: LinkBudget, policies: Vec<PolicyKind>) -> Result<TrialBatch> {
        let cfg = TrialConfig { spec, geom: NetworkGeometry::new(d)?, budget, policies };
        let seed = self.next_seed();
        if self.c.parallel {
            run_trials_parallel(&cfg, self.c.n_trials, seed)
        } else {
            run_trials(&cfg, self.c.n_trials, seed)
        }
    }

    fn rate(&self, gamma: f64, fading: FadingModel) -> f64 {
        rate_at_snr(self.snr * self.g.g(gamma), fading)
    }

    fn sim_rate(&self, gammas: &[f64], fading: FadingModel) -> (f64, f64) {
        let r: Vec<f64> = gammas.iter().map(|&x| self.rate(x, fading)).collect();
        mean_and_stderr(&r)
    }

    fn sim_outage(&self, gammas: &[f64], s_th: f64) -> (f64, f64) {
        let hits = gammas.iter().filter(|&&x| self.snr * self.g.g(x) < s_th).count();
        proportion(hits, gammas.len())
    }
}

fn empirical_cdf(gammas: &[f64], x: f64) -> (f64, f64) {
    proportion(gammas.iter().filter(|&&g| g <= x).count(), gammas.len())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Computes every row of a validated configuration.
pub fn compute(c: &ExperimentConfig) -> Result<Vec<Row>> {
    c.validate()?;
    let mut ctx = Ctx { c, snr: snr_from_db(c.snr_db), g: PathLossModel::power_law(c.alpha)?, point: 0 };
    match c.name.as_str() {
        "midpoint-optimality" => midpoint_optimality(&mut ctx),
        "finite-convergence" => finite_convergence(&mut ctx),
        "nfb-distribution" => nfb_distribution(&mut ctx),
        "feedback-load" => feedback_load(&mut ctx),
        "outage-and-rate" => outage_and_rate(&mut ctx),
        "rate-feedback" => rate_feedback(&mut ctx),
        "outage-feedback" => outage_feedback_rows(&mut ctx),
        "fixed-load" => fixed_load(&mut ctx),
        "annulus-ccdf" => annulus_ccdf(&mut ctx),
        "diff-snr-cdf" => diff_snr_cdf(&mut ctx),
        other => crate::error::param(format!("unknown experiment '{other}'")),
    }
}

fn midpoint_optimality(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    for &d in &c.ds {
        for &l in &c.lambdas {
            let b = ctx.batch(ProcessSpec::hppp_default(l, d), d, vec![PolicyKind::Optimum, PolicyKind::MidPoint])?;
            rows.push(Row::full(l, format!("sufficient d={d}"), prob_sufficient(l, d), b.sufficient_fraction()));
            rows.push(Row::full(l, format!("mid_opt d={d}"), prob_mid_optimal(l, d)?, b.mid_is_opt_fraction()));
        }
    }
    Ok(rows)
}

fn finite_convergence(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    for &d in &c.ds {
        for &l in &c.lambdas {
            let grid = linspace(d, d + 3.0 / l.sqrt(), 41);
            let tag = format!("lambda={l} d={d}");
            for &x in &grid {
                rows.push(Row::analytic(x, format!("limit {tag}"), cdf_gamma_opt(x, l, d)));
            }
            for &tau in &c.taus {
                let b = ctx.batch(ProcessSpec::Hppp { lambda: l, tau }, d, vec![PolicyKind::Optimum])?;
                let gammas = b.gammas(0);
                for &x in &grid {
                    rows.push(Row::full(
                        x,
                        format!("tau={tau} {tag}"),
                        cdf_gamma_opt_finite(x, l, d, tau),
                        empirical_cdf(&gammas, x),
                    ));
                }
            }
        }
    }
    Ok(rows)
}

fn window(l: f64, d: f64, reach: f64) -> ProcessSpec {
    ProcessSpec::Hppp { lambda: l, tau: default_tau(l, d).max(reach + d) }
}

fn nfb_distribution(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    for &d in &c.ds {
        let geom = NetworkGeometry::new(d)?;
        let budget = LinkBudget::homogeneous(ctx.snr, 0.0)?;
        for &t in &c.ts {
            for &l in &c.lambdas {
                let seed = ctx.next_seed();
                let counts = map_fields(&window(l, d, t), c.n_trials, seed, c.parallel, |pts| {
                    Ok(select(pts, PolicyKind::ThresholdFeedback(t), &geom, &budget)?.n_feedback)
                })?;
                let mu = mean_feedback_load(t, l, d);
                let k_max = (*counts.iter().max().unwrap_or(&0)).max((mu + 6.0 * mu.sqrt() + 5.0).ceil() as usize);
                let mut pmf = (-mu).exp();
                for k in 0..=k_max {
                    let hits = counts.iter().filter(|&&c| c == k).count();
                    rows.push(Row::full(k as f64, format!("T={t} lambda={l} d={d}"), pmf, proportion(hits, counts.len())));
                    pmf *= mu / (k + 1) as f64;
                }
            }
        }
    }
    Ok(rows)
}

fn feedback_load(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let t_max = c.ts.iter().cloned().fold(0.0, f64::max);
    for &d in &c.ds {
        let geom = NetworkGeometry::new(d)?;
        for &l in &c.lambdas {
            let seed = ctx.next_seed();
            let ts = &c.ts;
            let counts = map_fields(&window(l, d, t_max), c.n_trials, seed, c.parallel, |pts| {
                let s: Vec<f64> = pts.iter().map(|&p| selection_metric(p, &geom)).collect();
                Ok(ts.iter().map(|&t| s.iter().filter(|&&v| v <= t).count()).collect::<Vec<_>>())
            })?;
            for (k, &t) in ts.iter().enumerate() {
                let n_k: Vec<f64> = counts.iter().map(|c| c[k] as f64).collect();
                let any = counts.iter().filter(|c| c[k] >= 1).count();
                rows.push(Row::full(t, format!("mu lambda={l} d={d}"), mean_feedback_load(t, l, d), mean_and_stderr(&n_k)));
                rows.push(Row::full(t, format!("p_any lambda={l} d={d}"), prob_any_feedback(t, l, d), proportion(any, counts.len())));
            }
        }
    }
    Ok(rows)
}

fn outage_and_rate(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let rho = c.rho;
    for &d in &c.ds {
        for &l in &c.lambdas {
            let policies = vec![PolicyKind::Optimum, PolicyKind::MidPoint, PolicyKind::ClosestToDestination];
            let b = ctx.batch(ProcessSpec::hppp_default(l, d), d, policies)?;
            let laws = [("opt", Law::GammaOpt), ("mid", Law::GammaMid), ("c2d", Law::GammaC2D)];
            for (fading, fname) in FADINGS {
                let s_th = snr_threshold(rho, fading)?;
                for (k, (pname, law)) in laws.iter().enumerate() {
                    let law = DistributionEvaluator::new(law.clone(), l, d)?;
                    let gammas = b.gammas(k);
                    let rate = average_rate(&law, ctx.snr, &ctx.g, fading)?.value;
                    let out = if k == 0 {
                        outage(rho, l, d, ctx.snr, &ctx.g, fading)?
                    } else {
                        outage_for_law(&law, rho, ctx.snr, &ctx.g, fading)?
                    };
                    rows.push(Row::full(l, format!("rate {pname} {fname} d={d}"), rate, ctx.sim_rate(&gammas, fading)));
                    rows.push(Row::full(l, format!("outage {pname} {fname} d={d}"), out, ctx.sim_outage(&gammas, s_th)));
                }
            }
        }
    }
    Ok(rows)
}

fn feedback_batch(ctx: &mut Ctx, l: f64, d: f64, ts: &[f64]) -> Result<TrialBatch> {
    let t_max = ts.iter().cloned().fold(d, f64::max);
    let mut policies = vec![PolicyKind::Optimum];
    policies.extend(ts.iter().map(|&t| PolicyKind::ThresholdFeedback(t)));
    ctx.batch(window(l, d, t_max), d, policies)
}

fn rate_feedback(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let ts = c.ts.clone();
    for &d in &c.ds {
        for &l in &c.lambdas {
            let b = feedback_batch(ctx, l, d, &ts)?;
            let law = DistributionEvaluator::new(Law::GammaOpt, l, d)?;
            for (fading, fname) in FADINGS {
                let all = average_rate(&law, ctx.snr, &ctx.g, fading)?.value;
                rows.push(Row::full(l, format!("all {fname} d={d}"), all, ctx.sim_rate(&b.gammas(0), fading)));
                for (k, &t) in ts.iter().enumerate() {
                    let a = average_rate_feedback(t, l, d, ctx.snr, &ctx.g, fading)?.value;
                    rows.push(Row::full(l, format!("T={t} {fname} d={d}"), a, ctx.sim_rate(&b.gammas(k + 1), fading)));
                }
            }
        }
    }
    Ok(rows)
}

fn outage_rows(ctx: &Ctx, b: &TrialBatch, x: f64, l: f64, d: f64, rho: f64, ts: &[f64], prefix: &str) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (fading, fname) in FADINGS {
        let s_th = snr_threshold(rho, fading)?;
        let all = outage(rho, l, d, ctx.snr, &ctx.g, fading)?;
        rows.push(Row::full(x, format!("{prefix} all {fname} d={d}"), all, ctx.sim_outage(&b.gammas(0), s_th)));
        for (k, &t) in ts.iter().enumerate() {
            let (p, _) = outage_feedback(t, rho, l, d, ctx.snr, &ctx.g, fading)?;
            rows.push(Row::full(x, format!("{prefix} T={t} {fname} d={d}"), p, ctx.sim_outage(&b.gammas(k + 1), s_th)));
        }
    }
    Ok(rows)
}

fn outage_feedback_rows(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let ts = c.ts.clone();
    let rho = c.rho;
    for &d in &c.ds {
        for &l in &c.lambdas {
            let b = feedback_batch(ctx, l, d, &ts)?;
            rows.extend(outage_rows(ctx, &b, l, l, d, rho, &ts, &format!("vs-lambda rho={rho}"))?);
        }
        let l = c.sweep_lambda;
        let b = feedback_batch(ctx, l, d, &ts)?;
        for &r in &c.rhos {
            rows.extend(outage_rows(ctx, &b, r, l, d, r, &ts, &format!("vs-rho lambda={l}"))?);
        }
    }
    Ok(rows)
}

fn fixed_load(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let (mu0, rho) = (c.mu_target, c.rho);
    for &d in &c.ds {
        for &l in &c.lambdas {
            let t = threshold_for_load(mu0, l, d)?;
            rows.push(Row::analytic(l, format!("threshold mu={mu0} d={d}"), t));
            let b = feedback_batch(ctx, l, d, &[t])?;
            let law = DistributionEvaluator::new(Law::GammaOpt, l, d)?;
            for (fading, fname) in FADINGS {
                let all = average_rate(&law, ctx.snr, &ctx.g, fading)?.value;
                let fb = average_rate_feedback(t, l, d, ctx.snr, &ctx.g, fading)?.value;
                rows.push(Row::full(l, format!("rate all {fname} d={d}"), all, ctx.sim_rate(&b.gammas(0), fading)));
                rows.push(Row::full(l, format!("rate fb {fname} d={d}"), fb, ctx.sim_rate(&b.gammas(1), fading)));
            }
            rows.extend(outage_rows(ctx, &b, l, l, d, rho, &[t], &format!("outage mu={mu0} rho={rho}"))?);
        }
    }
    Ok(rows)
}

fn annulus_ccdf(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    for &d in &c.ds {
        let geom = NetworkGeometry::new(d)?;
        for &tau in &c.taus {
            for &psi in &c.psis {
                let spec = ProcessSpec::AnnulusUniform { psi, tau, count: c.n_trials };
                let field = sample(spec, ctx.next_seed())?;
                let s: Vec<f64> = field.points.iter().map(|&p| selection_metric(p, &geom)).collect();
                for t in linspace((psi * psi + d * d).sqrt(), tau + d, 60) {
                    let above = s.iter().filter(|&&v| v > t).count();
                    rows.push(Row::full(
                        t,
                        format!("tau={tau} psi={psi} d={d}"),
                        ccdf_annulus_metric(t, psi, tau, d)?,
                        proportion(above, s.len()),
                    ));
                }
            }
        }
    }
    Ok(rows)
}

fn diff_snr_cdf(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let c = ctx.c;
    let mut rows = Vec::new();
    let alpha = c.alpha;
    for &d in &c.ds {
        for &l in &c.lambdas {
            for &(a, b) in &c.snr_pairs_db {
                let budget = LinkBudget::new(ctx.snr, snr_from_db(a), snr_from_db(b), 0.0)?;
                let (s1, s2) = budget.effective_snrs(alpha);
                let law = DistributionEvaluator::new(Law::GammaOptDiffSnr { s1, s2 }, l, d)?;
                let lo = law.support_min();
                let hi = lo + 2.5 * s1.max(s2) / l.sqrt();
                let spec = window(l, d, hi / s1.min(s2));
                let batch = ctx.batch_with(spec, d, budget, vec![PolicyKind::OptimumDiffSnr { alpha }])?;
                let gammas = batch.gammas(0);
                for x in linspace(lo, hi, 50) {
                    rows.push(Row::full(
                        x,
                        format!("snr1_db={a} snr2_db={b} lambda={l} d={d}"),
                        law.cdf(x)?,
                        empirical_cdf(&gammas, x),
                    ));
                }
            }
        }
    }
    Ok(rows)
}
