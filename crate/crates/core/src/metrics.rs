//! Rates, outage and feedback-load analytics.

use crate::analytic::{
    average_over_mid, cdf_s_opt, lens_mean_count, metric_polar, overlap_area, DistributionEvaluator,
    Law,
};
use crate::error::{param, Error, Result};
use crate::model::{FadingModel, PathLossModel};
use crate::numerics::{f_exp_e1, solve_monotone_upward, Quad};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// bits/s/Hz, half-duplex unless scaled.
    pub value: f64,
    pub fading: FadingModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageRegime {
    FeedbackLimited,
    RateLimited,
    AlwaysOutage,
}

/// Half-duplex rate at received SNR factor `s = snr·G(γ)`.
pub fn rate_at_snr(s: f64, fading: FadingModel) -> f64 {
    if !(s > 0.0) {
        return 0.0;
    }
    match fading {
        FadingModel::NoFading => s.ln_1p() / (2.0 * LN_2),
        FadingModel::RayleighUnitPower => f_exp_e1(1.0 / s).unwrap_or(0.0) / (2.0 * LN_2),
    }
}

pub fn conditional_rate(gamma: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> RateResult {
    RateResult {
        value: rate_at_snr(snr * g.g(gamma), fading),
        fading,
    }
}

fn integrate_rate(law: &DistributionEvaluator, lo: f64, hi: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let mut err = None;
    let r = Quad::with_tol(1e-10).integrate(
        |x| match law.pdf(x) {
            Ok(p) => p * rate_at_snr(snr * g.g(x), fading),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// ∫ conditional_rate(γ)·pdf(γ) dγ up to the law's horizon.
pub fn average_rate(law: &DistributionEvaluator, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<RateResult> {
    if matches!(law.law, Law::SOpt { .. }) {
        return param("average_rate expects a CQI law, not S_opt");
    }
    if !law.has_pdf() {
        return Err(Error::Unsupported(format!("average rate for {:?} needs a pdf", law.law)));
    }
    let value = integrate_rate(law, law.support_min(), law.horizon(), snr, g, fading)?;
    Ok(RateResult { value, fading })
}

/// Solution s* of f(1/s)/(2 ln 2) = ρ; zero for ρ = 0.
pub fn s_star(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return param(format!("target rate must be non-negative, got {rho}"));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let rate = |s: f64| rate_at_snr(s, FadingModel::RayleighUnitPower);
    solve_monotone_upward(rate, rho, 0.0, 1.0, 1e-12)
}

/// Received SNR factor needed for rate ρ.
pub fn snr_threshold(rho: f64, fading: FadingModel) -> Result<f64> {
    match fading {
        FadingModel::NoFading => Ok((2.0 * rho * LN_2).exp_m1()),
        FadingModel::RayleighUnitPower => s_star(rho),
    }
}

/// Outage of the optimum policy with all relays reporting.
pub fn outage(rho: f64, lambda: f64, d: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<f64> {
    if !(rho >= 0.0) {
        return param(format!("target rate must be non-negative, got {rho}"));
    }
    let s_d = snr * g.g(d);
    if fading == FadingModel::NoFading && rho >= rate_at_snr(s_d, fading) {
        return Ok(1.0);
    }
    let s = snr_threshold(rho, fading)?;
    if s >= s_d {
        return Ok(1.0);
    }
    Ok(cdf_s_opt(s, lambda, d, snr, g))
}

/// Outage P(Γ > G⁻¹(s_th/snr)) for any CQI law.
pub fn outage_for_law(law: &DistributionEvaluator, rho: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<f64> {
    let s = snr_threshold(rho, fading)?;
    if s <= 0.0 {
        return Ok(1.0 - law.total_mass());
    }
    let gamma = g.g_inv(s / snr);
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    Ok((1.0 - law.cdf(gamma)?).clamp(0.0, 1.0))
}

/// μ(T): mean number of relays with ŝ ≤ T.
pub fn mean_feedback_load(t: f64, lambda: f64, d: f64) -> f64 {
    if t <= d {
        return 0.0;
    }
    if t.is_infinite() {
        return f64::INFINITY;
    }
    let r = (t * t - d * d).sqrt();
    lambda * PI * t * t - 2.0 * d * lambda * r - 2.0 * t * t * lambda * d.atan2(r)
}

/// T ≥ d with μ(T) = μ₀.
pub fn threshold_for_load(mu0: f64, lambda: f64, d: f64) -> Result<f64> {
    if !(mu0 >= 0.0) {
        return param(format!("feedback load must be non-negative, got {mu0}"));
    }
    if mu0 == 0.0 {
        return Ok(d);
    }
    // μ grows like λπT², so the bisection width is set relative to T.
    let t = solve_monotone_upward(|t| mean_feedback_load(t, lambda, d), mu0, d, 2.0 * d, 1e-13 * d)?;
    Ok(t)
}

/// ∫_d^T conditional_rate·f_Γopt.
pub fn average_rate_feedback(t: f64, lambda: f64, d: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<RateResult> {
    if !(t >= d) {
        return param(format!("feedback threshold must satisfy T >= d, got T={t}, d={d}"));
    }
    let law = DistributionEvaluator::new(Law::GammaOpt, lambda, d)?;
    let hi = t.min(law.horizon());
    let value = integrate_rate(&law, d, hi, snr, g, fading)?;
    Ok(RateResult { value, fading })
}

/// Outage with threshold feedback and its regime.
pub fn outage_feedback(
    t: f64,
    rho: f64,
    lambda: f64,
    d: f64,
    snr: f64,
    g: &PathLossModel,
    fading: FadingModel,
) -> Result<(f64, OutageRegime)> {
    if !(t >= d) {
        return param(format!("feedback threshold must satisfy T >= d, got T={t}, d={d}"));
    }
    if !(rho >= 0.0) {
        return param(format!("target rate must be non-negative, got {rho}"));
    }
    let (s_t, s_d) = (snr * g.g(t), snr * g.g(d));
    let (feedback_limited, rate_limited, s) = match fading {
        FadingModel::NoFading => (
            rho <= rate_at_snr(s_t, fading),
            rho < rate_at_snr(s_d, fading),
            (2.0 * rho * LN_2).exp_m1(),
        ),
        FadingModel::RayleighUnitPower => {
            let s = s_star(rho)?;
            (s <= s_t, s < s_d, s)
        }
    };
    if feedback_limited {
        Ok(((-mean_feedback_load(t, lambda, d)).exp(), OutageRegime::FeedbackLimited))
    } else if rate_limited {
        Ok((cdf_s_opt(s, lambda, d, snr, g), OutageRegime::RateLimited))
    } else {
        Ok((1.0, OutageRegime::AlwaysOutage))
    }
}

/// Mid-point rate, the gap bound Δ_ave and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointBound {
    pub rate_mid: f64,
    pub delta: f64,
    pub bound: f64,
}

/// R_ave(P_mid) + Δ_ave, an upper bound on the optimum average rate.
pub fn rate_upper_bound_midpoint(lambda: f64, d: f64, snr: f64, g: &PathLossModel, fading: FadingModel) -> Result<MidpointBound> {
    let rate = |x: f64| rate_at_snr(snr * g.g(x), fading);
    let rate_mid = average_over_mid(lambda, |psi, th| rate(metric_polar(psi, th, d)), 1e-10)?;
    let delta = average_over_mid(
        lambda,
        |psi, th| {
            let miss = -(-lambda * overlap_area(psi, th, d)).exp_m1();
            let gap = rate((psi * psi + d * d).sqrt()) - rate(metric_polar(psi, th, d));
            miss * gap.max(0.0)
        },
        1e-10,
    )?;
    Ok(MidpointBound {
        rate_mid,
        delta,
        bound: rate_mid + delta,
    })
}

/// Full-duplex rate: the half-duplex ½ removed.
pub fn fd_rate_scaling(r: RateResult) -> RateResult {
    RateResult {
        value: 2.0 * r.value,
        fading: r.fading,
    }
}

/// Least-squares slope of −log₁₀(P) against λ.
pub fn log_decay_slope(lambdas: &[f64], probs: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&l, &p)| (l, -p.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// P(N_FB ≥ 1) = 1 − e^(−μ(T)).
pub fn prob_any_feedback(t: f64, lambda: f64, d: f64) -> f64 {
    -(-mean_feedback_load(t, lambda, d)).exp_m1()
}

/// Cdf of Γ_opt conditioned on Γ_opt ≤ T.
pub fn truncated_cdf_gamma_opt(gamma: f64, t: f64, lambda: f64, d: f64) -> f64 {
    let top = lens_mean_count(t, lambda, d);
    if gamma >= t {
        return 1.0;
    }
    (-(-lens_mean_count(gamma, lambda, d)).exp_m1() / -(-top).exp_m1()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::snr_from_db;

    fn pl() -> PathLossModel {
        PathLossModel::power_law(4.0).unwrap()
    }

    #[test]
    fn conditional_rate_examples() {
        let g = PathLossModel::power_law(1.0).unwrap();
        assert!((conditional_rate(1.0, 3.0, &g, FadingModel::NoFading).value - 1.0).abs() < 1e-15);
        assert!(conditional_rate(1e12, 3.0, &g, FadingModel::NoFading).value < 1e-11);
        assert!(conditional_rate(1e12, 3.0, &g, FadingModel::RayleighUnitPower).value < 1e-11);
        for &s in &[0.01, 0.3, 1.0, 7.0, 100.0] {
            let r = rate_at_snr(s, FadingModel::RayleighUnitPower);
            assert!(r < rate_at_snr(s, FadingModel::NoFading));
            assert!(r > (1.0 + 2.0 * s).ln() / (4.0 * LN_2));
        }
    }

    #[test]
    fn s_star_value() {
        assert!((s_star(0.3).unwrap() - 0.6022).abs() < 1e-3);
        assert_eq!(s_star(0.0).unwrap(), 0.0);
    }

    #[test]
    fn feedback_load_values() {
        assert_eq!(mean_feedback_load(1.0, 1.0, 1.0), 0.0);
        let v = mean_feedback_load(2.0, 1.0, 1.0);
        assert!((v - (8.0 * PI / 3.0 - 2.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!((v - lens_mean_count(2.0, 1.0, 1.0)).abs() < 1e-12);
        for (l, want) in [(2.0, 3.1), (3.0, 4.65), (4.0, 6.2)] {
            assert!((mean_feedback_load(1.5, l, 1.0) - want).abs() < 0.05);
        }
    }

    #[test]
    fn load_inverse() {
        assert_eq!(threshold_for_load(0.0, 1.0, 1.0).unwrap(), 1.0);
        let t = threshold_for_load(8.0 * PI / 3.0 - 2.0 * 3f64.sqrt(), 1.0, 1.0).unwrap();
        assert!((t - 2.0).abs() < 1e-6);
        for &x in &[1.0, 5.0, 20.0] {
            let t = threshold_for_load(x, 1.0, 1.0).unwrap();
            assert!((mean_feedback_load(t, 1.0, 1.0) - x).abs() < 1e-8);
        }
    }

    #[test]
    fn feedback_rate_edges() {
        let snr = snr_from_db(5.0);
        assert_eq!(average_rate_feedback(1.0, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap().value, 0.0);
        assert!(average_rate_feedback(0.5, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).is_err());
        let all = average_rate(&DistributionEvaluator::new(Law::GammaOpt, 1.0, 1.0).unwrap(), snr, &pl(), FadingModel::NoFading)
            .unwrap()
            .value;
        let big = average_rate_feedback(50.0, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap().value;
        assert!((all - big).abs() < 1e-9);
        let t5 = threshold_for_load(5.0, 1.0, 1.0).unwrap();
        let r5 = average_rate_feedback(t5, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap().value;
        assert!((all - r5) / all < 0.01);
    }

    #[test]
    fn outage_edges() {
        let snr = snr_from_db(5.0);
        assert_eq!(outage(0.0, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap(), 0.0);
        let cap = rate_at_snr(snr, FadingModel::NoFading);
        assert_eq!(outage(cap, 1.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap(), 1.0);
        assert_eq!(outage(cap + 0.1, 1.0, 1.0, snr, &pl(), FadingModel::RayleighUnitPower).unwrap(), 1.0);
    }

    #[test]
    fn outage_routes_agree() {
        let snr = snr_from_db(5.0);
        let law = DistributionEvaluator::new(Law::GammaOpt, 1.5, 1.0).unwrap();
        for fading in [FadingModel::NoFading, FadingModel::RayleighUnitPower] {
            for &rho in &[0.1, 0.3, 0.6] {
                let a = outage(rho, 1.5, 1.0, snr, &pl(), fading).unwrap();
                let b = outage_for_law(&law, rho, snr, &pl(), fading).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn regimes() {
        let snr = snr_from_db(5.0);
        for &t in &[1.1, 1.25, 1.5] {
            for fading in [FadingModel::NoFading, FadingModel::RayleighUnitPower] {
                let (p, r) = outage_feedback(t, 0.3, 2.0, 1.0, snr, &pl(), fading).unwrap();
                assert_eq!(r, OutageRegime::FeedbackLimited);
                assert!((p - (-mean_feedback_load(t, 2.0, 1.0)).exp()).abs() < 1e-15);
            }
        }
        let (p, r) = outage_feedback(2.0, 0.3, 2.0, 1.0, snr, &pl(), FadingModel::RayleighUnitPower).unwrap();
        assert_eq!(r, OutageRegime::RateLimited);
        assert!((p - outage(0.3, 2.0, 1.0, snr, &pl(), FadingModel::RayleighUnitPower).unwrap()).abs() < 1e-15);
        let (p, r) = outage_feedback(2.0, 5.0, 2.0, 1.0, snr, &pl(), FadingModel::NoFading).unwrap();
        assert_eq!((p, r), (1.0, OutageRegime::AlwaysOutage));
        assert!(outage_feedback(0.9, 0.3, 2.0, 1.0, snr, &pl(), FadingModel::NoFading).is_err());
    }

    #[test]
    fn fd_scaling() {
        let r = RateResult { value: 1.03, fading: FadingModel::NoFading };
        assert!((fd_rate_scaling(r).value - 2.06).abs() < 1e-15);
        assert!((fd_rate_scaling(fd_rate_scaling(r)).value - 4.12).abs() < 1e-15);
        assert_eq!(fd_rate_scaling(RateResult { value: 0.0, fading: FadingModel::NoFading }).value, 0.0);
    }

    #[test]
    fn slope_fit() {
        let l = [1.0, 2.0, 3.0];
        let p: Vec<f64> = l.iter().map(|x| 10f64.powf(-0.35 * x)).collect();
        assert!((log_decay_slope(&l, &p).unwrap() - 0.35).abs() < 1e-12);
    }
}
