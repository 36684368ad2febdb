//! Probabilities that the mid-point relay is optimum.

use super::benchmark::{nn_horizon, pdf_nn};
use crate::error::Result;
use crate::numerics::{erfc_scaled, Quad};
use std::f64::consts::{FRAC_PI_2, PI};

/// P(sufficient condition) = exp(λπd²)·erfc(√(λπ)·d).
pub fn prob_sufficient(lambda: f64, d: f64) -> f64 {
    erfc_scaled((lambda * PI).sqrt() * d)
}

/// ŝ for a point at radius ψ and angle θ ∈ [0, π/2] from the x axis.
pub fn metric_polar(psi: f64, theta: f64, d: f64) -> f64 {
    (psi * psi + 2.0 * d * psi * theta.cos() + d * d).sqrt()
}

/// Area of {x : ‖x‖ > ψ, ŝ(x) < ŝ(X_mid)} with X_mid at (ψ, θ).
pub fn overlap_area(psi: f64, theta: f64, d: f64) -> f64 {
    let s = metric_polar(psi, theta, d);
    let s2 = s * s;
    let v = |y: f64| {
        let r = (s2 - y * y).max(0.0).sqrt();
        2.0 * y * r + 2.0 * s2 * y.atan2(r)
    };
    let p = (s2 - psi * psi) * (PI - 2.0 * theta) - d * d * (2.0 * theta).sin() - v(d) + v(d * theta.sin());
    p.max(0.0)
}

/// (2/π)∫₀^{π/2}∫₀^∞ h(ψ, θ)·f_NN(ψ) dψ dθ.
pub(crate) fn average_over_mid<F: Fn(f64, f64) -> f64>(lambda: f64, h: F, tol: f64) -> Result<f64> {
    let hi = nn_horizon(lambda) * 1.3;
    let inner = Quad::with_tol(tol * 0.1);
    let mut err = None;
    let outer = Quad::with_tol(tol).integrate(
        |theta| match inner.integrate(|psi| h(psi, theta) * pdf_nn(psi, lambda), 0.0, hi) {
            Ok(r) => r.value,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        FRAC_PI_2,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(outer.value / FRAC_PI_2)
}

/// P(X_mid = X_opt).
pub fn prob_mid_optimal(lambda: f64, d: f64) -> Result<f64> {
    let v = average_over_mid(lambda, |psi, theta| (-lambda * overlap_area(psi, theta, d)).exp(), 1e-9)?;
    Ok(v.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ccdf_annulus_metric;

    #[test]
    fn sufficient_examples() {
        let d = (1.0 / PI).sqrt();
        assert!((prob_sufficient(1.0, d) - 1f64.exp() * libm::erfc(1.0)).abs() < 1e-14);
        assert!((prob_sufficient(1.0, d) - 0.427_58).abs() < 1e-5);
        assert!((prob_sufficient(1.0, 1e-12) - 1.0).abs() < 1e-10);
        assert!(prob_sufficient(1e6, 1.0).is_finite());
    }

    #[test]
    fn overlap_matches_annulus_law() {
        let d = 1.0;
        for &psi in &[0.1, 0.5, 1.3] {
            for &theta in &[0.0, 0.4, 1.0, FRAC_PI_2] {
                let t = metric_polar(psi, theta, d);
                let tau = t + d + 1.0;
                let uncovered = ccdf_annulus_metric(t, psi, tau, d).unwrap();
                let area = PI * (tau * tau - psi * psi) * (1.0 - uncovered);
                assert!((overlap_area(psi, theta, d) - area).abs() < 1e-9, "psi={psi} theta={theta}");
            }
        }
    }

    #[test]
    fn overlap_vanishes_at_origin() {
        assert!(overlap_area(0.0, 0.7, 1.0).abs() < 1e-12);
    }

    #[test]
    fn mid_optimal_limits() {
        // 1 − p shrinks like √λ.
        assert!((prob_mid_optimal(1e-10, 1.0).unwrap() - 1.0).abs() < 1e-4);
        assert!((prob_mid_optimal(1.0, 1e-6).unwrap() - 1.0).abs() < 1e-4);
        let p = prob_mid_optimal(1.0, 1.0).unwrap();
        assert!(p > prob_sufficient(1.0, 1.0) && p < 1.0);
    }
}
