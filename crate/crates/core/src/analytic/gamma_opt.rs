//! Law of Γ_opt for an HPPP, on the plane and on a finite disc.

use crate::error::Result;
use crate::numerics::Quad;
use std::f64::consts::PI;

/// arcsec(x) = arccos(1/x) for x ≥ 1.
pub fn arcsec(x: f64) -> f64 {
    (1.0 / x).clamp(-1.0, 1.0).acos()
}

/// g(x) = x²·arcsec(x) − √(x² − 1), x ≥ 1.
pub fn g_fn(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    x * x * arcsec(x) - (x * x - 1.0).sqrt()
}

/// Mean number of relays with ŝ ≤ γ.
pub fn lens_mean_count(gamma: f64, lambda: f64, d: f64) -> f64 {
    2.0 * lambda * d * d * g_fn(gamma / d)
}

pub fn cdf_gamma_opt(gamma: f64, lambda: f64, d: f64) -> f64 {
    if gamma <= d {
        return 0.0;
    }
    -(-lens_mean_count(gamma, lambda, d)).exp_m1()
}

pub fn ccdf_gamma_opt(gamma: f64, lambda: f64, d: f64) -> f64 {
    if gamma <= d {
        return 1.0;
    }
    (-lens_mean_count(gamma, lambda, d)).exp()
}

pub fn pdf_gamma_opt(gamma: f64, lambda: f64, d: f64) -> f64 {
    if gamma <= d {
        return 0.0;
    }
    4.0 * lambda * gamma * arcsec(gamma / d) * (-lens_mean_count(gamma, lambda, d)).exp()
}

/// E[Γ_opt] = d + d·∫₁^∞ exp(−2λd²g(u)) du.
pub fn mean_gamma_opt(lambda: f64, d: f64) -> Result<f64> {
    let q = Quad::with_tol(1e-10);
    let tail = q.integrate_to_inf(|u| (-2.0 * lambda * d * d * g_fn(u)).exp(), 1.0)?;
    Ok(d + d * tail.value)
}

/// Fraction F_Γ(γ) of the disc of radius τ covered by {ŝ ≤ γ}.
pub fn disc_fraction(gamma: f64, d: f64, tau: f64) -> f64 {
    if gamma < d {
        return 0.0;
    }
    let t2 = tau * tau;
    let g2 = gamma * gamma;
    if g2 <= t2 + d * d {
        return 2.0 / (PI * t2) * (g2 * arcsec(gamma / d) - d * (g2 - d * d).sqrt());
    }
    if gamma > tau + d {
        return 1.0;
    }
    let c = t2 + d * d - g2; // negative on this branch
    let root = (4.0 * d * d * t2 - c * c).max(0.0).sqrt();
    let arcsec_term = arcsec(-2.0 * d * tau / c);
    let arctan_term = (root / (t2 - d * d + g2)).atan();
    let arccsc_term = (c / (2.0 * d * tau)).clamp(-1.0, 1.0).asin();
    let heron = ((tau - d + gamma) * (tau + d - gamma) * (d - tau + gamma) * (tau + d + gamma))
        .max(0.0)
        .sqrt();
    2.0 * g2 / (PI * t2) * (arcsec_term - arctan_term) - 2.0 / PI * arccsc_term - heron / (PI * t2)
}

/// Pre-limit cdf with relays confined to the disc of radius τ.
pub fn cdf_gamma_opt_finite(gamma: f64, lambda: f64, d: f64, tau: f64) -> f64 {
    if gamma < d {
        return 0.0;
    }
    -(-lambda * PI * tau * tau * disc_fraction(gamma, d, tau)).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad_adaptive;

    // Covered fraction by polar integration of the lens boundary ρ(θ).
    fn disc_fraction_oracle(gamma: f64, d: f64, tau: f64) -> f64 {
        let rho = |t: f64| (gamma * gamma - d * d * t.sin().powi(2)).sqrt() - d * t.cos();
        let f = |t: f64| rho(t).min(tau).powi(2);
        let c = (gamma * gamma - tau * tau - d * d) / (2.0 * d * tau);
        let area = if c > -1.0 && c < 1.0 {
            let k = c.acos();
            quad_adaptive(f, 0.0, k, 1e-14).unwrap().value + quad_adaptive(f, k, PI / 2.0, 1e-14).unwrap().value
        } else {
            quad_adaptive(f, 0.0, PI / 2.0, 1e-14).unwrap().value
        };
        2.0 * area / (PI * tau * tau)
    }

    #[test]
    fn g_properties() {
        assert_eq!(g_fn(1.0), 0.0);
        assert!((g_fn(2f64.sqrt()) - (PI / 2.0 - 1.0)).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 1..200 {
            let x = 1.0 + i as f64 * 0.05;
            let v = g_fn(x);
            assert!(v > prev);
            prev = v;
        }
        assert!((g_fn(1e4) / 1e8 - PI / 2.0).abs() < 1e-3);
    }

    #[test]
    fn cdf_at_sqrt2() {
        let v = cdf_gamma_opt(2f64.sqrt(), 1.0, 1.0);
        assert!((v - (1.0 - (-(PI - 2.0)).exp())).abs() < 1e-14);
        assert!((v - 0.680_689_933_694_383).abs() < 1e-12);
        assert_eq!(cdf_gamma_opt(1.0, 1.0, 1.0), 0.0);
        assert_eq!(cdf_gamma_opt(-3.0, 1.0, 1.0), 0.0);
        assert!(cdf_gamma_opt(1.01, 1e6, 1.0) > 1.0 - 1e-12);
    }

    #[test]
    fn mean_limits() {
        let m1 = mean_gamma_opt(1.0, 1.0).unwrap();
        let oracle = 1.0 + quad_adaptive(|g| ccdf_gamma_opt(g, 1.0, 1.0), 1.0, 12.0, 1e-12).unwrap().value;
        assert!((m1 - oracle).abs() < 1e-9);
        let big = mean_gamma_opt(1e3, 1.0).unwrap();
        assert!(big >= 1.0 && big < 1.02);
    }

    #[test]
    fn disc_fraction_matches_polar_integral() {
        for &(d, tau) in &[(1.0, 10.0), (1.0, 2.0), (1.0, 0.5), (0.5, 1.3)] {
            for i in 0..=40 {
                let gamma = d + (tau + d - d) * 1.05 * i as f64 / 40.0;
                let a = disc_fraction(gamma, d, tau);
                let b = disc_fraction_oracle(gamma, d, tau);
                assert!((a - b).abs() < 1e-10, "d={d} tau={tau} gamma={gamma}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn finite_disc_branches() {
        let (l, d, t) = (1.0, 1.0, 3.0);
        assert!((cdf_gamma_opt_finite(4.5, l, d, t) - (1.0 - (-l * PI * t * t).exp())).abs() < 1e-15);
        assert_eq!(cdf_gamma_opt_finite(0.5, l, d, t), 0.0);
        // Below √(τ²+d²) the truncation is invisible.
        assert!((cdf_gamma_opt_finite(3.1, l, d, t) - cdf_gamma_opt(3.1, l, d)).abs() < 1e-14);
        assert!((cdf_gamma_opt_finite(1.5, 1.0, 1.0, 50.0) - cdf_gamma_opt(1.5, 1.0, 1.0)).abs() < 1e-6);
    }
}
