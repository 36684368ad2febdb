//! Laws of the CQI under the mid-point and closest-to-destination policies.

use crate::error::Result;
use crate::numerics::Quad;
use std::f64::consts::PI;

const TOL: f64 = 1e-12;
/// ln(1e10): tail level used for integration horizons.
const TAIL_LOG: f64 = 23.025_850_929_940_457;

/// Nearest-neighbour cdf 1 − exp(−λπψ²), zero for ψ < 0.
pub fn cdf_nn(psi: f64, lambda: f64) -> f64 {
    if psi <= 0.0 {
        return 0.0;
    }
    -(-lambda * PI * psi * psi).exp_m1()
}

pub fn pdf_nn(psi: f64, lambda: f64) -> f64 {
    if psi <= 0.0 {
        return 0.0;
    }
    2.0 * lambda * PI * psi * (-lambda * PI * psi * psi).exp()
}

/// Radius beyond which the nearest-neighbour tail is below 1e−10.
pub fn nn_horizon(lambda: f64) -> f64 {
    (TAIL_LOG / (lambda * PI)).sqrt()
}

pub fn cdf_gamma_mid(gamma: f64, lambda: f64, d: f64) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    let x1 = (gamma - d) * (gamma - d);
    let span = (2.0 * d * (gamma - d)).sqrt();
    // x = x1 + u²
    let r = Quad::with_tol(TOL).integrate(
        |u| {
            let x = x1 + u * u;
            let c = ((gamma * gamma - x - d * d) / (2.0 * d * x.sqrt())).clamp(-1.0, 1.0);
            (-lambda * PI * x).exp() * c.acos() * 2.0 * u
        },
        0.0,
        span,
    )?;
    let v = cdf_nn((gamma * gamma - d * d).sqrt(), lambda) - 2.0 * lambda * r.value;
    Ok(v.clamp(0.0, 1.0))
}

pub fn pdf_gamma_mid(gamma: f64, lambda: f64, d: f64) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    let x1 = (gamma - d) * (gamma - d);
    let width = 4.0 * gamma * d;
    let span = (2.0 * d * (gamma - d)).sqrt();
    let r = Quad::with_tol(TOL).integrate(
        |u| 2.0 * (-lambda * PI * (x1 + u * u)).exp() / (width - u * u).sqrt(),
        0.0,
        span,
    )?;
    Ok(4.0 * lambda * gamma * r.value)
}

pub fn cdf_gamma_c2d(gamma: f64, lambda: f64, d: f64) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    let x1 = (gamma - 2.0 * d) * (gamma - 2.0 * d);
    let span = (4.0 * d * (gamma - d)).sqrt();
    let r = Quad::with_tol(TOL).integrate(
        |u| {
            let x = x1 + u * u;
            let c = ((x + 4.0 * d * d - gamma * gamma) / (4.0 * d * x.sqrt())).clamp(-1.0, 1.0);
            (-lambda * PI * x).exp() * c.acos() * 2.0 * u
        },
        0.0,
        span,
    )?;
    let v = cdf_nn(gamma - 2.0 * d, lambda) + lambda * r.value;
    Ok(v.clamp(0.0, 1.0))
}

pub fn pdf_gamma_c2d(gamma: f64, lambda: f64, d: f64) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    let x1 = (gamma - 2.0 * d) * (gamma - 2.0 * d);
    let width = 8.0 * gamma * d;
    let span = (4.0 * d * (gamma - d)).sqrt();
    let r = Quad::with_tol(TOL).integrate(
        |u| 2.0 * (-lambda * PI * (x1 + u * u)).exp() / (width - u * u).sqrt(),
        0.0,
        span,
    )?;
    Ok(2.0 * lambda * gamma * ((d / gamma).acos() * (-lambda * PI * gamma * gamma).exp() + r.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    // ψ-form: angular fraction of a mid-point relay at radius ψ with ŝ ≤ γ.
    fn mid_oracle(gamma: f64, lambda: f64, d: f64) -> f64 {
        let frac = |r: f64| {
            let c = (gamma * gamma - r * r - d * d) / (2.0 * d * r);
            if c >= 1.0 {
                1.0
            } else if c <= 0.0 {
                0.0
            } else {
                1.0 - 2.0 / PI * c.acos()
            }
        };
        let q = Quad::with_tol(1e-14);
        let knots = [0.0, gamma - d, (gamma * gamma - d * d).sqrt()];
        knots.windows(2).map(|w| q.integrate(|r| frac(r) * pdf_nn(r, lambda), w[0], w[1]).unwrap().value).sum()
    }

    fn c2d_oracle(gamma: f64, lambda: f64, d: f64) -> f64 {
        let n = 4000;
        let m = 2000;
        let hi = gamma;
        let mut acc = 0.0;
        for i in 0..n {
            let r = (i as f64 + 0.5) * hi / n as f64;
            let mut frac = 0.0;
            for j in 0..m {
                let phi = (j as f64 + 0.5) * PI / m as f64;
                let to_src = (r * r + 4.0 * d * d + 4.0 * d * r * phi.cos()).sqrt();
                if r.max(to_src) <= gamma {
                    frac += 1.0;
                }
            }
            acc += frac / m as f64 * pdf_nn(r, lambda) * hi / n as f64;
        }
        acc
    }

    #[test]
    fn mid_cdf_matches_polar_oracle() {
        for &(l, d) in &[(1.0, 1.0), (0.5, 0.7)] {
            for &g in &[1.05 * d, 1.3 * d, 2.0 * d, 3.5 * d] {
                let a = cdf_gamma_mid(g, l, d).unwrap();
                let b = mid_oracle(g, l, d);
                assert!((a - b).abs() < 1e-10, "g={g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn c2d_cdf_matches_grid_oracle() {
        for &g in &[1.1, 1.8, 2.5, 3.5] {
            let a = cdf_gamma_c2d(g, 1.0, 1.0).unwrap();
            let b = c2d_oracle(g, 1.0, 1.0);
            assert!((a - b).abs() < 2e-3, "g={g}: {a} vs {b}");
        }
    }

    #[test]
    fn below_support_and_normalization() {
        assert_eq!(cdf_gamma_mid(0.9, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(cdf_gamma_c2d(0.9, 1.0, 1.0).unwrap(), 0.0);
        assert!((cdf_gamma_mid(8.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((cdf_gamma_c2d(9.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(pdf_gamma_mid(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(pdf_gamma_c2d(1.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn pdf_is_cdf_derivative() {
        let h = 1e-5;
        for &g in &[1.2, 1.9, 2.1, 3.0] {
            let num = (cdf_gamma_mid(g + h, 1.0, 1.0).unwrap() - cdf_gamma_mid(g - h, 1.0, 1.0).unwrap()) / (2.0 * h);
            assert!((num - pdf_gamma_mid(g, 1.0, 1.0).unwrap()).abs() < 1e-5, "mid g={g}");
            let num = (cdf_gamma_c2d(g + h, 1.0, 1.0).unwrap() - cdf_gamma_c2d(g - h, 1.0, 1.0).unwrap()) / (2.0 * h);
            assert!((num - pdf_gamma_c2d(g, 1.0, 1.0).unwrap()).abs() < 1e-5, "c2d g={g}");
        }
    }
}
