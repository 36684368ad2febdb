//! Γ_opt,diff: optimum CQI when relays and destination see different SNRs.

use crate::model::diff_metric_lower_bound;
use std::f64::consts::PI;

/// Area of the intersection of discs with radii `r1`, `r2` whose centres are `sep` apart.
pub fn lens_area(r1: f64, r2: f64, sep: f64) -> f64 {
    if r1 + r2 <= sep {
        return 0.0;
    }
    if (r1 - r2).abs() >= sep {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let a1 = ((r1 * r1 - r2 * r2 + sep * sep) / (2.0 * sep * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((r2 * r2 - r1 * r1 + sep * sep) / (2.0 * sep * r2)).clamp(-1.0, 1.0).acos();
    let k = ((r1 + r2 - sep) * (r1 - r2 + sep) * (-r1 + r2 + sep) * (r1 + r2 + sep)).max(0.0).sqrt();
    r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k
}

/// F(γ) = 1 − exp(−λ·|B(x_s, γ/S̃₁) ∩ B(x_d, γ/S̃₂)|).
pub fn cdf_gamma_opt_diff(gamma: f64, lambda: f64, d: f64, s1: f64, s2: f64) -> f64 {
    if gamma <= diff_metric_lower_bound(d, s1, s2) {
        return 0.0;
    }
    -(-lambda * lens_area(gamma / s1, gamma / s2, 2.0 * d)).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::cdf_gamma_opt;
    use crate::numerics::Quad;

    // Strip integration of the intersection along x.
    fn lens_oracle(r1: f64, r2: f64, sep: f64) -> f64 {
        let half = |x: f64| {
            let h1 = (r1 * r1 - x * x).max(0.0).sqrt();
            let h2 = (r2 * r2 - (x - sep) * (x - sep)).max(0.0).sqrt();
            h1.min(h2)
        };
        let lo = (-r1).max(sep - r2);
        let hi = r1.min(sep + r2);
        if hi <= lo {
            return 0.0;
        }
        let xr = (r1 * r1 - r2 * r2 + sep * sep) / (2.0 * sep);
        let q = Quad::with_tol(1e-13);
        let mut pts = vec![lo];
        if xr > lo && xr < hi {
            pts.push(xr);
        }
        pts.push(hi);
        pts.windows(2).map(|w| 2.0 * q.integrate(half, w[0], w[1]).unwrap().value).sum()
    }

    #[test]
    fn lens_matches_strip_integral() {
        for &(r1, r2, s) in &[(1.5, 1.5, 2.0), (1.0, 2.5, 2.0), (3.0, 0.5, 2.0), (0.5, 0.5, 2.0), (4.0, 1.0, 2.0)] {
            assert!((lens_area(r1, r2, s) - lens_oracle(r1, r2, s)).abs() < 1e-10, "{r1} {r2} {s}");
        }
    }

    #[test]
    fn equal_snr_reduction() {
        for &s in &[0.5, 1.0, 1.7] {
            for i in 0..50 {
                let g = s * (1.0 + 0.07 * i as f64);
                let a = cdf_gamma_opt_diff(g, 1.3, 1.0, s, s);
                let b = cdf_gamma_opt(g / s, 1.3, 1.0);
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn support() {
        let lb = diff_metric_lower_bound(0.5, 1.0, 1.5);
        assert_eq!(cdf_gamma_opt_diff(lb * 0.999, 1.0, 0.5, 1.0, 1.5), 0.0);
        assert!(cdf_gamma_opt_diff(lb * 1.01, 1.0, 0.5, 1.0, 1.5) > 0.0);
    }
}
