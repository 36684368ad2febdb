//! P(ŝ(U) > t) for U uniform on the annulus ψ ≤ |x| ≤ τ.

use crate::error::{param, Result};
use std::f64::consts::PI;

/// Requires τ ≥ √(ψ² + 2dψ) and ψ < τ.
pub fn ccdf_annulus_metric(t: f64, psi: f64, tau: f64, d: f64) -> Result<f64> {
    if !(d > 0.0 && psi >= 0.0 && tau > psi) {
        return param(format!("annulus needs d > 0 and 0 <= psi < tau, got d={d}, psi={psi}, tau={tau}"));
    }
    if tau < (psi * psi + 2.0 * d * psi).sqrt() {
        return param(format!("annulus law requires tau >= sqrt(psi^2 + 2 d psi), got psi={psi}, tau={tau}, d={d}"));
    }
    Ok(ccdf_unchecked(t, psi, tau, d))
}

fn ccdf_unchecked(t: f64, psi: f64, tau: f64, d: f64) -> f64 {
    let area = tau * tau - psi * psi;
    let t2 = t * t;
    let p = |y: f64| {
        let r = (t2 - y * y).max(0.0).sqrt();
        2.0 * y * r / (PI * area) + 2.0 * t2 * y.atan2(r) / (PI * area)
    };
    if t < (psi * psi + d * d).sqrt() {
        1.0
    } else if t < psi + d {
        let a = ((t2 - psi * psi - d * d) / (2.0 * d * psi)).clamp(-1.0, 1.0).acos();
        (tau * tau - t2) / area + (2.0 * a * (t2 - psi * psi) + d * d * (2.0 * a).sin()) / (PI * area) + p(d)
            - p(d * a.sin())
    } else if t < (tau * tau + d * d).sqrt() {
        (tau * tau - t2) / area + p(d)
    } else if t < tau + d {
        let b = ((t2 - tau * tau - d * d) / (2.0 * d * tau)).clamp(-1.0, 1.0).acos();
        (2.0 * b * (tau * tau - t2) - d * d * (2.0 * b).sin()) / (PI * area) + p(d * b.sin())
    } else {
        0.0
    }
}
