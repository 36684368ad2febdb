//! Γ_opt for isotropic Poisson processes and the three worked examples.

use super::gamma_opt::{arcsec, g_fn};
use crate::error::{Error, Result};
use crate::numerics::Quad;
use std::f64::consts::{FRAC_PI_2, PI};

/// Mean measure of balls centred at the origin, optionally with a radial intensity.
pub trait IsotropicMeasure {
    /// Λ(B(0, r)).
    fn ball(&self, r: f64) -> f64;
    /// λ(ψ) at radius ψ, when the measure has a density.
    fn intensity(&self, _psi: f64) -> Option<f64> {
        None
    }
    /// Total mean count Λ(R²).
    fn total(&self) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homogeneous {
    pub lambda: f64,
}

/// HPPP outside the disc of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    pub lambda: f64,
    pub r: f64,
}

/// Poisson points on the circle of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub lambda: f64,
    pub r: f64,
}

/// Intensity n/(2πσ²)·exp(−‖x‖²/(2σ²)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub n: f64,
    pub sigma: f64,
}

impl IsotropicMeasure for Homogeneous {
    fn ball(&self, r: f64) -> f64 {
        self.lambda * PI * r * r
    }
    fn intensity(&self, _psi: f64) -> Option<f64> {
        Some(self.lambda)
    }
}

impl IsotropicMeasure for Exclusion {
    fn ball(&self, r: f64) -> f64 {
        if r < self.r {
            0.0
        } else {
            self.lambda * PI * (r * r - self.r * self.r)
        }
    }
    fn intensity(&self, psi: f64) -> Option<f64> {
        Some(if psi < self.r { 0.0 } else { self.lambda })
    }
}

impl IsotropicMeasure for Circle {
    fn ball(&self, r: f64) -> f64 {
        if r < self.r {
            0.0
        } else {
            2.0 * self.lambda * PI * self.r
        }
    }
    fn total(&self) -> f64 {
        2.0 * self.lambda * PI * self.r
    }
}

impl IsotropicMeasure for Gaussian {
    fn ball(&self, r: f64) -> f64 {
        -self.n * (-r * r / (2.0 * self.sigma * self.sigma)).exp_m1()
    }
    fn intensity(&self, psi: f64) -> Option<f64> {
        let s2 = self.sigma * self.sigma;
        Some(self.n / (2.0 * PI * s2) * (-psi * psi / (2.0 * s2)).exp())
    }
    fn total(&self) -> f64 {
        self.n
    }
}

/// Radius of the boundary of {ŝ ≤ γ} at polar angle θ ∈ [0, π/2].
fn lens_radius(gamma: f64, d: f64, theta: f64) -> f64 {
    (gamma * gamma - d * d * theta.sin().powi(2)).max(0.0).sqrt() - d * theta.cos()
}

/// Angle where the lens boundary crosses radius r, if inside (0, π/2).
fn crossing_angle(gamma: f64, d: f64, r: f64) -> Option<f64> {
    if r <= 0.0 {
        return None;
    }
    let c = (gamma * gamma - d * d - r * r) / (2.0 * d * r);
    (c > -1.0 && c < 1.0).then(|| c.acos())
}

fn integrate_angles<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut pts = vec![0.0];
    pts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < FRAC_PI_2));
    pts.push(FRAC_PI_2);
    let q = Quad::with_tol(tol);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += q.integrate(&mut f, w[0], w[1])?.value;
    }
    Ok(total)
}

/// F(γ) = 1 − exp(−(2/π)∫₀^{π/2} Λ(B(0, ρ(θ))) dθ). `breaks` lists radii where Λ is not smooth.
pub fn cdf_gamma_opt_isotropic<M: IsotropicMeasure + ?Sized>(gamma: f64, d: f64, measure: &M, breaks: &[f64]) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    let angles: Vec<f64> = breaks.iter().filter_map(|&r| crossing_angle(gamma, d, r)).collect();
    let v = integrate_angles(|t| measure.ball(lens_radius(gamma, d, t)), &angles, 1e-13)?;
    Ok(-(-2.0 / PI * v).exp_m1())
}

/// Density for measures with a radial intensity λ(ψ).
pub fn pdf_gamma_opt_isotropic<M: IsotropicMeasure + ?Sized>(gamma: f64, d: f64, measure: &M, breaks: &[f64]) -> Result<f64> {
    if gamma <= d {
        return Ok(0.0);
    }
    if measure.intensity(0.0).is_none() {
        return Err(Error::Unsupported("isotropic pdf needs a radial intensity".into()));
    }
    let angles: Vec<f64> = breaks.iter().filter_map(|&r| crossing_angle(gamma, d, r)).collect();
    let dens = integrate_angles(
        |t| {
            let rho = lens_radius(gamma, d, t);
            let root = (gamma * gamma - d * d * t.sin().powi(2)).sqrt();
            gamma * rho / root * measure.intensity(rho).unwrap_or(0.0)
        },
        &angles,
        1e-13,
    )?;
    let mass = integrate_angles(|t| measure.ball(lens_radius(gamma, d, t)), &angles, 1e-13)?;
    Ok(4.0 * dens * (-2.0 / PI * mass).exp())
}

/// Closed-form examples of the isotropic law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormExample {
    Exclusion { lambda: f64, r: f64 },
    Circle { lambda: f64, r: f64 },
    Gaussian { n: f64, sigma: f64 },
}

pub fn closed_form_examples(gamma: f64, variant: ClosedFormExample, d: f64) -> Result<f64> {
    match variant {
        ClosedFormExample::Exclusion { lambda, r } => Ok(exclusion_cdf(gamma, lambda, r, d)),
        ClosedFormExample::Circle { lambda, r } => Ok(circle_cdf(gamma, lambda, r, d)),
        ClosedFormExample::Gaussian { n, sigma } => gaussian_cdf(gamma, n, sigma, d),
    }
}

fn exclusion_cdf(gamma: f64, lambda: f64, r: f64, d: f64) -> f64 {
    if gamma <= (r * r + d * d).sqrt() {
        return 0.0;
    }
    let x = gamma / d;
    if gamma <= r + d {
        let c = (gamma * gamma - d * d - r * r) / (2.0 * d * r);
        let b = ((d + r - gamma) * (d + r + gamma) * (gamma + d - r) * (gamma + r - d)).max(0.0).sqrt() / (2.0 * d * r);
        let arccsc = (b / x).clamp(-1.0, 1.0).asin();
        let i = x * x * (arcsec(x) + arccsc - c.clamp(-1.0, 1.0).acos()) + b * ((x * x - b * b).max(0.0).sqrt() - c)
            - (x * x - 1.0).sqrt();
        let e = -2.0 * lambda * d * d * i + 2.0 * lambda * r * r * c.clamp(-1.0, 1.0).asin();
        return -e.exp_m1();
    }
    -(-2.0 * lambda * d * d * g_fn(x) + lambda * PI * r * r).exp_m1()
}

fn circle_cdf(gamma: f64, lambda: f64, r: f64, d: f64) -> f64 {
    if gamma <= (r * r + d * d).sqrt() {
        0.0
    } else if gamma <= r + d {
        let c = ((gamma * gamma - d * d - r * r) / (2.0 * d * r)).clamp(-1.0, 1.0);
        -(-4.0 * lambda * r * c.asin()).exp_m1()
    } else {
        -(-2.0 * lambda * PI * r).exp_m1()
    }
}

fn gaussian_cdf(gamma: f64, n: f64, sigma: f64, d: f64) -> Result<f64> {
    if gamma < d {
        return Ok(0.0);
    }
    let s2 = 2.0 * sigma * sigma;
    let x2 = (gamma / d) * (gamma / d);
    // u = sin φ removes the 1/√(1 − u²) endpoint singularity.
    let r = Quad::with_tol(1e-12).integrate(
        |phi| {
            let (u, cu) = phi.sin_cos();
            let inner = 1.0 - 2.0 * u * u - 2.0 * cu * (x2 - u * u).max(0.0).sqrt();
            (-(d * d) / s2 * inner - gamma * gamma / s2).exp()
        },
        0.0,
        FRAC_PI_2,
    )?;
    let e = -n + 2.0 * n / PI * r.value;
    Ok(-e.min(0.0).exp_m1())
}
