//! Seeded samplers for relay-location processes.
//!
//! Random streams: the 64-bit seed fills the first 8 bytes (little endian) of a
//! ChaCha20 key whose remaining 24 bytes are zero; the stream id selects the
//! ChaCha stream. Trial `i` of a batch uses stream `i`.

use crate::error::{param, Result};
use crate::model::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::PI;
use std::io::Write;

/// Generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessSpec {
    /// HPPP of intensity `lambda` on the disc of radius `tau`.
    Hppp { lambda: f64, tau: f64 },
    /// HPPP on the annulus `r ≤ |x| ≤ tau`.
    HpppWithExclusion { lambda: f64, r: f64, tau: f64 },
    /// Poisson points on the circle of radius `r`, `lambda` per unit length.
    CirclePpp { lambda: f64, r: f64 },
    /// Poisson(n) points with Gaussian spread `sigma` around the origin.
    GaussianPpp { n: f64, sigma: f64 },
    /// Exactly `count` uniform points on `psi ≤ |x| ≤ tau`.
    AnnulusUniform { psi: f64, tau: f64, count: usize },
}

impl ProcessSpec {
    /// HPPP with the default window radius max(6d, 6/√λ).
    pub fn hppp_default(lambda: f64, d: f64) -> Self {
        ProcessSpec::Hppp {
            lambda,
            tau: default_tau(lambda, d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                param(format!("{name} must be positive and finite, got {v}"))
            }
        };
        match *self {
            ProcessSpec::Hppp { lambda, tau } => {
                pos("lambda", lambda)?;
                pos("tau", tau)
            }
            ProcessSpec::HpppWithExclusion { lambda, r, tau } => {
                pos("lambda", lambda)?;
                pos("tau", tau)?;
                if !(r >= 0.0 && r < tau) {
                    return param(format!("exclusion radius must satisfy 0 <= r < tau, got r={r}, tau={tau}"));
                }
                Ok(())
            }
            ProcessSpec::CirclePpp { lambda, r } => {
                pos("lambda", lambda)?;
                pos("r", r)
            }
            ProcessSpec::GaussianPpp { n, sigma } => {
                pos("n", n)?;
                pos("sigma", sigma)
            }
            ProcessSpec::AnnulusUniform { psi, tau, .. } => {
                pos("tau", tau)?;
                if !(psi >= 0.0 && psi <= tau) {
                    return param(format!("annulus needs 0 <= psi <= tau, got psi={psi}, tau={tau}"));
                }
                Ok(())
            }
        }
    }

    /// Expected number of points.
    pub fn mean_count(&self) -> f64 {
        match *self {
            ProcessSpec::Hppp { lambda, tau } => lambda * PI * tau * tau,
            ProcessSpec::HpppWithExclusion { lambda, r, tau } => lambda * PI * (tau * tau - r * r),
            ProcessSpec::CirclePpp { lambda, r } => 2.0 * lambda * PI * r,
            ProcessSpec::GaussianPpp { n, .. } => n,
            ProcessSpec::AnnulusUniform { count, .. } => count as f64,
        }
    }
}

pub fn default_tau(lambda: f64, d: f64) -> f64 {
    (6.0 * d).max(6.0 / lambda.sqrt())
}

/// One realization of a relay process.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayField {
    pub points: Vec<Point2>,
    pub spec: ProcessSpec,
    pub seed: u64,
    pub stream: u64,
}

impl RelayField {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes `x,y` rows with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(b"x,y\n")?;
        for p in &self.points {
            writeln!(w, "{},{}", p.x, p.y)?;
        }
        Ok(())
    }
}

fn poisson_count<R: Rng>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

fn polar(r: f64, theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    Point2::new(r * c, r * s)
}

/// Draws the points of `spec` from `rng`.
pub fn sample_points<R: Rng>(spec: &ProcessSpec, rng: &mut R) -> Result<Vec<Point2>> {
    spec.validate()?;
    let pts = match *spec {
        ProcessSpec::Hppp { tau, .. } => {
            let n = poisson_count(spec.mean_count(), rng);
            (0..n)
                .map(|_| {
                    let r = tau * rng.gen::<f64>().sqrt();
                    polar(r, 2.0 * PI * rng.gen::<f64>())
                })
                .collect()
        }
        ProcessSpec::HpppWithExclusion { r: r0, tau, .. } => {
            let n = poisson_count(spec.mean_count(), rng);
            annulus_points(r0, tau, n, rng)
        }
        ProcessSpec::CirclePpp { r, .. } => {
            let n = poisson_count(spec.mean_count(), rng);
            (0..n).map(|_| polar(r, 2.0 * PI * rng.gen::<f64>())).collect()
        }
        ProcessSpec::GaussianPpp { n, sigma } => {
            let k = poisson_count(n, rng);
            (0..k)
                .map(|_| {
                    let u = 1.0 - rng.gen::<f64>();
                    let r = sigma * (-2.0 * u.ln()).sqrt();
                    polar(r, 2.0 * PI * rng.gen::<f64>())
                })
                .collect()
        }
        ProcessSpec::AnnulusUniform { psi, tau, count } => annulus_points(psi, tau, count, rng),
    };
    Ok(pts)
}

fn annulus_points<R: Rng>(r0: f64, tau: f64, n: usize, rng: &mut R) -> Vec<Point2> {
    let (a, b) = (r0 * r0, tau * tau);
    (0..n)
        .map(|_| {
            let r = (a + rng.gen::<f64>() * (b - a)).sqrt();
            polar(r, 2.0 * PI * rng.gen::<f64>())
        })
        .collect()
}

/// Samples `spec` on stream 0 of `seed`.
pub fn sample(spec: ProcessSpec, seed: u64) -> Result<RelayField> {
    sample_stream(spec, seed, 0)
}

pub fn sample_stream(spec: ProcessSpec, seed: u64, stream: u64) -> Result<RelayField> {
    let mut rng = rng_for(seed, stream);
    let points = sample_points(&spec, &mut rng)?;
    Ok(RelayField { points, spec, seed, stream })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// HPPP on the half of the disc with x ≥ 0 (right) or x ≤ 0 (left).
pub fn sample_half_disc_with<R: Rng>(lambda: f64, tau: f64, side: Side, rng: &mut R) -> Result<Vec<Point2>> {
    ProcessSpec::Hppp { lambda, tau }.validate()?;
    let n = poisson_count(0.5 * lambda * PI * tau * tau, rng);
    Ok((0..n)
        .map(|_| {
            let r = tau * rng.gen::<f64>().sqrt();
            let theta = PI * (rng.gen::<f64>() - 0.5);
            let p = polar(r, theta);
            let x = p.x.abs();
            match side {
                Side::Right => Point2::new(x, p.y),
                Side::Left => Point2::new(-x, p.y),
            }
        })
        .collect())
}

pub fn sample_half_disc(lambda: f64, tau: f64, side: Side, seed: u64) -> Result<RelayField> {
    let mut rng = rng_for(seed, 0);
    let points = sample_half_disc_with(lambda, tau, side, &mut rng)?;
    Ok(RelayField {
        points,
        spec: ProcessSpec::Hppp { lambda, tau },
        seed,
        stream: 0,
    })
}
