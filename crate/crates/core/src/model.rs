//! Geometry, path loss, fading and link budget.

use crate::error::{param, Error, Result};
use crate::numerics::solve_monotone;

/// A point in the plane, in normalized distance units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Source at (−d, 0), destination at (d, 0), midpoint at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkGeometry {
    d: f64,
}

impl NetworkGeometry {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return param(format!("half distance d must be positive, got {d}"));
        }
        Ok(NetworkGeometry { d })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn source(&self) -> Point2 {
        Point2::new(-self.d, 0.0)
    }

    pub fn destination(&self) -> Point2 {
        Point2::new(self.d, 0.0)
    }
}

/// ŝ(p) = max(‖x_s − p‖, ‖p − x_d‖).
pub fn selection_metric(p: Point2, geom: &NetworkGeometry) -> f64 {
    let d = geom.d;
    let y2 = p.y * p.y;
    let a = (p.x + d) * (p.x + d) + y2;
    let b = (p.x - d) * (p.x - d) + y2;
    a.max(b).sqrt()
}

/// ŝ_diff(p) = max(S̃₁‖x_s − p‖, S̃₂‖p − x_d‖) with S̃ᵢ = snrᵢ^(−1/α).
pub fn selection_metric_diff(p: Point2, geom: &NetworkGeometry, budget: &LinkBudget, alpha: f64) -> f64 {
    let (s1, s2) = budget.effective_snrs(alpha);
    (s1 * p.dist(&geom.source())).max(s2 * p.dist(&geom.destination()))
}

/// Infimum of ŝ_diff over the plane.
pub fn diff_metric_lower_bound(d: f64, s1: f64, s2: f64) -> f64 {
    2.0 * d * s1 * s2 / (s1 + s2)
}

pub fn snr_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    NoFading,
    /// |H|² exponential with unit mean.
    RayleighUnitPower,
}

/// Non-increasing path-loss function G.
#[derive(Debug, Clone, PartialEq)]
pub enum PathLossModel {
    /// G(x) = x^(−α).
    PowerLaw { alpha: f64 },
    /// G(x) = 1/(1 + x^α).
    ShiftedPowerLaw { alpha: f64 },
    /// Piecewise-linear through `(xs[i], gs[i])`, constant before the first knot
    /// and zero after the last one.
    TabulatedMonotone { xs: Vec<f64>, gs: Vec<f64> },
}

impl PathLossModel {
    pub fn power_law(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PathLossModel::PowerLaw { alpha })
    }

    pub fn shifted_power_law(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PathLossModel::ShiftedPowerLaw { alpha })
    }

    /// Validates knots: finite, x strictly increasing from ≥ 0, G non-increasing,
    /// non-negative and ending at 0.
    pub fn tabulated(xs: Vec<f64>, gs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != gs.len() {
            return param("tabulated path loss needs at least two (x, G) knots of equal length");
        }
        if xs.iter().chain(gs.iter()).any(|v| !v.is_finite()) {
            return param("tabulated path loss knots must be finite");
        }
        if xs[0] < 0.0 {
            return param("tabulated path loss knots must start at x >= 0");
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return param("tabulated path loss x knots must be strictly increasing");
            }
        }
        for w in gs.windows(2) {
            if w[1] > w[0] {
                return param("tabulated path loss G values must be non-increasing");
            }
        }
        if gs.iter().any(|&g| g < 0.0) {
            return param("tabulated path loss G values must be non-negative");
        }
        if *gs.last().unwrap() != 0.0 {
            return param("tabulated path loss must decay to G = 0 at its last knot");
        }
        Ok(PathLossModel::TabulatedMonotone { xs, gs })
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            PathLossModel::PowerLaw { alpha } | PathLossModel::ShiftedPowerLaw { alpha } => Some(*alpha),
            PathLossModel::TabulatedMonotone { .. } => None,
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        match self {
            PathLossModel::PowerLaw { alpha } => x.powf(-alpha),
            PathLossModel::ShiftedPowerLaw { alpha } => 1.0 / (1.0 + x.powf(*alpha)),
            PathLossModel::TabulatedMonotone { xs, gs } => {
                if x <= xs[0] {
                    return gs[0];
                }
                if x >= xs[xs.len() - 1] {
                    return 0.0;
                }
                let i = xs.partition_point(|&k| k <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                gs[i] + t * (gs[i + 1] - gs[i])
            }
        }
    }

    /// Generalized inverse inf{x ≥ 0 : G(x) ≤ s}. Returns ∞ when no such x exists.
    pub fn g_inv(&self, s: f64) -> f64 {
        match self {
            PathLossModel::PowerLaw { alpha } => {
                if s <= 0.0 {
                    f64::INFINITY
                } else {
                    s.powf(-1.0 / alpha)
                }
            }
            PathLossModel::ShiftedPowerLaw { alpha } => {
                if s <= 0.0 {
                    f64::INFINITY
                } else if s >= 1.0 {
                    0.0
                } else {
                    (1.0 / s - 1.0).powf(1.0 / alpha)
                }
            }
            PathLossModel::TabulatedMonotone { xs, gs } => {
                if s < 0.0 {
                    return f64::INFINITY;
                }
                if gs[0] <= s {
                    return 0.0;
                }
                // First knot index with G ≤ s; the last knot has G = 0 so one exists.
                let j = gs.partition_point(|&g| g > s);
                let (x0, x1, g0, g1) = (xs[j - 1], xs[j], gs[j - 1], gs[j]);
                x0 + (g0 - s) / (g0 - g1) * (x1 - x0)
            }
        }
    }

    /// G′(x). Tabulated models are not differentiable at their knots.
    pub fn g_prime(&self, x: f64) -> Result<f64> {
        match self {
            PathLossModel::PowerLaw { alpha } => Ok(-alpha * x.powf(-alpha - 1.0)),
            PathLossModel::ShiftedPowerLaw { alpha } => {
                let xa = x.powf(*alpha);
                Ok(-alpha * x.powf(alpha - 1.0) / ((1.0 + xa) * (1.0 + xa)))
            }
            PathLossModel::TabulatedMonotone { .. } => Err(Error::Unsupported(
                "derivative of a tabulated path-loss model".into(),
            )),
        }
    }

    pub fn is_differentiable(&self) -> bool {
        !matches!(self, PathLossModel::TabulatedMonotone { .. })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return param(format!("path-loss exponent must be positive, got {alpha}"));
    }
    Ok(())
}

/// Generalized inverse of any non-increasing G by bisection on `[0, hi]`,
/// relative tolerance 1e−12. Used when no closed form is available.
pub fn generalized_inverse_numeric<F: Fn(f64) -> f64>(g: F, s: f64, hi: f64) -> Result<f64> {
    if g(0.0) <= s {
        return Ok(0.0);
    }
    let mut hi = hi;
    let mut n = 0;
    while g(hi) > s {
        hi *= 2.0;
        n += 1;
        if n > 1100 || !hi.is_finite() {
            return Ok(f64::INFINITY);
        }
    }
    let ind = |x: f64| if g(x) <= s { 1.0 } else { 0.0 };
    solve_monotone(ind, 0.5, 0.0, hi, 1e-12 * hi)
}

/// SNR values and target rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub snr: f64,
    pub snr1: f64,
    pub snr2: f64,
    pub rho_target: f64,
}

impl LinkBudget {
    pub fn homogeneous(snr: f64, rho_target: f64) -> Result<Self> {
        Self::new(snr, snr, snr, rho_target)
    }

    pub fn new(snr: f64, snr1: f64, snr2: f64, rho_target: f64) -> Result<Self> {
        for (name, v) in [("snr", snr), ("snr1", snr1), ("snr2", snr2)] {
            if !(v > 0.0 && v.is_finite()) {
                return param(format!("{name} must be positive, got {v}"));
            }
        }
        if !(rho_target >= 0.0) {
            return param(format!("target rate must be non-negative, got {rho_target}"));
        }
        Ok(LinkBudget { snr, snr1, snr2, rho_target })
    }

    /// (snr₁^(−1/α), snr₂^(−1/α)).
    pub fn effective_snrs(&self, alpha: f64) -> (f64, f64) {
        (self.snr1.powf(-1.0 / alpha), self.snr2.powf(-1.0 / alpha))
    }
}
