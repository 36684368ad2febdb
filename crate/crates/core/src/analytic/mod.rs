//! Closed-form and quadrature evaluators for the CQI laws.

mod annulus;
mod benchmark;
mod diff_snr;
mod gamma_opt;
mod isotropic;
mod midpoint;
mod sopt;

pub use annulus::ccdf_annulus_metric;
pub use benchmark::{cdf_gamma_c2d, cdf_gamma_mid, cdf_nn, nn_horizon, pdf_gamma_c2d, pdf_gamma_mid, pdf_nn};
pub use diff_snr::{cdf_gamma_opt_diff, lens_area};
pub use gamma_opt::{
    arcsec, ccdf_gamma_opt, cdf_gamma_opt, cdf_gamma_opt_finite, disc_fraction, g_fn, lens_mean_count,
    mean_gamma_opt, pdf_gamma_opt,
};
pub use isotropic::{
    cdf_gamma_opt_isotropic, closed_form_examples, pdf_gamma_opt_isotropic, Circle, ClosedFormExample, Exclusion,
    Gaussian, Homogeneous, IsotropicMeasure,
};
pub use midpoint::{metric_polar, overlap_area, prob_mid_optimal, prob_sufficient};
pub(crate) use midpoint::average_over_mid;
pub use sopt::{cdf_s_opt, pdf_s_opt};

use crate::error::{param, Error, Result};
use crate::model::{diff_metric_lower_bound, PathLossModel};

/// Radial process used by [`Law::GammaOptIsotropic`]. λ comes from the evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsotropicLaw {
    Homogeneous,
    Exclusion { r: f64 },
    Circle { r: f64 },
    Gaussian { n: f64, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    GammaOpt,
    GammaOptFiniteDisc { tau: f64 },
    GammaMid,
    GammaC2D,
    GammaOptIsotropic(IsotropicLaw),
    GammaOptDiffSnr { s1: f64, s2: f64 },
    SOpt { snr: f64, pathloss: PathLossModel },
}

/// A cdf/pdf pair for one CQI law at fixed (λ, d).
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionEvaluator {
    pub law: Law,
    pub lambda: f64,
    pub d: f64,
}

impl DistributionEvaluator {
    pub fn new(law: Law, lambda: f64, d: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return param(format!("lambda must be positive, got {lambda}"));
        }
        if !(d > 0.0 && d.is_finite()) {
            return param(format!("d must be positive, got {d}"));
        }
        match &law {
            Law::GammaOptFiniteDisc { tau } if !(*tau > 0.0) => return param("tau must be positive"),
            Law::GammaOptDiffSnr { s1, s2 } if !(*s1 > 0.0 && *s2 > 0.0) => {
                return param("effective SNRs must be positive")
            }
            Law::SOpt { snr, .. } if !(*snr > 0.0) => return param("snr must be positive"),
            Law::GammaOptIsotropic(IsotropicLaw::Gaussian { n, sigma }) if !(*n > 0.0 && *sigma > 0.0) => {
                return param("Gaussian process needs n > 0 and sigma > 0")
            }
            Law::GammaOptIsotropic(IsotropicLaw::Exclusion { r } | IsotropicLaw::Circle { r }) if !(*r >= 0.0) => {
                return param("radius must be non-negative")
            }
            _ => {}
        }
        Ok(DistributionEvaluator { law, lambda, d })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        let (l, d) = (self.lambda, self.d);
        match &self.law {
            Law::GammaOpt => Ok(cdf_gamma_opt(x, l, d)),
            Law::GammaOptFiniteDisc { tau } => Ok(cdf_gamma_opt_finite(x, l, d, *tau)),
            Law::GammaMid => cdf_gamma_mid(x, l, d),
            Law::GammaC2D => cdf_gamma_c2d(x, l, d),
            Law::GammaOptIsotropic(iso) => match *iso {
                IsotropicLaw::Homogeneous => cdf_gamma_opt_isotropic(x, d, &Homogeneous { lambda: l }, &[]),
                IsotropicLaw::Exclusion { r } => closed_form_examples(x, ClosedFormExample::Exclusion { lambda: l, r }, d),
                IsotropicLaw::Circle { r } => closed_form_examples(x, ClosedFormExample::Circle { lambda: l, r }, d),
                IsotropicLaw::Gaussian { n, sigma } => {
                    closed_form_examples(x, ClosedFormExample::Gaussian { n, sigma }, d)
                }
            },
            Law::GammaOptDiffSnr { s1, s2 } => Ok(cdf_gamma_opt_diff(x, l, d, *s1, *s2)),
            Law::SOpt { snr, pathloss } => Ok(cdf_s_opt(x, l, d, *snr, pathloss)),
        }
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        let (l, d) = (self.lambda, self.d);
        match &self.law {
            Law::GammaOpt => Ok(pdf_gamma_opt(x, l, d)),
            Law::GammaMid => pdf_gamma_mid(x, l, d),
            Law::GammaC2D => pdf_gamma_c2d(x, l, d),
            Law::GammaOptIsotropic(iso) => match *iso {
                IsotropicLaw::Homogeneous => pdf_gamma_opt_isotropic(x, d, &Homogeneous { lambda: l }, &[]),
                IsotropicLaw::Exclusion { r } => pdf_gamma_opt_isotropic(x, d, &Exclusion { lambda: l, r }, &[r]),
                IsotropicLaw::Gaussian { n, sigma } => pdf_gamma_opt_isotropic(x, d, &Gaussian { n, sigma }, &[]),
                IsotropicLaw::Circle { .. } => Err(Error::Unsupported("circle process has no density".into())),
            },
            Law::SOpt { snr, pathloss } => pdf_s_opt(x, l, d, *snr, pathloss),
            Law::GammaOptFiniteDisc { .. } | Law::GammaOptDiffSnr { .. } => {
                Err(Error::Unsupported(format!("pdf of {:?}", self.law)))
            }
        }
    }

    pub fn has_pdf(&self) -> bool {
        match &self.law {
            Law::GammaOptFiniteDisc { .. } | Law::GammaOptDiffSnr { .. } => false,
            Law::GammaOptIsotropic(IsotropicLaw::Circle { .. }) => false,
            Law::SOpt { pathloss, .. } => pathloss.is_differentiable(),
            _ => true,
        }
    }

    /// Lower end of the support.
    pub fn support_min(&self) -> f64 {
        match &self.law {
            Law::GammaOptDiffSnr { s1, s2 } => diff_metric_lower_bound(self.d, *s1, *s2),
            Law::SOpt { .. } => 0.0,
            Law::GammaOptIsotropic(IsotropicLaw::Exclusion { r } | IsotropicLaw::Circle { r }) => {
                (r * r + self.d * self.d).sqrt()
            }
            _ => self.d,
        }
    }

    /// Total mass: 1, or 1 − e^(−mean count) for finite processes.
    pub fn total_mass(&self) -> f64 {
        match &self.law {
            Law::GammaOptFiniteDisc { tau } => -(-self.lambda * std::f64::consts::PI * tau * tau).exp_m1(),
            Law::GammaOptIsotropic(IsotropicLaw::Circle { r }) => {
                -(-2.0 * self.lambda * std::f64::consts::PI * r).exp_m1()
            }
            Law::GammaOptIsotropic(IsotropicLaw::Gaussian { n, .. }) => -(-n).exp_m1(),
            _ => 1.0,
        }
    }

    /// Point beyond which the remaining mass is below 1e−10 (integration horizon).
    pub fn horizon(&self) -> f64 {
        let d = self.d;
        let h = nn_horizon(self.lambda);
        match &self.law {
            Law::GammaOpt | Law::GammaMid => d + h,
            Law::GammaC2D => 2.0 * d + h,
            Law::GammaOptFiniteDisc { tau } => tau + d,
            Law::GammaOptDiffSnr { s1, s2 } => s1.max(*s2) * (d + h),
            Law::SOpt { snr, pathloss } => snr * pathloss.g(d),
            Law::GammaOptIsotropic(iso) => match *iso {
                IsotropicLaw::Homogeneous => d + h,
                IsotropicLaw::Exclusion { r } => (r * r + h * h).sqrt() + d,
                IsotropicLaw::Circle { r } => r + d,
                IsotropicLaw::Gaussian { sigma, n } => d + sigma * (2.0 * (n.max(1.0) * 1e10).ln()).sqrt(),
            },
        }
    }
}
