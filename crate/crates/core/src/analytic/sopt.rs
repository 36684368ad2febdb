//! Law of S_opt = snr·G(Γ_opt).

use super::gamma_opt::{ccdf_gamma_opt, pdf_gamma_opt};
use crate::error::{Error, Result};
use crate::model::PathLossModel;

/// F_Sopt(s) = 1 − F_Γopt(G⁻¹(s/snr)); equal to 1 for s ≥ snr·G(d).
pub fn cdf_s_opt(s: f64, lambda: f64, d: f64, snr: f64, g: &PathLossModel) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= snr * g.g(d) {
        return 1.0;
    }
    ccdf_gamma_opt(g.g_inv(s / snr), lambda, d)
}

pub fn pdf_s_opt(s: f64, lambda: f64, d: f64, snr: f64, g: &PathLossModel) -> Result<f64> {
    if !g.is_differentiable() {
        return Err(Error::Unsupported("pdf of S_opt needs a differentiable path-loss model".into()));
    }
    if s <= 0.0 || s >= snr * g.g(d) {
        return Ok(0.0);
    }
    let x = g.g_inv(s / snr);
    let slope = g.g_prime(x)?;
    if slope == 0.0 {
        return Err(Error::Numeric {
            message: format!("G' vanishes at x = {x}"),
            value: f64::NAN,
            abs_error: f64::NAN,
            evaluations: 0,
        });
    }
    Ok(pdf_gamma_opt(x, lambda, d) / (snr * slope.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Quad;

    #[test]
    fn boundaries() {
        let g = PathLossModel::power_law(4.0).unwrap();
        assert_eq!(cdf_s_opt(0.0, 1.0, 1.0, 3.0, &g), 0.0);
        assert_eq!(cdf_s_opt(3.0, 1.0, 1.0, 3.0, &g), 1.0);
        assert_eq!(cdf_s_opt(5.0, 1.0, 1.0, 3.0, &g), 1.0);
    }

    #[test]
    fn pdf_integrates_to_one() {
        let g = PathLossModel::power_law(4.0).unwrap();
        let snr = 3.16228;
        let r = Quad::with_tol(1e-10)
            .integrate(|s| pdf_s_opt(s, 1.0, 1.0, snr, &g).unwrap(), 0.0, snr * g.g(1.0))
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tabulated_pdf_unsupported() {
        let g = PathLossModel::tabulated(vec![0.0, 5.0], vec![1.0, 0.0]).unwrap();
        assert!(matches!(pdf_s_opt(0.5, 1.0, 1.0, 1.0, &g), Err(Error::Unsupported(_))));
        let c = cdf_s_opt(0.5, 1.0, 1.0, 1.0, &g);
        assert!(c > 0.0 && c < 1.0);
    }
}
