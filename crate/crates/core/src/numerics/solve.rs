//! Bisection for monotone scalar equations.

use crate::error::{Error, Result};

/// Finds x in `[lo, hi]` with `f(x) = target` for monotone `f`, to width `tol` in x.
pub fn solve_monotone<F: FnMut(f64) -> f64>(mut f: F, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo) - target;
    let f_hi = f(hi) - target;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: f_lo + target,
            f_hi: f_hi + target,
            target,
        });
    }
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid) - target;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Like [`solve_monotone`] but doubles the upper end until the target is bracketed.
/// `f` must be monotone and unbounded in the direction of growth.
pub fn solve_monotone_upward<F: FnMut(f64) -> f64>(mut f: F, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let below = f(lo) < target;
    let mut hi = hi.max(lo + 1e-3);
    for _ in 0..200 {
        let v = f(hi);
        if (v >= target) == below {
            return solve_monotone(f, target, lo, hi, tol);
        }
        hi = lo + 2.0 * (hi - lo);
    }
    Err(Error::Bracket {
        lo,
        hi,
        f_lo: f(lo),
        f_hi: f(hi),
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::f_exp_e1;

    #[test]
    fn s_star_at_rho_03() {
        let rate = |s: f64| f_exp_e1(1.0 / s).unwrap() / (2.0 * std::f64::consts::LN_2);
        let s = solve_monotone(rate, 0.3, 1e-6, 10.0, 1e-10).unwrap();
        assert!((s - 0.6022).abs() < 1e-3);
    }

    #[test]
    fn unbracketed() {
        assert!(matches!(solve_monotone(|x| x, 5.0, 0.0, 1.0, 1e-10), Err(Error::Bracket { .. })));
    }

    #[test]
    fn decreasing_function() {
        let x = solve_monotone(|x| -x * x, -2.0, 0.0, 3.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn widening_invariance() {
        let a = solve_monotone(|x| x.powi(3), 2.0, 0.0, 2.0, 1e-10).unwrap();
        let b = solve_monotone(|x| x.powi(3), 2.0, -5.0, 40.0, 1e-10).unwrap();
        assert!((a - b).abs() < 2e-10);
    }

    #[test]
    fn upward_expansion() {
        let x = solve_monotone_upward(|x| x.ln(), 10.0, 1.0, 2.0, 1e-9).unwrap();
        assert!((x - 10f64.exp()).abs() < 1e-6);
    }
}
