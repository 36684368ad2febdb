//! Exponential integral and scaled complementary error function.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_FROM: f64 = 50.0;

/// E₁(x) = ∫₁^∞ e^(−tx)/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("E1 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(f_large(x) * (-x).exp())
    }
}

/// f(x) = eˣ·E₁(x), evaluated without forming eˣ for large x.
pub fn f_exp_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("f requires x > 0, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(f_large(x))
    }
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// eˣE₁(x) for x > 1: continued fraction, asymptotic series far out.
fn f_large(x: f64) -> f64 {
    if x > ASYMPTOTIC_FROM {
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..40 {
            let next = -term * k as f64 / x;
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        return sum / x;
    }
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// erfcx(x) = exp(x²)·erfc(x).
pub fn erfc_scaled(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfc_scaled(-x);
    }
    if x <= 5.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), evaluated backwards.
    let mut t = x;
    for n in (1..=80).rev() {
        t = x + (n as f64 / 2.0) / t;
    }
    1.0 / (std::f64::consts::PI.sqrt() * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: direct quadrature of ∫₁^∞ e^(−tx)/t dt by the
    // composite Simpson rule on t = 1/u.
    fn e1_oracle(x: f64) -> f64 {
        let n = 200_000;
        let h = 1.0 / n as f64;
        let g = |u: f64| if u <= 0.0 { 0.0 } else { (-x / u).exp() / u };
        let mut s = g(0.0) + g(1.0);
        for i in 1..n {
            let u = i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(u);
        }
        s * h / 3.0
    }

    #[test]
    fn e1_at_one() {
        let v = exp_integral_e1(1.0).unwrap();
        assert!((v - 0.219_383_934_395_520_3).abs() < 1e-13);
        assert!((v - e1_oracle(1.0)).abs() < 1e-10);
    }

    #[test]
    fn e1_branch_agreement() {
        for &x in &[0.05, 0.5, 0.99, 1.01, 2.0, 5.0, 12.0] {
            let o = e1_oracle(x);
            let v = exp_integral_e1(x).unwrap();
            assert!(((v - o) / o).abs() < 1e-8, "x={x} v={v} o={o}");
        }
    }

    #[test]
    fn f_at_one() {
        let v = f_exp_e1(1.0).unwrap();
        assert!((v - 0.596_347_362_323_194).abs() < 1e-12);
    }

    #[test]
    fn f_asymptotic_matches_fraction() {
        for &x in &[49.0, 50.0, 51.0, 80.0] {
            let cf = {
                let mut b = x + 1.0;
                let mut c = 1e300;
                let mut d = 1.0 / b;
                let mut h = d;
                for i in 1..2000 {
                    let an = -((i * i) as f64);
                    b += 2.0;
                    d = 1.0 / (an * d + b);
                    c = b + an / c;
                    h *= c * d;
                }
                h
            };
            let v = f_exp_e1(x).unwrap();
            assert!(((v - cf) / cf).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn f_sandwich() {
        for &x in &[0.1, 1.0, 10.0] {
            let f = f_exp_e1(x).unwrap();
            assert!(0.5 * (1.0 + 2.0 / x).ln() < f);
            assert!(f < (1.0 + 1.0 / x).ln());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(f_exp_e1(-1.0).is_err());
    }

    #[test]
    fn erfcx_values() {
        assert_eq!(erfc_scaled(0.0), 1.0);
        assert!((erfc_scaled(1.0) - 0.427_583_576_155_807).abs() < 1e-14);
        // Continuity across the switch to the continued fraction.
        let a = (25.0f64).exp() * libm::erfc(5.0);
        let b = {
            let x: f64 = 5.0;
            let mut t = x;
            for n in (1..=80).rev() {
                t = x + (n as f64 / 2.0) / t;
            }
            1.0 / (std::f64::consts::PI.sqrt() * t)
        };
        assert!(((a - b) / a).abs() < 1e-12);
        // Large-argument asymptote 1/(x√π).
        let x = 1e4;
        assert!((erfc_scaled(x) * x * std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-8);
    }
}
