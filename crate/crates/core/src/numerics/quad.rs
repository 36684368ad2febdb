//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value, error estimate and evaluation count of an integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for [`Quad::integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad {
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut bad = !fc.is_finite();
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        bad |= !s.is_finite();
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    if bad {
        return Err(Error::Numeric {
            message: format!("non-finite integrand on [{a}, {b}]"),
            value: f64::NAN,
            abs_error: f64::NAN,
            evaluations: 15,
        });
    }
    Ok((k * h, ((k - g) * h).abs()))
}

impl Quad {
    pub fn with_tol(abs_tol: f64) -> Self {
        Quad {
            abs_tol,
            ..Quad::default()
        }
    }

    /// Integrates `f` over the finite interval `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<QuadratureResult> {
        if a == b {
            return Ok(QuadratureResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                evaluations: 0,
            });
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("finite limits required, got [{a}, {b}]")));
        }
        if a > b {
            let r = self.integrate(f, b, a)?;
            return Ok(QuadratureResult { value: -r.value, ..r });
        }
        let (v, e) = gk15(&mut f, a, b)?;
        let mut evals = 15;
        let mut heap = BinaryHeap::new();
        heap.push(Segment { a, b, value: v, err: e });
        let mut total = v;
        let mut total_err = e;
        // Segments too narrow to split further; their error is kept in the total.
        let mut frozen_value = 0.0;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= target {
                break;
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Numeric {
                    message: format!("quadrature budget of {} intervals exceeded", self.max_intervals),
                    value: total,
                    abs_error: total_err,
                    evaluations: evals,
                });
            }
            let seg = match heap.pop() {
                Some(s) => s,
                None => break,
            };
            let m = 0.5 * (seg.a + seg.b);
            if m <= seg.a || m >= seg.b || (seg.b - seg.a) < 1e-15 * seg.a.abs().max(seg.b.abs()) {
                frozen_value += seg.value;
                if heap.is_empty() {
                    break;
                }
                continue;
            }
            let (v1, e1) = gk15(&mut f, seg.a, m)?;
            let (v2, e2) = gk15(&mut f, m, seg.b)?;
            evals += 30;
            total += v1 + v2 - seg.value;
            total_err += e1 + e2 - seg.err;
            heap.push(Segment { a: seg.a, b: m, value: v1, err: e1 });
            heap.push(Segment { a: m, b: seg.b, value: v2, err: e2 });
        }
        // Resum to limit drift from the incremental updates.
        let value = heap.iter().map(|s| s.value).sum::<f64>() + frozen_value;
        Ok(QuadratureResult {
            value,
            abs_error_estimate: total_err.max(0.0),
            evaluations: evals,
        })
    }

    /// Integrates `f` over `[a, ∞)` via `x = a + t/(1-t)`.
    pub fn integrate_to_inf<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64) -> Result<QuadratureResult> {
        self.integrate(
            |t| {
                let s = 1.0 - t;
                let x = a + t / s;
                if !x.is_finite() {
                    return 0.0;
                }
                let y = f(x);
                if y == 0.0 {
                    0.0
                } else {
                    y / (s * s)
                }
            },
            0.0,
            1.0,
        )
    }
}

/// Adaptive quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
/// An infinite `b` selects the semi-infinite map.
pub fn quad_adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let q = Quad::with_tol(tol);
    if b == f64::INFINITY {
        q.integrate_to_inf(f, a)
    } else {
        q.integrate(f, a, b)
    }
}
