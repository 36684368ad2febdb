//! Location-based relay selection policies.

use crate::error::{Error, Result};
use crate::model::{selection_metric, selection_metric_diff, LinkBudget, NetworkGeometry, Point2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyKind {
    Optimum,
    MidPoint,
    ClosestToDestination,
    ClosestToSource,
    /// Relays with ŝ ≤ T report; the best reporter is chosen.
    ThresholdFeedback(f64),
    /// Argmin of ŝ_diff with the given path-loss exponent.
    OptimumDiffSnr { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyOutcome {
    pub selected: Option<Point2>,
    pub index: Option<usize>,
    /// CQI at the selected relay: ŝ, or ŝ_diff for [`PolicyKind::OptimumDiffSnr`].
    pub gamma: Option<f64>,
    /// Reporting relays. Without a threshold every relay reports.
    pub n_feedback: usize,
    pub second_nearest_norm: Option<f64>,
}

/// Index of the smallest key; ties go to the lowest index.
fn argmin<I: Iterator<Item = f64>>(it: I) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in it.enumerate() {
        match best {
            Some((_, b)) if v >= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Norms of the nearest and second nearest points to the origin, with the nearest index.
fn two_nearest(points: &[Point2]) -> Option<(usize, f64, Option<f64>)> {
    let mut first: Option<(usize, f64)> = None;
    let mut second: Option<f64> = None;
    for (i, p) in points.iter().enumerate() {
        let n = p.norm();
        match first {
            None => first = Some((i, n)),
            Some((_, f)) if n < f => {
                second = Some(f);
                first = Some((i, n));
            }
            _ => {
                if second.map_or(true, |s| n < s) {
                    second = Some(n);
                }
            }
        }
    }
    first.map(|(i, n)| (i, n, second))
}

pub fn select(points: &[Point2], kind: PolicyKind, geom: &NetworkGeometry, budget: &LinkBudget) -> Result<PolicyOutcome> {
    let near = two_nearest(points);
    let second_nearest_norm = near.and_then(|t| t.2);
    if let PolicyKind::ThresholdFeedback(t) = kind {
        if !(t >= 0.0) {
            return Err(Error::Parameter(format!("feedback threshold must be non-negative, got {t}")));
        }
        let mut n_feedback = 0;
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let s = selection_metric(*p, geom);
            if s <= t {
                n_feedback += 1;
                if best.map_or(true, |(_, b)| s < b) {
                    best = Some((i, s));
                }
            }
        }
        return Ok(PolicyOutcome {
            selected: best.map(|(i, _)| points[i]),
            index: best.map(|(i, _)| i),
            gamma: best.map(|(_, s)| s),
            n_feedback,
            second_nearest_norm,
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyField);
    }
    let (xs, xd) = (geom.source(), geom.destination());
    let (i, gamma) = match kind {
        PolicyKind::Optimum => argmin(points.iter().map(|p| selection_metric(*p, geom))).unwrap(),
        PolicyKind::OptimumDiffSnr { alpha } => {
            argmin(points.iter().map(|p| selection_metric_diff(*p, geom, budget, alpha))).unwrap()
        }
        _ => {
            let (i, _) = match kind {
                PolicyKind::MidPoint => argmin(points.iter().map(|p| p.norm())).unwrap(),
                PolicyKind::ClosestToDestination => argmin(points.iter().map(|p| p.dist(&xd))).unwrap(),
                PolicyKind::ClosestToSource => argmin(points.iter().map(|p| p.dist(&xs))).unwrap(),
                _ => unreachable!(),
            };
            (i, selection_metric(points[i], geom))
        }
    };
    Ok(PolicyOutcome {
        selected: Some(points[i]),
        index: Some(i),
        gamma: Some(gamma),
        n_feedback: points.len(),
        second_nearest_norm,
    })
}

/// ŝ(x_mid) ≤ √(d² + ‖x₍₂₎‖²): the nearest relay to the midpoint is then optimum.
pub fn sufficient_condition_holds(points: &[Point2], geom: &NetworkGeometry) -> Result<bool> {
    let (i, _, second) = two_nearest(points).ok_or(Error::EmptyField)?;
    let Some(r2) = second else {
        return Ok(true);
    };
    let d = geom.d();
    Ok(selection_metric(points[i], geom) <= (d * d + r2 * r2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (NetworkGeometry, LinkBudget) {
        (NetworkGeometry::new(1.0).unwrap(), LinkBudget::homogeneous(1.0, 0.0).unwrap())
    }

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn optimum_at_midpoint() {
        let (g, b) = setup();
        let o = select(&pts(&[(0.0, 0.0), (3.0, 0.0)]), PolicyKind::Optimum, &g, &b).unwrap();
        assert_eq!(o.selected, Some(Point2::new(0.0, 0.0)));
        assert_eq!(o.gamma, Some(1.0));
    }

    #[test]
    fn midpoint_and_optimum_agree() {
        let (g, b) = setup();
        let f = pts(&[(0.0, 0.5), (0.6, 0.0)]);
        let m = select(&f, PolicyKind::MidPoint, &g, &b).unwrap();
        let o = select(&f, PolicyKind::Optimum, &g, &b).unwrap();
        assert_eq!(m.index, Some(0));
        assert_eq!(o.index, Some(0));
        assert!((o.gamma.unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((selection_metric(f[1], &g) - 1.6).abs() < 1e-15);
    }

    #[test]
    fn threshold_nobody_reports() {
        let (g, b) = setup();
        let o = select(&pts(&[(0.0, 2.0)]), PolicyKind::ThresholdFeedback(2.0), &g, &b).unwrap();
        assert_eq!(o.n_feedback, 0);
        assert!(o.selected.is_none() && o.gamma.is_none());
        let e = select(&[], PolicyKind::ThresholdFeedback(2.0), &g, &b).unwrap();
        assert_eq!(e.n_feedback, 0);
    }

    #[test]
    fn empty_field_errors() {
        let (g, b) = setup();
        assert_eq!(select(&[], PolicyKind::Optimum, &g, &b), Err(Error::EmptyField));
        assert_eq!(sufficient_condition_holds(&[], &g), Err(Error::EmptyField));
    }

    #[test]
    fn ties_lowest_index() {
        let (g, b) = setup();
        let f = pts(&[(0.0, 1.0), (0.0, -1.0)]);
        for k in [PolicyKind::Optimum, PolicyKind::MidPoint, PolicyKind::ThresholdFeedback(5.0)] {
            assert_eq!(select(&f, k, &g, &b).unwrap().index, Some(0));
        }
    }

    #[test]
    fn closest_to_endpoints() {
        let (g, b) = setup();
        let f = pts(&[(-0.9, 0.0), (0.8, 0.0)]);
        assert_eq!(select(&f, PolicyKind::ClosestToSource, &g, &b).unwrap().index, Some(0));
        assert_eq!(select(&f, PolicyKind::ClosestToDestination, &g, &b).unwrap().index, Some(1));
    }

    #[test]
    fn sufficient_condition_examples() {
        let (g, _) = setup();
        assert!(sufficient_condition_holds(&pts(&[(0.0, 0.1), (5.0, 5.0)]), &g).unwrap());
        assert!(!sufficient_condition_holds(&pts(&[(0.5, 0.0), (0.0, 0.51)]), &g).unwrap());
        assert!(sufficient_condition_holds(&pts(&[(3.0, 3.0)]), &g).unwrap());
    }

    #[test]
    fn second_nearest_recorded() {
        let (g, b) = setup();
        let o = select(&pts(&[(3.0, 0.0), (0.0, 1.0), (0.0, 2.0)]), PolicyKind::MidPoint, &g, &b).unwrap();
        assert_eq!(o.second_nearest_norm, Some(2.0));
    }
}
