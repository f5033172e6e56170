use nalgebra::DMatrix;

use super::lsq::solve_least_squares;
use super::{AnnotatedLane, KeyPointLane};
use crate::error::{LaneError, Result};
use crate::geometry::Point3;

/// `X = f(Y)` and `Z = g(Y)` as polynomials in the longitudinal coordinate.
///
/// Coefficients are stored lowest order first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBaselineLane {
    pub coeffs_xy: Vec<f64>,
    pub coeffs_zy: Vec<f64>,
    pub degree: usize,
    /// Y extent of the annotation the polynomials were fitted on.
    pub y_range: (f64, f64),
    pub rank_deficient: bool,
}

fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

impl PolyBaselineLane {
    pub fn eval(&self, y: f64) -> Point3 {
        Point3::new(horner(&self.coeffs_xy, y), y, horner(&self.coeffs_zy, y))
    }

    /// `n` points at uniformly spaced Y over the fitted range.
    pub fn sample(&self, n: usize, class_id: usize) -> KeyPointLane {
        let (lo, hi) = self.y_range;
        let points = (0..n.max(2))
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64))
            .collect();
        KeyPointLane { points, class_id }
    }
}

/// Least-squares polynomial fit of X and Z against Y.
///
/// Lanes that double back in Y (U-turns, laterals) are fitted anyway; if the
/// Vandermonde matrix is rank deficient the minimum-norm solution is kept and
/// `rank_deficient` is set.
pub fn fit_polynomial_baseline(lane: &AnnotatedLane, degree: usize) -> Result<PolyBaselineLane> {
    let n = lane.len();
    if n < degree + 1 {
        return Err(LaneError::InsufficientPoints {
            needed: degree + 1,
            got: n,
        });
    }
    let pts = lane.points();
    let vander = DMatrix::from_fn(n, degree + 1, |i, k| pts[i].y.powi(k as i32));
    let rhs = DMatrix::from_fn(n, 2, |i, k| if k == 0 { pts[i].x } else { pts[i].z });
    let ls = solve_least_squares(&vander, &rhs)?;
    let y_min = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y_max = pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    Ok(PolyBaselineLane {
        coeffs_xy: ls.solution.column(0).iter().copied().collect(),
        coeffs_zy: ls.solution.column(1).iter().copied().collect(),
        degree,
        y_range: (y_min, y_max),
        rank_deficient: ls.rank_deficient,
    })
}
