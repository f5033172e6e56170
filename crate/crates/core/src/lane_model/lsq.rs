use nalgebra::DMatrix;

use crate::error::{LaneError, Result};

/// Minimum-norm least-squares solution of `A X = B`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: DMatrix<f64>,
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Solves `min ||A X - B||` column by column through the SVD of `A`.
///
/// Singular values below `max(m, n) * eps * sigma_max` are treated as zero,
/// which yields the minimum-norm solution when `A` is rank deficient.
pub fn solve_least_squares(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<LeastSquares> {
    if a.nrows() != b.nrows() {
        return Err(LaneError::ShapeMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    let (m, n) = a.shape();
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = (m.max(n) as f64) * f64::EPSILON * sigma_max;
    let rank = svd.rank(tol);
    let solution = svd
        .solve(b, tol)
        .map_err(|e| LaneError::InvalidConfig(format!("least-squares solve failed: {e}")))?;
    Ok(LeastSquares {
        solution,
        rank,
        rank_deficient: rank < n,
    })
}
