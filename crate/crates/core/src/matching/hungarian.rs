//! Minimum-cost perfect assignment on a square matrix.
//!
//! Shortest augmenting paths with row/column potentials, O(n^3). Among all
//! optimal assignments the one whose column sequence (read in row order) is
//! lexicographically smallest is returned, so equal-cost ties resolve the
//! same way on every run and platform.

use nalgebra::DMatrix;

use super::types::Assignment;
use crate::error::{LaneError, Result};

pub fn hungarian(cost: &DMatrix<f64>) -> Result<Assignment> {
    let (n, m) = cost.shape();
    if n != m {
        return Err(LaneError::InvalidMatrix(format!(
            "matrix is {n}x{m}, not square"
        )));
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(LaneError::InvalidMatrix(
            "matrix has non-finite entries".into(),
        ));
    }
    if n == 0 {
        return Ok(Assignment {
            pairs: Vec::new(),
            total_cost: 0.0,
        });
    }

    let (mut row_to_col, u, v) = solve(cost);
    lexicographic_optimum(cost, &mut row_to_col, &u, &v);

    let pairs: Vec<(usize, usize)> = row_to_col.iter().copied().enumerate().collect();
    let total_cost = pairs.iter().map(|&(i, j)| cost[(i, j)]).sum();
    Ok(Assignment { pairs, total_cost })
}

/// Returns the assignment and the dual potentials `u` (rows) and `v` (columns).
fn solve(cost: &DMatrix<f64>) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = cost.nrows();
    // 1-based: index 0 is the virtual column that starts each augmentation.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        row_to_col[col_owner[j] - 1] = j - 1;
    }
    (row_to_col, u[1..].to_vec(), v[1..].to_vec())
}

/// Rewrites an optimal assignment into the lexicographically smallest one.
///
/// Every optimal assignment is a perfect matching on the tight edges
/// (zero reduced cost under the optimal potentials). Rows are fixed in order
/// to their smallest feasible tight column; feasibility of `(i, j)` is an
/// alternating path in the tight graph that frees `j` for row `i`.
fn lexicographic_optimum(cost: &DMatrix<f64>, row_to_col: &mut [usize], u: &[f64], v: &[f64]) {
    let n = row_to_col.len();
    let scale = cost.iter().fold(1.0f64, |acc, c| acc.max(c.abs()));
    let tol = 1e-10 * scale;
    let tight = |i: usize, j: usize| cost[(i, j)] - u[i] - v[j] <= tol;

    let mut col_to_row = vec![0; n];
    for (i, &j) in row_to_col.iter().enumerate() {
        col_to_row[j] = i;
    }
    let mut fixed_col = vec![false; n];

    for i in 0..n {
        for j in 0..n {
            if fixed_col[j] || !tight(i, j) {
                continue;
            }
            if row_to_col[i] == j {
                fixed_col[j] = true;
                break;
            }
            // Give column j to row i; its previous owner must reach the column
            // row i gives up through an alternating path over unfixed rows.
            let displaced = col_to_row[j];
            let released = row_to_col[i];
            let search = PathSearch {
                start: displaced,
                target: released,
                excluded_row: i,
                excluded_col: j,
            };
            if let Some(path) = search.run(&fixed_col, row_to_col, &col_to_row, &tight) {
                for (r, c) in path {
                    row_to_col[r] = c;
                    col_to_row[c] = r;
                }
                row_to_col[i] = j;
                col_to_row[j] = i;
                fixed_col[j] = true;
                break;
            }
        }
    }
}

/// Breadth-first search from row `start` to column `target` alternating
/// between tight non-matching edges and matching edges. Returns the
/// `(row, new_col)` reassignments along the path.
#[derive(Clone, Copy)]
struct PathSearch {
    start: usize,
    target: usize,
    excluded_row: usize,
    excluded_col: usize,
}

impl PathSearch {
    fn run(
        &self,
        fixed_col: &[bool],
        row_to_col: &[usize],
        col_to_row: &[usize],
        tight: &impl Fn(usize, usize) -> bool,
    ) -> Option<Vec<(usize, usize)>> {
        let PathSearch {
            start,
            target,
            excluded_row,
            excluded_col,
        } = *self;
        let n = row_to_col.len();
        let mut parent_row = vec![usize::MAX; n]; // column -> row that reached it
        let mut seen_row = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        seen_row[start] = true;
        while let Some(r) = queue.pop_front() {
            for c in 0..n {
                if fixed_col[c]
                    || c == excluded_col
                    || parent_row[c] != usize::MAX
                    || c == row_to_col[r]
                    || !tight(r, c)
                {
                    continue;
                }
                parent_row[c] = r;
                if c == target {
                    let mut path = Vec::new();
                    let mut col = c;
                    loop {
                        let row = parent_row[col];
                        path.push((row, col));
                        if row == start {
                            return Some(path);
                        }
                        col = row_to_col[row];
                    }
                }
                let next = col_to_row[c];
                if next != excluded_row && !seen_row[next] {
                    seen_row[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }
}
