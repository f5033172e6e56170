use nalgebra::DMatrix;

use super::lsq::solve_least_squares;
use super::resample::chord_length_params;
use super::{AnnotatedLane, BezierLane, KeyPointLane, ParamMode};
use crate::error::{LaneError, Result};
use crate::geometry::{Point3, Vector3};

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bernstein basis values `B_{j,n}(t)` for `j = 0..=n`, where `n = num_controls - 1`.
pub fn bernstein_row(t: f64, num_controls: usize) -> Vec<f64> {
    let n = num_controls - 1;
    let s = 1.0 - t;
    (0..=n)
        .map(|j| binomial(n, j) * s.powi((n - j) as i32) * t.powi(j as i32))
        .collect()
}

/// One row per parameter, one column per control point.
pub fn bernstein_design_matrix(params: &[f64], num_controls: usize) -> Result<DMatrix<f64>> {
    if num_controls < 2 {
        return Err(LaneError::InvalidConfig(format!(
            "a Bezier lane needs at least 2 control points, got {num_controls}"
        )));
    }
    if let Some(&t) = params.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(LaneError::OutOfDomain(t));
    }
    let mut m = DMatrix::zeros(params.len(), num_controls);
    for (i, &t) in params.iter().enumerate() {
        for (j, b) in bernstein_row(t, num_controls).into_iter().enumerate() {
            m[(i, j)] = b;
        }
    }
    Ok(m)
}

pub fn uniform_params(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

/// Result of a least-squares Bezier fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierFit {
    pub curve: BezierLane,
    /// Curve parameter assigned to each annotated point.
    pub params: Vec<f64>,
    pub residual_sum_sq: f64,
    pub rank: usize,
    /// Set when the design matrix was rank deficient and the minimum-norm
    /// solution was returned.
    pub rank_deficient: bool,
}

impl BezierFit {
    pub fn residual_rms(&self) -> f64 {
        (self.residual_sum_sq / self.params.len() as f64).sqrt()
    }
}

/// Least-squares Bezier fit with chord-length parameters.
pub fn fit_bezier(lane: &AnnotatedLane, num_controls: usize) -> Result<BezierFit> {
    fit_bezier_with(lane, num_controls, ParamMode::Chord)
}

pub fn fit_bezier_with(
    lane: &AnnotatedLane,
    num_controls: usize,
    mode: ParamMode,
) -> Result<BezierFit> {
    if num_controls < 2 {
        return Err(LaneError::InvalidConfig(format!(
            "a Bezier lane needs at least 2 control points, got {num_controls}"
        )));
    }
    if lane.len() < num_controls {
        return Err(LaneError::InsufficientPoints {
            needed: num_controls,
            got: lane.len(),
        });
    }
    let params = match mode {
        ParamMode::Chord => chord_length_params(lane)?,
        ParamMode::Uniform => uniform_params(lane.len()),
    };
    let design = bernstein_design_matrix(&params, num_controls)?;
    let targets = DMatrix::from_fn(lane.len(), 3, |i, k| lane.points()[i][k]);
    // Each coordinate axis is an independent column of the right-hand side.
    let ls = solve_least_squares(&design, &targets)?;
    let controls = (0..num_controls)
        .map(|j| {
            Point3::new(
                ls.solution[(j, 0)],
                ls.solution[(j, 1)],
                ls.solution[(j, 2)],
            )
        })
        .collect();
    let curve = BezierLane {
        controls,
        class_id: lane.class_id(),
    };
    let residual_sum_sq = bezier_residual_sum_sq(&curve.controls, lane.points(), &params);
    Ok(BezierFit {
        curve,
        params,
        residual_sum_sq,
        rank: ls.rank,
        rank_deficient: ls.rank_deficient,
    })
}

fn weighted_sum(controls: &[Point3], t: f64) -> Point3 {
    let acc = bernstein_row(t, controls.len())
        .into_iter()
        .zip(controls)
        .fold(Vector3::zeros(), |acc, (b, c)| acc + c.coords * b);
    Point3::from(acc)
}

/// Sum over annotated points of the squared distance to the curve at the
/// point's assigned parameter.
pub fn bezier_residual_sum_sq(controls: &[Point3], points: &[Point3], params: &[f64]) -> f64 {
    points
        .iter()
        .zip(params)
        .map(|(p, &t)| (weighted_sum(controls, t) - p).norm_squared())
        .sum()
}

pub fn eval_bezier(curve: &BezierLane, t: f64) -> Result<Point3> {
    if !(0.0..=1.0).contains(&t) {
        return Err(LaneError::OutOfDomain(t));
    }
    if curve.controls.is_empty() {
        return Err(LaneError::EmptyInput);
    }
    Ok(weighted_sum(&curve.controls, t))
}

/// Evaluates the curve at `n` uniformly spaced parameters.
pub fn sample_bezier(curve: &BezierLane, n: usize) -> Result<KeyPointLane> {
    if n < 2 {
        return Err(LaneError::InvalidConfig(format!(
            "sampling needs at least 2 points, got {n}"
        )));
    }
    let points = uniform_params(n)
        .into_iter()
        .map(|t| eval_bezier(curve, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(KeyPointLane {
        points,
        class_id: curve.class_id,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn quadratic() -> BezierLane {
        BezierLane {
            controls: vec![p(0.0, 0.0, 0.0), p(1.0, 2.0, 0.0), p(2.0, 0.0, 0.0)],
            class_id: 0,
        }
    }

    // Closed-form quadratic Bezier, written out independently of the Bernstein code.
    fn quadratic_oracle(t: f64) -> Point3 {
        let (a, b, c) = (p(0.0, 0.0, 0.0), p(1.0, 2.0, 0.0), p(2.0, 0.0, 0.0));
        let s = 1.0 - t;
        Point3::from(a.coords * (s * s) + b.coords * (2.0 * s * t) + c.coords * (t * t))
    }

    #[test]
    fn design_matrix_endpoint_rows() {
        let m = bernstein_design_matrix(&[0.0, 1.0], 4).unwrap();
        assert_eq!(
            m.row(0).iter().copied().collect::<Vec<_>>(),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            m.row(1).iter().copied().collect::<Vec<_>>(),
            vec![0.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn design_matrix_midpoint_quadratic() {
        let m = bernstein_design_matrix(&[0.5], 3).unwrap();
        assert_eq!(
            m.row(0).iter().copied().collect::<Vec<_>>(),
            vec![0.25, 0.5, 0.25]
        );
    }

    #[test]
    fn design_matrix_rejects_bad_inputs() {
        assert!(matches!(
            bernstein_design_matrix(&[0.5], 1),
            Err(LaneError::InvalidConfig(_))
        ));
        assert_eq!(
            bernstein_design_matrix(&[1.5], 3),
            Err(LaneError::OutOfDomain(1.5))
        );
    }

    #[test]
    fn rows_sum_to_one() {
        let params: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        for pc in [2, 3, 5, 10, 15] {
            let m = bernstein_design_matrix(&params, pc).unwrap();
            for row in m.row_iter() {
                assert!((row.sum() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eval_endpoints_and_midpoints() {
        let lin = BezierLane {
            controls: vec![p(0.0, 0.0, 0.0), p(2.0, 2.0, 0.0)],
            class_id: 0,
        };
        assert_eq!(eval_bezier(&lin, 0.5).unwrap(), p(1.0, 1.0, 0.0));
        let q = quadratic();
        assert_eq!(eval_bezier(&q, 0.0).unwrap(), q.controls[0]);
        assert_eq!(eval_bezier(&q, 1.0).unwrap(), q.controls[2]);
        assert_eq!(eval_bezier(&q, 0.5).unwrap(), p(1.0, 1.0, 0.0));
        assert_eq!(eval_bezier(&q, -0.1), Err(LaneError::OutOfDomain(-0.1)));
    }

    #[test]
    fn sampling() {
        let lin = BezierLane {
            controls: vec![p(0.0, 0.0, 0.0), p(0.0, 4.0, 0.0)],
            class_id: 7,
        };
        let s = sample_bezier(&lin, 5).unwrap();
        let ys: Vec<f64> = s.points.iter().map(|q| q.y).collect();
        assert_eq!(ys, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.class_id, 7);

        let q = quadratic();
        assert_eq!(
            sample_bezier(&q, 2).unwrap().points,
            vec![q.controls[0], q.controls[2]]
        );
        assert_eq!(
            sample_bezier(&q, 3).unwrap().points,
            vec![p(0.0, 0.0, 0.0), p(1.0, 1.0, 0.0), p(2.0, 0.0, 0.0)]
        );
        assert!(sample_bezier(&q, 1).is_err());
    }

    #[test]
    fn straight_segment_fit_is_collinear() {
        let pts: Vec<Point3> = (0..20)
            .map(|i| p(0.0, 10.0 * i as f64 / 19.0, 0.0))
            .collect();
        let lane = AnnotatedLane::new(pts, 0).unwrap();
        let fit = fit_bezier(&lane, 5).unwrap();
        assert!(!fit.rank_deficient);
        for c in &fit.curve.controls {
            assert!(c.x.abs() < 1e-9 && c.z.abs() < 1e-9);
        }
        for i in 0..=200 {
            let q = eval_bezier(&fit.curve, i as f64 / 200.0).unwrap();
            assert!(q.x.abs() < 1e-9 && q.z.abs() < 1e-9);
            assert!(q.y > -1e-9 && q.y < 10.0 + 1e-9);
        }
    }

    #[test]
    fn quadratic_generator_is_recovered() {
        let pts: Vec<Point3> = uniform_params(50)
            .into_iter()
            .map(quadratic_oracle)
            .collect();
        let lane = AnnotatedLane::new(pts, 0).unwrap();
        let fit = fit_bezier_with(&lane, 3, ParamMode::Uniform).unwrap();
        let max_dev = uniform_params(200)
            .into_iter()
            .map(|t| nalgebra::distance(&eval_bezier(&fit.curve, t).unwrap(), &quadratic_oracle(t)))
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-4, "{max_dev}");
    }

    #[test]
    fn insufficient_points() {
        let lane = AnnotatedLane::new(vec![p(0.0, 0.0, 0.0), p(0.0, 1.0, 0.0)], 0).unwrap();
        assert_eq!(
            fit_bezier(&lane, 5),
            Err(LaneError::InsufficientPoints { needed: 5, got: 2 })
        );
    }

    #[test]
    fn fit_is_a_least_squares_minimum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point3> = (0..40)
            .map(|i| {
                let y = i as f64;
                p(
                    (y * 0.1).sin() * 3.0 + rng.random_range(-0.1..0.1),
                    y,
                    0.02 * y,
                )
            })
            .collect();
        let lane = AnnotatedLane::new(pts, 0).unwrap();
        let fit = fit_bezier(&lane, 5).unwrap();
        for _ in 0..100 {
            let mut controls = fit.curve.controls.clone();
            let j = rng.random_range(0..controls.len());
            let dir = Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .normalize();
            controls[j] += dir * 1e-3;
            let perturbed = bezier_residual_sum_sq(&controls, lane.points(), &fit.params);
            assert!(perturbed >= fit.residual_sum_sq);
        }
    }
}
