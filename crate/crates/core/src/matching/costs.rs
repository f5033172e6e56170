//! The five per-pair matching terms.

use super::types::{Box6, ClassScores, FocalParams};
use crate::error::{LaneError, Result};
use crate::geometry::{Point3, Vector3, COINCIDENT_EPS};
use crate::lane_model::{BezierLane, KeyPointLane};

/// Smallest probability fed to the focal-loss logarithm.
pub const MIN_PROB: f64 = 1e-7;

pub fn bbox_of(lane: &KeyPointLane) -> Result<Box6> {
    let first = lane.points.first().ok_or(LaneError::EmptyInput)?;
    let mut b = Box6 {
        x_min: first.x,
        y_min: first.y,
        z_min: first.z,
        x_max: first.x,
        y_max: first.y,
        z_max: first.z,
    };
    for p in &lane.points[1..] {
        b.x_min = b.x_min.min(p.x);
        b.y_min = b.y_min.min(p.y);
        b.z_min = b.z_min.min(p.z);
        b.x_max = b.x_max.max(p.x);
        b.y_max = b.y_max.max(p.y);
        b.z_max = b.z_max.max(p.z);
    }
    Ok(b)
}

/// Mean absolute difference of the two bounding boxes' six components.
pub fn cost_position(pred: &KeyPointLane, gt: &KeyPointLane) -> Result<f64> {
    let a = bbox_of(pred)?.to_array();
    let b = bbox_of(gt)?.to_array();
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 6.0)
}

fn mean_pointwise_distance(a: &[Point3], b: &[Point3]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(LaneError::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(LaneError::EmptyInput);
    }
    Ok(a.iter()
        .zip(b)
        .map(|(p, q)| nalgebra::distance(p, q))
        .sum::<f64>()
        / a.len() as f64)
}

/// Mean Euclidean distance between index-aligned key points.
pub fn cost_shape(pred: &KeyPointLane, gt: &KeyPointLane) -> Result<f64> {
    mean_pointwise_distance(&pred.points, &gt.points)
}

/// Unnormalized central differences `P[j+1] - P[j-1]` for `j = 1..=P_k-2`.
///
/// Element `k` of the result is the tangent at point `k + 1`.
pub fn tangents(lane: &KeyPointLane) -> Result<Vec<Vector3>> {
    let pts = &lane.points;
    if pts.len() < 3 {
        return Err(LaneError::TooFewPoints {
            needed: 3,
            got: pts.len(),
        });
    }
    Ok(pts.windows(3).map(|w| w[2] - w[0]).collect())
}

/// Discrete curvature at points `j = 2..=P_k-2`, together with the number of
/// zero-length segments that were assigned curvature 0.
pub fn curvature_with_diagnostics(lane: &KeyPointLane) -> Result<(Vec<f64>, usize)> {
    let pts = &lane.points;
    if pts.len() < 4 {
        return Err(LaneError::TooFewPoints {
            needed: 4,
            got: pts.len(),
        });
    }
    let t = tangents(lane)?;
    let mut degenerate = 0;
    let values = (2..=pts.len() - 2)
        .map(|j| {
            // tangent at j lives at t[j - 1]
            let seg = nalgebra::distance(&pts[j], &pts[j - 1]);
            if seg < COINCIDENT_EPS {
                degenerate += 1;
                0.0
            } else {
                (t[j - 1] - t[j - 2]).norm() / seg
            }
        })
        .collect();
    Ok((values, degenerate))
}

pub fn curvature(lane: &KeyPointLane) -> Result<Vec<f64>> {
    curvature_with_diagnostics(lane).map(|(v, _)| v)
}

/// Mean absolute curvature difference over the realizable index range.
pub fn cost_smoothness(pred: &KeyPointLane, gt: &KeyPointLane) -> Result<f64> {
    if pred.points.len() != gt.points.len() {
        return Err(LaneError::ShapeMismatch {
            left: pred.points.len(),
            right: gt.points.len(),
        });
    }
    let a = curvature(pred)?;
    let b = curvature(gt)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64)
}

/// Mean Euclidean distance between index-aligned control points.
pub fn cost_bezier(pred: &BezierLane, gt: &BezierLane) -> Result<f64> {
    mean_pointwise_distance(&pred.controls, &gt.controls)
}

/// Focal loss `-alpha (1 - p)^gamma ln p` of the probability assigned to `gt_class`.
pub fn cost_class(pred: &ClassScores, gt_class: usize, focal: FocalParams) -> Result<f64> {
    let p = pred.prob(gt_class)?.max(MIN_PROB);
    if p >= 1.0 {
        return Ok(0.0);
    }
    Ok(-focal.alpha * (1.0 - p).powf(focal.gamma) * p.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(pts: &[(f64, f64, f64)]) -> KeyPointLane {
        KeyPointLane {
            points: pts.iter().map(|&(x, y, z)| Point3::new(x, y, z)).collect(),
            class_id: 0,
        }
    }

    fn bz(pts: &[(f64, f64, f64)]) -> BezierLane {
        BezierLane {
            controls: kp(pts).points,
            class_id: 0,
        }
    }

    fn fixture5() -> KeyPointLane {
        kp(&[
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            (2.0, 0.0, 0.0),
            (2.0, 1.0, 0.0),
            (2.0, 2.0, 0.0),
        ])
    }

    #[test]
    fn bbox_examples() {
        let b = bbox_of(&kp(&[(1.0, 2.0, 3.0), (1.0, 2.0, 3.0)])).unwrap();
        assert_eq!(b.to_array(), [1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
        let b = bbox_of(&kp(&[(1.0, 2.0, 3.0), (-1.0, 5.0, 0.0)])).unwrap();
        assert_eq!(b.to_array(), [-1.0, 2.0, 0.0, 1.0, 5.0, 3.0]);
        assert_eq!(bbox_of(&kp(&[])), Err(LaneError::EmptyInput));
    }

    #[test]
    fn bbox_matches_scan_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<(f64, f64, f64)> = (0..20)
            .map(|_| {
                (
                    rng.random_range(-9.0..9.0),
                    rng.random_range(0.0..50.0),
                    rng.random_range(-2.0..2.0),
                )
            })
            .collect();
        let b = bbox_of(&kp(&pts)).unwrap();
        let mut lo = [f64::MAX; 3];
        let mut hi = [f64::MIN; 3];
        for &(x, y, z) in &pts {
            for (k, v) in [x, y, z].into_iter().enumerate() {
                if v < lo[k] {
                    lo[k] = v;
                }
                if v > hi[k] {
                    hi[k] = v;
                }
            }
        }
        assert_eq!(b.to_array(), [lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]]);
    }

    #[test]
    fn position_cost_examples() {
        let gt = fixture5();
        assert_eq!(cost_position(&gt, &gt).unwrap(), 0.0);
        let shifted = KeyPointLane {
            points: gt
                .points
                .iter()
                .map(|p| p + Vector3::new(1.0, 0.0, 0.0))
                .collect(),
            class_id: 0,
        };
        assert!((cost_position(&shifted, &gt).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        let a = kp(&[(0.0, 0.0, 0.0), (1.0, 1.0, 1.0)]);
        let b = kp(&[(0.0, 0.0, 0.0), (2.0, 2.0, 2.0)]);
        assert_eq!(cost_position(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn shape_cost_examples() {
        let gt = fixture5();
        assert_eq!(cost_shape(&gt, &gt).unwrap(), 0.0);
        let shifted = KeyPointLane {
            points: gt
                .points
                .iter()
                .map(|p| p + Vector3::new(3.0, 4.0, 0.0))
                .collect(),
            class_id: 0,
        };
        assert!((cost_shape(&gt, &shifted).unwrap() - 5.0).abs() < 1e-12);
        let a = kp(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]);
        let b = kp(&[(0.0, 1.0, 0.0), (1.0, 2.0, 0.0)]);
        assert_eq!(cost_shape(&a, &b).unwrap(), 1.5);
        assert_eq!(
            cost_shape(&a, &gt),
            Err(LaneError::ShapeMismatch { left: 2, right: 5 })
        );
    }

    #[test]
    fn tangent_examples() {
        let straight = kp(&[
            (0.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 2.0, 0.0),
            (0.0, 3.0, 0.0),
            (0.0, 4.0, 0.0),
        ]);
        assert!(tangents(&straight)
            .unwrap()
            .iter()
            .all(|t| *t == Vector3::new(0.0, 2.0, 0.0)));
        let t = tangents(&kp(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0)])).unwrap();
        assert_eq!(t, vec![Vector3::new(1.0, 1.0, 0.0)]);
        let t = tangents(&fixture5()).unwrap();
        assert_eq!(
            t,
            vec![
                Vector3::new(2.0, 0.0, 0.0),
                Vector3::new(1.0, 1.0, 0.0),
                Vector3::new(0.0, 2.0, 0.0)
            ]
        );
        assert!(matches!(
            tangents(&kp(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])),
            Err(LaneError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn curvature_examples() {
        let straight = kp(&[
            (0.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 2.0, 0.0),
            (0.0, 3.0, 0.0),
            (0.0, 4.0, 0.0),
        ]);
        assert_eq!(curvature(&straight).unwrap(), vec![0.0, 0.0]);
        let c = curvature(&fixture5()).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((c[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            curvature(&kp(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0)])),
            Err(LaneError::TooFewPoints { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn zero_length_segment_gives_zero_curvature() {
        let lane = kp(&[
            (0.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 1.0, 0.0),
            (1.0, 2.0, 0.0),
            (2.0, 2.0, 0.0),
        ]);
        let (c, degenerate) = curvature_with_diagnostics(&lane).unwrap();
        assert_eq!(degenerate, 1);
        assert_eq!(c[0], 0.0);
    }

    #[test]
    fn circle_curvature_is_constant() {
        let r = 7.5;
        let n = 100;
        // Direct parametric evaluation of a planar circle arc.
        let lane = KeyPointLane {
            points: (0..n)
                .map(|i| {
                    let a = 1.5 * std::f64::consts::PI * i as f64 / (n - 1) as f64;
                    Point3::new(r * a.cos(), r * a.sin(), 0.0)
                })
                .collect(),
            class_id: 0,
        };
        let c = curvature(&lane).unwrap();
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / c.len() as f64;
        assert!(var.sqrt() / mean < 0.05);
    }

    #[test]
    fn smoothness_examples() {
        let straight = kp(&[
            (0.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 2.0, 0.0),
            (0.0, 3.0, 0.0),
            (0.0, 4.0, 0.0),
        ]);
        assert_eq!(cost_smoothness(&straight, &straight).unwrap(), 0.0);
        let f = fixture5();
        assert_eq!(cost_smoothness(&f, &f).unwrap(), 0.0);
        let expected = curvature(&f).unwrap().iter().sum::<f64>() / 2.0;
        assert!((cost_smoothness(&f, &straight).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn bezier_cost_examples() {
        let a = bz(&[(0.0, 0.0, 0.0), (1.0, 1.0, 0.0), (2.0, 0.0, 1.0)]);
        assert_eq!(cost_bezier(&a, &a).unwrap(), 0.0);
        let up = BezierLane {
            controls: a
                .controls
                .iter()
                .map(|p| p + Vector3::new(0.0, 0.0, 2.0))
                .collect(),
            class_id: 0,
        };
        assert!((cost_bezier(&a, &up).unwrap() - 2.0).abs() < 1e-15);
        let p = bz(&[(0.0, 0.0, 0.0), (0.0, 0.0, 0.0)]);
        let g = bz(&[(1.0, 0.0, 0.0), (0.0, 2.0, 0.0)]);
        assert_eq!(cost_bezier(&p, &g).unwrap(), 1.5);
    }

    #[test]
    fn class_cost_examples() {
        let f = FocalParams::default();
        let perfect = ClassScores::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(cost_class(&perfect, 0, f).unwrap(), 0.0);
        let half = ClassScores::new(vec![0.5, 0.5]).unwrap();
        let expected = -0.25 * 0.25 * 0.5f64.ln();
        assert!((cost_class(&half, 0, f).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.04332).abs() < 1e-5);
        let high = ClassScores::new(vec![0.9, 0.1]).unwrap();
        let v = cost_class(&high, 0, f).unwrap();
        assert!((v - (-0.25 * 0.01 * 0.9f64.ln())).abs() < 1e-15);
        assert!((v - 2.634e-4).abs() < 1e-7);
        assert!(matches!(
            cost_class(&high, 2, f),
            Err(LaneError::InvalidClass { .. })
        ));
        // zero probability is clamped instead of producing infinity
        let zero = ClassScores::new(vec![0.0, 1.0]).unwrap();
        assert!(cost_class(&zero, 0, f).unwrap().is_finite());
    }
}
