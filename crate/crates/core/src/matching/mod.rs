//! Global-to-local lane matching.
//!
//! Each prediction/ground-truth pair is scored by five terms: bounding-box
//! position, point-wise shape, curvature smoothness (all on key points),
//! control-point distance (on Bezier controls) and a focal class cost. The
//! weighted sum fills an `L x L` cost matrix whose optimal assignment is
//! found with [`hungarian`]. [`total_loss`] re-evaluates the same weighted
//! terms over an assignment.

mod costs;
mod hungarian;
mod types;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};

pub use costs::{
    bbox_of, cost_bezier, cost_class, cost_position, cost_shape, cost_smoothness, curvature,
    curvature_with_diagnostics, tangents, MIN_PROB,
};
pub use hungarian::hungarian;
pub use types::{
    Assignment, Box6, ClassScores, CostWeights, FocalParams, GroundTruthLane, PredictedLane,
};

/// Appends "no object" entries until there are `slots` ground truths.
pub fn pad_ground_truth(
    mut gts: Vec<GroundTruthLane>,
    slots: usize,
    background: usize,
) -> Result<Vec<GroundTruthLane>> {
    if gts.len() > slots {
        return Err(LaneError::TooManyGroundTruths {
            gts: gts.len(),
            slots,
        });
    }
    gts.resize_with(slots, || GroundTruthLane::padding(background));
    Ok(gts)
}

/// Unweighted values of the five terms for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermCosts {
    pub position: f64,
    pub shape: f64,
    pub smoothness: f64,
    pub bezier: f64,
    pub class: f64,
}

impl TermCosts {
    pub fn weighted(&self, w: &CostWeights) -> TermCosts {
        TermCosts {
            position: w.position * self.position,
            shape: w.shape * self.shape,
            smoothness: w.smoothness * self.smoothness,
            bezier: w.bezier * self.bezier,
            class: w.class * self.class,
        }
    }

    /// Sum of the five fields, in declaration order.
    pub fn sum(&self) -> f64 {
        self.position + self.shape + self.smoothness + self.bezier + self.class
    }

    fn add(&mut self, other: &TermCosts) {
        self.position += other.position;
        self.shape += other.shape;
        self.smoothness += other.smoothness;
        self.bezier += other.bezier;
        self.class += other.class;
    }
}

/// The five terms for one prediction against one (possibly padded) ground truth.
///
/// Padding slots only charge the class term against background.
pub fn pair_costs(
    pred: &PredictedLane,
    gt: &GroundTruthLane,
    focal: FocalParams,
) -> Result<TermCosts> {
    if gt.is_padding {
        return Ok(TermCosts {
            class: cost_class(&pred.scores, pred.scores.background(), focal)?,
            ..TermCosts::default()
        });
    }
    Ok(TermCosts {
        position: cost_position(&pred.keypoints, &gt.keypoints)?,
        shape: cost_shape(&pred.keypoints, &gt.keypoints)?,
        smoothness: cost_smoothness(&pred.keypoints, &gt.keypoints)?,
        bezier: cost_bezier(&pred.controls, &gt.controls)?,
        class: cost_class(&pred.scores, gt.class_id, focal)?,
    })
}

/// Entry `(i, k)` is the weighted cost of prediction `i` against ground truth `k`.
pub fn cost_matrix(
    preds: &[PredictedLane],
    gts_padded: &[GroundTruthLane],
    weights: &CostWeights,
    focal: FocalParams,
) -> Result<DMatrix<f64>> {
    if preds.len() != gts_padded.len() {
        return Err(LaneError::ShapeMismatch {
            left: preds.len(),
            right: gts_padded.len(),
        });
    }
    let n = preds.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, pred) in preds.iter().enumerate() {
        for (k, gt) in gts_padded.iter().enumerate() {
            m[(i, k)] = pair_costs(pred, gt, focal)?.weighted(weights).sum();
        }
    }
    Ok(m)
}

/// Weighted loss over an assignment, with a per-term breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    /// Weighted per-term sums over all assigned pairs.
    pub terms: TermCosts,
    /// Weighted terms of each assigned pair, in assignment order.
    pub per_pair: Vec<TermCosts>,
    pub total: f64,
}

pub fn total_loss(
    preds: &[PredictedLane],
    gts_padded: &[GroundTruthLane],
    assignment: &Assignment,
    weights: &CostWeights,
    focal: FocalParams,
) -> Result<LossBreakdown> {
    let n = preds.len();
    if gts_padded.len() != n {
        return Err(LaneError::ShapeMismatch {
            left: n,
            right: gts_padded.len(),
        });
    }
    if assignment.pairs.len() != n {
        return Err(LaneError::InvalidAssignment(format!(
            "{} pairs for {n} predictions",
            assignment.pairs.len()
        )));
    }
    let mut seen_pred = vec![false; n];
    let mut seen_gt = vec![false; n];
    for &(p, g) in &assignment.pairs {
        if p >= n || g >= n {
            return Err(LaneError::InvalidAssignment(format!(
                "pair ({p}, {g}) is out of range for {n} lanes"
            )));
        }
        if std::mem::replace(&mut seen_pred[p], true) || std::mem::replace(&mut seen_gt[g], true) {
            return Err(LaneError::InvalidAssignment(format!(
                "pair ({p}, {g}) reuses an index"
            )));
        }
    }

    let mut terms = TermCosts::default();
    let mut per_pair = Vec::with_capacity(n);
    for &(p, g) in &assignment.pairs {
        let weighted = pair_costs(&preds[p], &gts_padded[g], focal)?.weighted(weights);
        terms.add(&weighted);
        per_pair.push(weighted);
    }
    let total = per_pair.iter().map(TermCosts::sum).sum();
    Ok(LossBreakdown {
        terms,
        per_pair,
        total,
    })
}

/// Everything produced by matching one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatch {
    pub cost: DMatrix<f64>,
    pub assignment: Assignment,
    pub loss: LossBreakdown,
}

/// Pads the ground truth to the number of predictions, builds the cost
/// matrix, assigns, and evaluates the loss under that assignment.
pub fn match_frame(
    preds: &[PredictedLane],
    gts: Vec<GroundTruthLane>,
    weights: &CostWeights,
    focal: FocalParams,
) -> Result<FrameMatch> {
    weights.validate()?;
    let background = match preds.first() {
        Some(p) => p.scores.background(),
        None if gts.is_empty() => 0,
        None => {
            return Err(LaneError::TooManyGroundTruths {
                gts: gts.len(),
                slots: 0,
            })
        }
    };
    let padded = pad_ground_truth(gts, preds.len(), background)?;
    let cost = cost_matrix(preds, &padded, weights, focal)?;
    let assignment = hungarian(&cost)?;
    let loss = total_loss(preds, &padded, &assignment, weights, focal)?;
    Ok(FrameMatch {
        cost,
        assignment,
        loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;
    use crate::lane_model::{BezierLane, KeyPointLane};

    fn lane(offset: f64, class_id: usize) -> (KeyPointLane, BezierLane) {
        let points: Vec<Point3> = (0..6)
            .map(|i| Point3::new(offset + 0.05 * (i * i) as f64, i as f64 * 2.0, 0.0))
            .collect();
        let controls = vec![points[0], points[2], points[5]];
        (
            KeyPointLane { points, class_id },
            BezierLane { controls, class_id },
        )
    }

    fn pred(offset: f64, scores: &[f64]) -> PredictedLane {
        let (keypoints, controls) = lane(offset, 0);
        PredictedLane {
            keypoints,
            controls,
            scores: ClassScores::new(scores.to_vec()).unwrap(),
        }
    }

    fn gt(offset: f64, class_id: usize) -> GroundTruthLane {
        let (k, c) = lane(offset, class_id);
        GroundTruthLane::new(k, c)
    }

    #[test]
    fn padding() {
        let g = vec![gt(0.0, 0), gt(1.0, 1)];
        assert_eq!(pad_ground_truth(g.clone(), 2, 2).unwrap(), g);
        let p = pad_ground_truth(Vec::new(), 3, 2).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|x| x.is_padding && x.class_id == 2));
        let p = pad_ground_truth(g.clone(), 5, 2).unwrap();
        assert_eq!(&p[..2], &g[..]);
        assert!(p[2..].iter().all(|x| x.is_padding));
        assert_eq!(
            pad_ground_truth(g, 1, 2),
            Err(LaneError::TooManyGroundTruths { gts: 2, slots: 1 })
        );
    }

    #[test]
    fn perfect_single_match_costs_nothing() {
        let m = cost_matrix(
            &[pred(0.0, &[1.0, 0.0, 0.0])],
            &[gt(0.0, 0)],
            &CostWeights::default(),
            FocalParams::default(),
        )
        .unwrap();
        assert_eq!(m[(0, 0)], 0.0);
    }

    #[test]
    fn class_only_weights_give_class_matrix() {
        let preds = [pred(0.0, &[0.6, 0.3, 0.1]), pred(3.0, &[0.2, 0.5, 0.3])];
        let gts = pad_ground_truth(vec![gt(3.0, 1)], 2, 2).unwrap();
        let w = CostWeights {
            position: 0.0,
            shape: 0.0,
            smoothness: 0.0,
            bezier: 0.0,
            class: 1.0,
        };
        let f = FocalParams::default();
        let m = cost_matrix(&preds, &gts, &w, f).unwrap();
        for (i, p) in preds.iter().enumerate() {
            for (k, g) in gts.iter().enumerate() {
                assert_eq!(m[(i, k)], cost_class(&p.scores, g.class_id, f).unwrap());
            }
        }
    }

    #[test]
    fn padding_charges_only_background_class() {
        let p = pred(0.0, &[0.3, 0.2, 0.5]);
        let f = FocalParams::default();
        let c = pair_costs(&p, &GroundTruthLane::padding(2), f).unwrap();
        assert_eq!(c.position + c.shape + c.smoothness + c.bezier, 0.0);
        assert_eq!(c.class, cost_class(&p.scores, 2, f).unwrap());
    }

    #[test]
    fn loss_equals_assignment_cost() {
        let preds = [
            pred(3.0, &[0.1, 0.8, 0.1]),
            pred(0.2, &[0.7, 0.2, 0.1]),
            pred(9.0, &[0.1, 0.1, 0.8]),
        ];
        let gts = vec![gt(0.0, 0), gt(3.1, 1)];
        let fm = match_frame(&preds, gts, &CostWeights::default(), FocalParams::default()).unwrap();
        assert_eq!(fm.assignment.pairs, vec![(0, 1), (1, 0), (2, 2)]);
        assert!((fm.loss.total - fm.assignment.total_cost).abs() < 1e-9);
        assert!((fm.loss.terms.sum() - fm.loss.total).abs() < 1e-9);
    }

    #[test]
    fn invalid_assignments_are_rejected() {
        let preds = [pred(0.0, &[0.5, 0.5]), pred(1.0, &[0.5, 0.5])];
        let gts = pad_ground_truth(vec![], 2, 1).unwrap();
        let w = CostWeights::default();
        let f = FocalParams::default();
        let dup = Assignment {
            pairs: vec![(0, 0), (1, 0)],
            total_cost: 0.0,
        };
        assert!(matches!(
            total_loss(&preds, &gts, &dup, &w, f),
            Err(LaneError::InvalidAssignment(_))
        ));
        let short = Assignment {
            pairs: vec![(0, 0)],
            total_cost: 0.0,
        };
        assert!(matches!(
            total_loss(&preds, &gts, &short, &w, f),
            Err(LaneError::InvalidAssignment(_))
        ));
        let oob = Assignment {
            pairs: vec![(0, 0), (1, 5)],
            total_cost: 0.0,
        };
        assert!(matches!(
            total_loss(&preds, &gts, &oob, &w, f),
            Err(LaneError::InvalidAssignment(_))
        ));
    }

    #[test]
    fn mismatched_lengths() {
        let r = cost_matrix(
            &[pred(0.0, &[0.5, 0.5])],
            &[],
            &CostWeights::default(),
            FocalParams::default(),
        );
        assert_eq!(r, Err(LaneError::ShapeMismatch { left: 1, right: 0 }));
    }
}
