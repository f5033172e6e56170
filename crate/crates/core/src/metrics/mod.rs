//! Lane evaluation: F-Score with a confidence gate, Chamfer-distance AP and
//! category accuracy.
//!
//! A prediction whose best foreground probability does not exceed
//! [`MatchCriteria::confidence_thresh`] is dropped before F-Score matching.
//! A kept prediction and a ground truth are a true-positive candidate when
//! enough index-aligned key points lie within the distance threshold
//! ([`lane_is_tp`]). Candidates are paired greedily by ascending Chamfer
//! distance inside each frame.
//!
//! AP ranks predictions of a class by confidence over all frames and claims
//! the nearest unclaimed ground truth when its Chamfer distance is within
//! the threshold. The area under the precision/recall curve uses all-point
//! interpolation and is averaged over the threshold set.

mod chamfer;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};
use crate::geometry::{flatten_xy, Point3};
use crate::lane_model::KeyPointLane;
use crate::matching::{hungarian, ClassScores};

pub use chamfer::{chamfer_distance, polyline_chamfer_distance};

/// Chamfer thresholds (meters) averaged into the final AP.
pub const DEFAULT_AP_THRESHOLDS: [f64; 3] = [0.5, 1.0, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchCriteria {
    pub point_dist_thresh: f64,
    pub min_matched_fraction: f64,
    pub confidence_thresh: f64,
}

impl Default for MatchCriteria {
    fn default() -> Self {
        Self {
            point_dist_thresh: 1.5,
            min_matched_fraction: 0.75,
            confidence_thresh: 0.25,
        }
    }
}

impl MatchCriteria {
    pub fn validate(&self) -> Result<()> {
        if !(self.point_dist_thresh > 0.0) {
            return Err(LaneError::InvalidConfig(format!(
                "point_dist_thresh must be positive, got {}",
                self.point_dist_thresh
            )));
        }
        if !(self.min_matched_fraction > 0.0 && self.min_matched_fraction <= 1.0) {
            return Err(LaneError::InvalidConfig(format!(
                "min_matched_fraction must be in (0, 1], got {}",
                self.min_matched_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.confidence_thresh) {
            return Err(LaneError::InvalidConfig(format!(
                "confidence_thresh must be in [0, 1], got {}",
                self.confidence_thresh
            )));
        }
        Ok(())
    }
}

/// Geometry space used for AP distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApSpace {
    /// Lanes projected onto the ground (X-Y) plane.
    #[default]
    Xy,
    Xyz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalPrediction {
    pub keypoints: KeyPointLane,
    pub scores: ClassScores,
}

/// Predictions and ground truth of one frame. Ground-truth classes come
/// from `KeyPointLane::class_id`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalFrame {
    pub predictions: Vec<EvalPrediction>,
    pub ground_truth: Vec<KeyPointLane>,
}

pub fn lane_is_tp(pred: &KeyPointLane, gt: &KeyPointLane, crit: &MatchCriteria) -> Result<bool> {
    if pred.points.len() != gt.points.len() {
        return Err(LaneError::ShapeMismatch {
            left: pred.points.len(),
            right: gt.points.len(),
        });
    }
    if pred.points.is_empty() {
        return Err(LaneError::EmptyInput);
    }
    let close = pred
        .points
        .iter()
        .zip(&gt.points)
        .filter(|(p, q)| nalgebra::distance(*p, *q) <= crit.point_dist_thresh)
        .count();
    Ok(close as f64 >= crit.min_matched_fraction * pred.points.len() as f64)
}

fn passes_gate(p: &EvalPrediction, crit: &MatchCriteria) -> bool {
    p.scores.confidence() > crit.confidence_thresh
}

/// Greedy one-to-one pairing of gated predictions to ground truth.
/// Returns `(pred_index, gt_index)` pairs and the number of gated predictions.
fn greedy_matches(frame: &EvalFrame, crit: &MatchCriteria) -> Result<(Vec<(usize, usize)>, usize)> {
    let mut candidates = Vec::new();
    let mut kept = 0;
    for (pi, pred) in frame.predictions.iter().enumerate() {
        if !passes_gate(pred, crit) {
            continue;
        }
        kept += 1;
        for (gi, gt) in frame.ground_truth.iter().enumerate() {
            if lane_is_tp(&pred.keypoints, gt, crit)? {
                let d = chamfer_distance(&pred.keypoints.points, &gt.points)?;
                candidates.push((d, pi, gi));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut pred_used = vec![false; frame.predictions.len()];
    let mut gt_used = vec![false; frame.ground_truth.len()];
    let mut pairs = Vec::new();
    for (_, pi, gi) in candidates {
        if !pred_used[pi] && !gt_used[gi] {
            pred_used[pi] = true;
            gt_used[gi] = true;
            pairs.push((pi, gi));
        }
    }
    pairs.sort_unstable();
    Ok((pairs, kept))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScoreSummary {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

impl FScoreSummary {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f_score = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f_score,
        }
    }
}

pub fn f_score(frames: &[EvalFrame], crit: &MatchCriteria) -> Result<FScoreSummary> {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for frame in frames {
        let (pairs, kept) = greedy_matches(frame, crit)?;
        tp += pairs.len();
        fp += kept - pairs.len();
        fn_ += frame.ground_truth.len() - pairs.len();
    }
    Ok(FScoreSummary::from_counts(tp, fp, fn_))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryAccuracy {
    pub value: f64,
    pub correct: usize,
    pub matched: usize,
    /// Set when there were no matched pairs and `value` is the 0 fallback.
    pub undefined: bool,
}

/// Fraction of geometry-matched pairs whose most likely foreground class is the
/// ground-truth class.
pub fn category_accuracy(frames: &[EvalFrame], crit: &MatchCriteria) -> Result<CategoryAccuracy> {
    let mut correct = 0;
    let mut matched = 0;
    for frame in frames {
        let (pairs, _) = greedy_matches(frame, crit)?;
        matched += pairs.len();
        correct += pairs
            .iter()
            .filter(|&&(p, g)| {
                frame.predictions[p].scores.best_foreground().0 == frame.ground_truth[g].class_id
            })
            .count();
    }
    Ok(CategoryAccuracy {
        value: if matched == 0 {
            0.0
        } else {
            correct as f64 / matched as f64
        },
        correct,
        matched,
        undefined: matched == 0,
    })
}

fn to_space(points: &[Point3], space: ApSpace) -> Vec<Point3> {
    match space {
        ApSpace::Xy => flatten_xy(points),
        ApSpace::Xyz => points.to_vec(),
    }
}

/// Area under the precision/recall curve with the precision envelope
/// (all-point interpolation). `hits` is the TP flag of each ranked prediction.
pub fn ap_from_ranked_hits(hits: &[bool], num_gt: usize) -> f64 {
    if num_gt == 0 {
        return 0.0;
    }
    let mut recall = vec![0.0];
    let mut precision = vec![0.0];
    let mut tp = 0usize;
    for (k, &hit) in hits.iter().enumerate() {
        tp += hit as usize;
        recall.push(tp as f64 / num_gt as f64);
        precision.push(tp as f64 / (k + 1) as f64);
    }
    recall.push(1.0);
    precision.push(0.0);
    for i in (0..precision.len() - 1).rev() {
        precision[i] = precision[i].max(precision[i + 1]);
    }
    (1..recall.len())
        .filter(|&i| recall[i] != recall[i - 1])
        .map(|i| (recall[i] - recall[i - 1]) * precision[i])
        .sum()
}

/// AP of one class at one Chamfer threshold.
pub fn average_precision_at(
    frames: &[EvalFrame],
    class_id: usize,
    threshold: f64,
    space: ApSpace,
) -> Result<f64> {
    // (confidence, frame, prediction), ranked by confidence then input order.
    let mut ranked = Vec::new();
    let mut num_gt = 0;
    let mut gts: Vec<Vec<(usize, Vec<Point3>)>> = Vec::with_capacity(frames.len());
    for (fi, frame) in frames.iter().enumerate() {
        for (pi, pred) in frame.predictions.iter().enumerate() {
            let (class, conf) = pred.scores.best_foreground();
            if class == class_id {
                ranked.push((conf, fi, pi));
            }
        }
        let of_class: Vec<(usize, Vec<Point3>)> = frame
            .ground_truth
            .iter()
            .enumerate()
            .filter(|(_, g)| g.class_id == class_id)
            .map(|(gi, g)| (gi, to_space(&g.points, space)))
            .collect();
        num_gt += of_class.len();
        gts.push(of_class);
    }
    ranked.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut claimed: Vec<Vec<bool>> = gts.iter().map(|g| vec![false; g.len()]).collect();
    let mut hits = Vec::with_capacity(ranked.len());
    for &(_, fi, pi) in &ranked {
        let pred = to_space(&frames[fi].predictions[pi].keypoints.points, space);
        let mut best: Option<(f64, usize)> = None;
        for (slot, (_, gt)) in gts[fi].iter().enumerate() {
            if claimed[fi][slot] {
                continue;
            }
            let d = chamfer_distance(&pred, gt)?;
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, slot));
            }
        }
        match best {
            Some((d, slot)) if d <= threshold => {
                claimed[fi][slot] = true;
                hits.push(true);
            }
            _ => hits.push(false),
        }
    }
    Ok(ap_from_ranked_hits(&hits, num_gt))
}

/// Mean of [`average_precision_at`] over `thresholds`.
pub fn average_precision(
    frames: &[EvalFrame],
    class_id: usize,
    thresholds: &[f64],
    space: ApSpace,
) -> Result<f64> {
    if thresholds.is_empty() {
        return Err(LaneError::InvalidConfig("no AP thresholds given".into()));
    }
    let mut sum = 0.0;
    for &t in thresholds {
        sum += average_precision_at(frames, class_id, t, space)?;
    }
    Ok(sum / thresholds.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    /// AP averaged over thresholds, for every class with ground truth.
    pub ap_per_class: BTreeMap<usize, f64>,
    pub map: f64,
    pub category_accuracy: f64,
    pub category_accuracy_undefined: bool,
}

pub fn evaluate(
    frames: &[EvalFrame],
    crit: &MatchCriteria,
    thresholds: &[f64],
    space: ApSpace,
) -> Result<EvalResult> {
    crit.validate()?;
    let fs = f_score(frames, crit)?;
    let cat = category_accuracy(frames, crit)?;
    let classes: std::collections::BTreeSet<usize> = frames
        .iter()
        .flat_map(|f| f.ground_truth.iter().map(|g| g.class_id))
        .collect();
    let mut ap_per_class = BTreeMap::new();
    for class in classes {
        ap_per_class.insert(class, average_precision(frames, class, thresholds, space)?);
    }
    let map = if ap_per_class.is_empty() {
        0.0
    } else {
        ap_per_class.values().sum::<f64>() / ap_per_class.len() as f64
    };
    Ok(EvalResult {
        tp: fs.tp,
        fp: fs.fp,
        fn_: fs.fn_,
        precision: fs.precision,
        recall: fs.recall,
        f_score: fs.f_score,
        ap_per_class,
        map,
        category_accuracy: cat.value,
        category_accuracy_undefined: cat.undefined,
    })
}

/// Largest number of true positives any one-to-one pairing could reach in
/// a frame, found by optimal assignment over TP eligibility.
pub fn optimal_tp_count(frame: &EvalFrame, crit: &MatchCriteria) -> Result<usize> {
    let kept: Vec<&EvalPrediction> = frame
        .predictions
        .iter()
        .filter(|p| passes_gate(p, crit))
        .collect();
    let n = kept.len().max(frame.ground_truth.len());
    if n == 0 {
        return Ok(0);
    }
    let mut eligible = DMatrix::from_element(n, n, false);
    for (pi, pred) in kept.iter().enumerate() {
        for (gi, gt) in frame.ground_truth.iter().enumerate() {
            eligible[(pi, gi)] = lane_is_tp(&pred.keypoints, gt, crit)?;
        }
    }
    let cost = eligible.map(|e| if e { 0.0 } else { 1.0 });
    let assignment = hungarian(&cost)?;
    Ok(assignment
        .pairs
        .iter()
        .filter(|&&(p, g)| eligible[(p, g)])
        .count())
}

/// A frame where greedy TP matching found fewer pairs than the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchDivergence {
    pub frame_index: usize,
    pub greedy_tp: usize,
    pub optimal_tp: usize,
}

pub fn audit_greedy_matching(
    frames: &[EvalFrame],
    crit: &MatchCriteria,
) -> Result<Vec<MatchDivergence>> {
    let mut out = Vec::new();
    for (frame_index, frame) in frames.iter().enumerate() {
        let greedy_tp = greedy_matches(frame, crit)?.0.len();
        let optimal_tp = optimal_tp_count(frame, crit)?;
        if greedy_tp != optimal_tp {
            log::info!("frame {frame_index}: greedy TP {greedy_tp} vs optimal {optimal_tp}");
            out.push(MatchDivergence {
                frame_index,
                greedy_tp,
                optimal_tp,
            });
        }
    }
    Ok(out)
}
