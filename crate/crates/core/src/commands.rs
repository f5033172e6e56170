//! The workflows behind the `lanefit` subcommands.
//!
//! Each command takes a resolved [`ToolConfig`] plus parsed frames and
//! returns a serializable report. Reports embed the full config, and their
//! records follow input order whatever order the workers finish in. Nothing
//! here touches the filesystem; the binary writes outputs once a command has
//! fully succeeded.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LaneError, Result};
use crate::geometry::Point3;
use crate::io::{synth_scene, LaneFileFrame, LaneRecord, SceneKind, ToolConfig};
use crate::lane_model::{
    classify_complexity, compare_models, fit_polynomial_baseline, modeling_error,
    resample_keypoints, sample_bezier, AnnotatedLane, Complexity, JointLane, KeyPointLane,
    ModelErrors, DENSE_SAMPLES,
};
use crate::matching::{match_frame, ClassScores, GroundTruthLane, PredictedLane, TermCosts};
use crate::metrics::{
    audit_greedy_matching, evaluate, EvalFrame, EvalPrediction, EvalResult, MatchDivergence,
};
use crate::projection::{range_filter_3d, surround_to_frontview};

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "LANEFIT_WORKERS";

/// Worker count: `LANEFIT_WORKERS` if set to a positive integer, otherwise
/// the available parallelism.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                log::warn!("ignoring {WORKERS_ENV}={v:?}; expected a positive integer");
                available
            }
        },
        Err(_) => available,
    }
}

/// Maps `f` over `items` on a bounded pool, keeping input order.
fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| LaneError::InvalidConfig(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(f).collect())
}

fn xyz(points: &[Point3]) -> Vec<[f64; 3]> {
    points.iter().map(|p| [p.x, p.y, p.z]).collect()
}

fn frame_lanes(frame: &LaneFileFrame) -> Vec<AnnotatedLane> {
    frame.lanes.iter().map(|r| r.lane.clone()).collect()
}

/// Long-format CSV of curves for external plotting.
#[derive(Debug, Default)]
struct PlotCsv(String);

impl PlotCsv {
    fn new() -> Self {
        Self("frame_id,lane,series,index,x,y,z\n".into())
    }

    fn series(&mut self, frame: &str, lane: usize, name: &str, points: &[Point3]) {
        for (i, p) in points.iter().enumerate() {
            let _ = writeln!(self.0, "{frame},{lane},{name},{i},{},{},{}", p.x, p.y, p.z);
        }
    }
}

// ---------------------------------------------------------------- fit

#[derive(Debug, Clone, Serialize)]
pub struct FitLane {
    pub lane: usize,
    pub class_id: usize,
    pub num_points: usize,
    pub keypoints: Vec<[f64; 3]>,
    pub controls: Vec<[f64; 3]>,
    pub bezier_residual_rms: f64,
    pub rank_deficient: bool,
    pub interpolation_error: f64,
    pub bezier_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitFrame {
    pub frame_id: String,
    pub complexity: Complexity,
    pub lanes: Vec<FitLane>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub frames: Vec<FitFrame>,
    #[serde(skip)]
    pub plot_csv: String,
}

impl FitReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let lanes: usize = self.frames.iter().map(|f| f.lanes.len()).sum();
        let _ = writeln!(
            s,
            "fit: {} frame(s), {lanes} lane(s), P_k = {}, P_c = {}",
            self.frames.len(),
            self.config.keypoints,
            self.config.control_points
        );
        for f in &self.frames {
            for l in &f.lanes {
                let _ = writeln!(
                    s,
                    "  {} lane {}: {} pts, bezier rms {:.6} m, error interp {:.6} m, bezier {:.6} m{}",
                    f.frame_id,
                    l.lane,
                    l.num_points,
                    l.bezier_residual_rms,
                    l.interpolation_error,
                    l.bezier_error,
                    if l.rank_deficient { " (rank deficient)" } else { "" }
                );
            }
        }
        s
    }
}

/// Joint key-point and Bézier modeling of every lane.
pub fn cmd_fit(cfg: &ToolConfig, frames: &[LaneFileFrame]) -> Result<FitReport> {
    cfg.validate()?;
    let fitted = par_map(frames, |frame| {
        let mut plot = PlotCsv::default();
        let mut lanes = Vec::with_capacity(frame.lanes.len());
        for (i, rec) in frame.lanes.iter().enumerate() {
            let ctx = |e: LaneError| e.in_frame(&frame.frame_id, Some(i));
            let (joint, fit) = JointLane::from_annotated(
                &rec.lane,
                cfg.keypoints,
                cfg.control_points,
                cfg.param_mode,
            )
            .map_err(ctx)?;
            if fit.rank_deficient {
                log::warn!(
                    "frame `{}`, lane {i}: rank-deficient Bézier fit",
                    frame.frame_id
                );
            }
            let dense = sample_bezier(&joint.controls, DENSE_SAMPLES).map_err(ctx)?;
            plot.series(&frame.frame_id, i, "annotation", rec.lane.points());
            plot.series(&frame.frame_id, i, "keypoints", &joint.keypoints.points);
            plot.series(&frame.frame_id, i, "controls", &joint.controls.controls);
            plot.series(&frame.frame_id, i, "bezier", &dense.points);
            lanes.push(FitLane {
                lane: i,
                class_id: rec.lane.class_id(),
                num_points: rec.lane.len(),
                keypoints: xyz(&joint.keypoints.points),
                controls: xyz(&joint.controls.controls),
                bezier_residual_rms: fit.residual_rms(),
                rank_deficient: fit.rank_deficient,
                interpolation_error: modeling_error(&joint.keypoints, &rec.lane),
                bezier_error: modeling_error(&dense, &rec.lane),
            });
        }
        let fit = FitFrame {
            frame_id: frame.frame_id.clone(),
            complexity: classify_complexity(&frame_lanes(frame)),
            lanes,
        };
        Ok((fit, plot.0))
    })?;
    let mut plot_csv = PlotCsv::new().0;
    let mut out = Vec::with_capacity(fitted.len());
    for (f, p) in fitted {
        plot_csv.push_str(&p);
        out.push(f);
    }
    Ok(FitReport {
        command: "fit",
        config: cfg.clone(),
        frames: out,
        plot_csv,
    })
}

// ---------------------------------------------------------------- pairing

/// Ground-truth frames each paired with the prediction frame of the same id
/// (empty when predictions lack that id).
fn pair_frames<'a>(
    gt: &'a [LaneFileFrame],
    preds: &'a [LaneFileFrame],
) -> Vec<(&'a LaneFileFrame, Option<&'a LaneFileFrame>)> {
    let by_id: HashMap<&str, &LaneFileFrame> =
        preds.iter().map(|f| (f.frame_id.as_str(), f)).collect();
    for p in preds {
        if !gt.iter().any(|g| g.frame_id == p.frame_id) {
            log::warn!(
                "prediction frame `{}` has no ground truth; ignored",
                p.frame_id
            );
        }
    }
    gt.iter()
        .map(|g| (g, by_id.get(g.frame_id.as_str()).copied()))
        .collect()
}

fn pred_records(frame: Option<&LaneFileFrame>) -> &[LaneRecord] {
    frame.map_or(&[], |f| f.lanes.as_slice())
}

// ---------------------------------------------------------------- match

#[derive(Debug, Clone, Serialize)]
pub struct MatchPair {
    pub prediction: usize,
    /// `None` when the prediction is assigned to a "no object" slot.
    pub ground_truth: Option<usize>,
    /// Weighted terms of this pair.
    pub terms: TermCosts,
    pub cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchFrameReport {
    pub frame_id: String,
    pub num_predictions: usize,
    pub num_ground_truth: usize,
    pub pairs: Vec<MatchPair>,
    /// Weighted per-term sums over all pairs.
    pub terms: TermCosts,
    pub assignment_cost: f64,
    pub total_loss: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub frames: Vec<MatchFrameReport>,
    pub total_loss: f64,
}

impl MatchReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "match: {} frame(s), total loss {:.6}",
            self.frames.len(),
            self.total_loss
        );
        for f in &self.frames {
            let _ = writeln!(
                s,
                "  {}: {} pred / {} gt, loss {:.6} (pos {:.4}, shape {:.4}, smooth {:.4}, bezier {:.4}, class {:.4})",
                f.frame_id,
                f.num_predictions,
                f.num_ground_truth,
                f.total_loss,
                f.terms.position,
                f.terms.shape,
                f.terms.smoothness,
                f.terms.bezier,
                f.terms.class
            );
            for p in &f.pairs {
                let gt = p.ground_truth.map_or("none".to_string(), |g| g.to_string());
                let _ = writeln!(s, "    pred {} -> gt {gt}: {:.6}", p.prediction, p.cost);
            }
        }
        s
    }
}

fn joint(cfg: &ToolConfig, lane: &AnnotatedLane) -> Result<JointLane> {
    lane.check_class(cfg.num_classes)?;
    Ok(JointLane::from_annotated(lane, cfg.keypoints, cfg.control_points, cfg.param_mode)?.0)
}

/// Optimal assignment of predictions to ground truth, frame by frame, with
/// the loss evaluated under that assignment.
pub fn cmd_match(
    cfg: &ToolConfig,
    ground_truth: &[LaneFileFrame],
    predictions: &[LaneFileFrame],
) -> Result<MatchReport> {
    cfg.validate()?;
    let pairs = pair_frames(ground_truth, predictions);
    let frames = par_map(&pairs, |&(gt_frame, pred_frame)| {
        let id = &gt_frame.frame_id;
        let preds = pred_records(pred_frame)
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let lane = || -> Result<PredictedLane> {
                    let j = joint(cfg, &r.lane)?;
                    Ok(PredictedLane {
                        keypoints: j.keypoints,
                        controls: j.controls,
                        scores: r.class_scores(cfg.num_classes)?,
                    })
                };
                lane().map_err(|e| e.in_frame(id, Some(i)))
            })
            .collect::<Result<Vec<_>>>()?;
        let gts = gt_frame
            .lanes
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let j = joint(cfg, &r.lane).map_err(|e| e.in_frame(id, Some(i)))?;
                Ok(GroundTruthLane::new(j.keypoints, j.controls))
            })
            .collect::<Result<Vec<_>>>()?;
        let num_gt = gts.len();
        let m =
            match_frame(&preds, gts, &cfg.weights, cfg.focal).map_err(|e| e.in_frame(id, None))?;
        let pairs = m
            .assignment
            .pairs
            .iter()
            .zip(&m.loss.per_pair)
            .map(|(&(p, g), terms)| MatchPair {
                prediction: p,
                ground_truth: (g < num_gt).then_some(g),
                terms: *terms,
                cost: terms.sum(),
            })
            .collect();
        Ok(MatchFrameReport {
            frame_id: id.clone(),
            num_predictions: preds.len(),
            num_ground_truth: num_gt,
            pairs,
            terms: m.loss.terms,
            assignment_cost: m.assignment.total_cost,
            total_loss: m.loss.total,
        })
    })?;
    let total_loss = frames.iter().map(|f| f.total_loss).sum();
    Ok(MatchReport {
        command: "match",
        config: cfg.clone(),
        frames,
        total_loss,
    })
}

// ---------------------------------------------------------------- transform

#[derive(Debug, Clone, Serialize)]
pub struct TransformFrame {
    pub frame_id: String,
    pub lanes_in: usize,
    pub lanes_out: usize,
    pub points_in: usize,
    pub points_out: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub frames: Vec<TransformFrame>,
    #[serde(skip)]
    pub output: Vec<LaneFileFrame>,
}

impl TransformReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "transform: {} frame(s)", self.frames.len());
        for f in &self.frames {
            let _ = writeln!(
                s,
                "  {}: {} -> {} lane(s), {} -> {} point(s)",
                f.frame_id, f.lanes_in, f.lanes_out, f.points_in, f.points_out
            );
        }
        s
    }
}

/// Surround-view lanes to front-view lanes: the camera-visible parts of each
/// lane, clipped to the configured perception range. Frames without a
/// camera use the config's rig.
pub fn cmd_transform(cfg: &ToolConfig, frames: &[LaneFileFrame]) -> Result<TransformReport> {
    cfg.validate()?;
    let default_rig = cfg.camera_rig()?;
    let results = par_map(frames, |frame| {
        let rig = frame.camera.as_ref().unwrap_or(&default_rig);
        let visible = surround_to_frontview(&frame_lanes(frame), rig)
            .map_err(|e| e.in_frame(&frame.frame_id, None))?;
        let kept = range_filter_3d(&visible, &cfg.range);
        let summary = TransformFrame {
            frame_id: frame.frame_id.clone(),
            lanes_in: frame.lanes.len(),
            lanes_out: kept.len(),
            points_in: frame.lanes.iter().map(|r| r.lane.len()).sum(),
            points_out: kept.iter().map(AnnotatedLane::len).sum(),
        };
        let out = LaneFileFrame {
            frame_id: frame.frame_id.clone(),
            lanes: kept.into_iter().map(LaneRecord::new).collect(),
            camera: Some(rig.clone()),
        };
        Ok((summary, out))
    })?;
    let (summaries, output) = results.into_iter().unzip();
    Ok(TransformReport {
        command: "transform",
        config: cfg.clone(),
        frames: summaries,
        output,
    })
}

// ---------------------------------------------------------------- eval

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub num_frames: usize,
    pub result: EvalResult,
    /// Frames where greedy TP pairing found fewer pairs than the optimum.
    pub greedy_divergences: Vec<MatchDivergence>,
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let r = &self.result;
        let mut s = String::new();
        let _ = writeln!(s, "eval: {} frame(s)", self.num_frames);
        let _ = writeln!(s, "  TP {}  FP {}  FN {}", r.tp, r.fp, r.fn_);
        let _ = writeln!(
            s,
            "  precision {:.4}  recall {:.4}  F-Score {:.4}",
            r.precision, r.recall, r.f_score
        );
        let cat = if r.category_accuracy_undefined {
            "undefined (no true positives)".to_string()
        } else {
            format!("{:.4}", r.category_accuracy)
        };
        let _ = writeln!(s, "  category accuracy {cat}");
        let thresholds: Vec<String> = self
            .config
            .ap_thresholds
            .iter()
            .map(|t| format!("{t}"))
            .collect();
        let _ = writeln!(
            s,
            "  mAP {:.4} over thresholds {{{}}} m",
            r.map,
            thresholds.join(", ")
        );
        for (class, ap) in &r.ap_per_class {
            let _ = writeln!(s, "    class {class}: AP {ap:.4}");
        }
        if !self.greedy_divergences.is_empty() {
            let _ = writeln!(
                s,
                "  note: greedy pairing is below optimal in {} frame(s)",
                self.greedy_divergences.len()
            );
        }
        s
    }
}

/// Lanes clipped to the perception range and resampled, each with its
/// scores when the record carries any.
fn eval_lanes(
    cfg: &ToolConfig,
    frame: &str,
    records: &[LaneRecord],
) -> Result<Vec<(KeyPointLane, Option<ClassScores>)>> {
    let mut out = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let ctx = |e: LaneError| e.in_frame(frame, Some(i));
        r.lane.check_class(cfg.num_classes).map_err(ctx)?;
        let scores = match (&r.scores, r.confidence) {
            (None, None) => None,
            _ => Some(r.class_scores(cfg.num_classes).map_err(ctx)?),
        };
        for piece in range_filter_3d(std::slice::from_ref(&r.lane), &cfg.range) {
            out.push((
                resample_keypoints(&piece, cfg.keypoints).map_err(ctx)?,
                scores.clone(),
            ));
        }
    }
    Ok(out)
}

/// Builds one evaluation frame: both sides are clipped to the perception
/// range and resampled to `P_k` key points.
fn eval_frame(
    cfg: &ToolConfig,
    gt: &LaneFileFrame,
    preds: Option<&LaneFileFrame>,
) -> Result<EvalFrame> {
    let ground_truth = eval_lanes(cfg, &gt.frame_id, &gt.lanes)?
        .into_iter()
        .map(|(k, _)| k)
        .collect();
    let predictions = eval_lanes(cfg, &gt.frame_id, pred_records(preds))?
        .into_iter()
        .map(|(keypoints, scores)| {
            let scores = match scores {
                Some(s) => s,
                None => ClassScores::one_hot(keypoints.class_id, cfg.num_classes)?,
            };
            Ok(EvalPrediction { keypoints, scores })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalFrame {
        predictions,
        ground_truth,
    })
}

/// F-Score, category accuracy and AP of predictions against ground truth.
pub fn cmd_eval(
    cfg: &ToolConfig,
    ground_truth: &[LaneFileFrame],
    predictions: &[LaneFileFrame],
) -> Result<EvalReport> {
    cfg.validate()?;
    let pairs = pair_frames(ground_truth, predictions);
    let frames = par_map(&pairs, |&(g, p)| eval_frame(cfg, g, p))?;
    let result = evaluate(&frames, &cfg.criteria, &cfg.ap_thresholds, cfg.ap_space)?;
    let greedy_divergences = audit_greedy_matching(&frames, &cfg.criteria)?;
    Ok(EvalReport {
        command: "eval",
        config: cfg.clone(),
        num_frames: frames.len(),
        result,
        greedy_divergences,
    })
}

// ---------------------------------------------------------------- compare-models

#[derive(Debug, Clone, Serialize)]
pub struct LaneModelErrors {
    pub frame_id: String,
    pub lane: usize,
    pub class_id: usize,
    pub complexity: Complexity,
    pub errors: ModelErrors,
}

/// Mean modeling error per model family over a set of lanes.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SplitSummary {
    pub lanes: usize,
    pub polynomial: f64,
    pub interpolation: f64,
    pub bezier: f64,
}

impl SplitSummary {
    fn of<'a>(rows: impl Iterator<Item = &'a LaneModelErrors>) -> Self {
        let mut s = SplitSummary::default();
        for r in rows {
            s.lanes += 1;
            s.polynomial += r.errors.polynomial;
            s.interpolation += r.errors.interpolation;
            s.bezier += r.errors.bezier;
        }
        if s.lanes > 0 {
            let n = s.lanes as f64;
            s.polynomial /= n;
            s.interpolation /= n;
            s.bezier /= n;
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub all: SplitSummary,
    pub simple: SplitSummary,
    pub complex: SplitSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub lanes: Vec<LaneModelErrors>,
    pub summary: CompareSummary,
    #[serde(skip)]
    pub plot_csv: String,
}

impl CompareReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "compare-models: polynomial degree {}, P_k = {}, P_c = {}",
            self.config.poly_degree, self.config.keypoints, self.config.control_points
        );
        let _ = writeln!(
            s,
            "  {:<8} {:>6} {:>12} {:>14} {:>12}",
            "split", "lanes", "polynomial", "interpolation", "bezier"
        );
        for (name, sp) in [
            ("all", &self.summary.all),
            ("simple", &self.summary.simple),
            ("complex", &self.summary.complex),
        ] {
            let _ = writeln!(
                s,
                "  {name:<8} {:>6} {:>12.6} {:>14.6} {:>12.6}",
                sp.lanes, sp.polynomial, sp.interpolation, sp.bezier
            );
        }
        s
    }
}

/// Modeling error of the polynomial baseline, key-point interpolation and
/// the Bézier fit for every lane, split by scene complexity.
pub fn cmd_compare_models(cfg: &ToolConfig, frames: &[LaneFileFrame]) -> Result<CompareReport> {
    cfg.validate()?;
    let per_frame = par_map(frames, |frame| {
        let complexity = classify_complexity(&frame_lanes(frame));
        let mut rows = Vec::with_capacity(frame.lanes.len());
        let mut plot = PlotCsv::default();
        for (i, rec) in frame.lanes.iter().enumerate() {
            let ctx = |e: LaneError| e.in_frame(&frame.frame_id, Some(i));
            let lane = &rec.lane;
            let errors = compare_models(
                lane,
                cfg.keypoints,
                cfg.control_points,
                cfg.poly_degree,
                cfg.param_mode,
            )
            .map_err(ctx)?;
            let joint = joint(cfg, lane).map_err(ctx)?;
            let poly = fit_polynomial_baseline(lane, cfg.poly_degree).map_err(ctx)?;
            plot.series(&frame.frame_id, i, "annotation", lane.points());
            plot.series(
                &frame.frame_id,
                i,
                "polynomial",
                &poly.sample(DENSE_SAMPLES, lane.class_id()).points,
            );
            plot.series(&frame.frame_id, i, "interpolation", &joint.keypoints.points);
            plot.series(
                &frame.frame_id,
                i,
                "bezier",
                &sample_bezier(&joint.controls, DENSE_SAMPLES)
                    .map_err(ctx)?
                    .points,
            );
            rows.push(LaneModelErrors {
                frame_id: frame.frame_id.clone(),
                lane: i,
                class_id: lane.class_id(),
                complexity,
                errors,
            });
        }
        Ok((rows, plot.0))
    })?;
    let mut lanes = Vec::new();
    let mut plot_csv = PlotCsv::new().0;
    for (rows, p) in per_frame {
        lanes.extend(rows);
        plot_csv.push_str(&p);
    }
    let summary = CompareSummary {
        all: SplitSummary::of(lanes.iter()),
        simple: SplitSummary::of(lanes.iter().filter(|r| r.complexity == Complexity::Simple)),
        complex: SplitSummary::of(lanes.iter().filter(|r| r.complexity == Complexity::Complex)),
    };
    Ok(CompareReport {
        command: "compare-models",
        config: cfg.clone(),
        lanes,
        summary,
        plot_csv,
    })
}

// ---------------------------------------------------------------- synth

#[derive(Debug, Clone, Serialize)]
pub struct SynthFrame {
    pub frame_id: String,
    pub kind: String,
    pub seed: u64,
    pub lanes: usize,
    pub complexity: Complexity,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub command: &'static str,
    pub config: ToolConfig,
    pub noise_sigma: f64,
    pub frames: Vec<SynthFrame>,
    #[serde(skip)]
    pub output: Vec<LaneFileFrame>,
}

impl SynthReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "synth: {} frame(s), noise sigma {} m",
            self.frames.len(),
            self.noise_sigma
        );
        for f in &self.frames {
            let _ = writeln!(
                s,
                "  {}: {} with {} lane(s), {:?}",
                f.frame_id, f.kind, f.lanes, f.complexity
            );
        }
        s
    }
}

/// `count` synthetic frames. Frame `i` uses seed `seed + i` and cycles
/// through `kinds`.
pub fn cmd_synth(
    cfg: &ToolConfig,
    kinds: &[SceneKind],
    count: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<SynthReport> {
    cfg.validate()?;
    if kinds.is_empty() {
        return Err(LaneError::InvalidConfig("no scene kinds given".into()));
    }
    let jobs: Vec<(SceneKind, u64)> = (0..count)
        .map(|i| (kinds[i % kinds.len()], seed.wrapping_add(i as u64)))
        .collect();
    let output = par_map(&jobs, |&(kind, s)| synth_scene(kind, noise_sigma, s))?;
    let frames = jobs
        .iter()
        .zip(&output)
        .map(|(&(kind, s), f)| SynthFrame {
            frame_id: f.frame_id.clone(),
            kind: kind.to_string(),
            seed: s,
            lanes: f.lanes.len(),
            complexity: classify_complexity(&frame_lanes(f)),
        })
        .collect();
    Ok(SynthReport {
        command: "synth",
        config: cfg.clone(),
        noise_sigma,
        frames,
        output,
    })
}
