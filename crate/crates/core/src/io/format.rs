//! JSON-lines lane files: one frame object per line.
//!
//! ```text
//! {"frame_id":"000001","lanes":[{"points":[[x,y,z],...],"class_id":0}],"camera":{...}}
//! ```
//!
//! Prediction files add `confidence` and/or `scores` to each lane. The full
//! schema is documented in `docs/lane_format.md`.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};
use crate::geometry::Point3;
use crate::lane_model::AnnotatedLane;
use crate::matching::ClassScores;
use crate::projection::CameraRig;

#[derive(Debug, Clone, PartialEq)]
pub struct LaneRecord {
    pub lane: AnnotatedLane,
    pub confidence: Option<f64>,
    pub scores: Option<ClassScores>,
}

impl LaneRecord {
    pub fn new(lane: AnnotatedLane) -> Self {
        Self {
            lane,
            confidence: None,
            scores: None,
        }
    }

    /// Class scores of a prediction: the explicit vector if present,
    /// otherwise `confidence` on the lane's class (1.0 when absent) with the
    /// remainder on background.
    pub fn class_scores(&self, num_classes: usize) -> Result<ClassScores> {
        match &self.scores {
            Some(s) if s.num_classes() != num_classes => Err(LaneError::InvalidScores(format!(
                "{} scores for {num_classes} classes",
                s.num_classes()
            ))),
            Some(s) => Ok(s.clone()),
            None => ClassScores::with_confidence(
                self.lane.class_id(),
                self.confidence.unwrap_or(1.0),
                num_classes,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaneFileFrame {
    pub frame_id: String,
    pub lanes: Vec<LaneRecord>,
    pub camera: Option<CameraRig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraRecord {
    /// Row-major 3x3.
    pub intrinsic: [[f64; 3]; 3],
    /// Row-major 4x4 ego-to-camera transform.
    pub extrinsic: [[f64; 4]; 4],
    pub image_h: u32,
    pub image_w: u32,
}

impl CameraRecord {
    pub fn to_rig(&self) -> Result<CameraRig> {
        let k = Matrix3::from_fn(|i, j| self.intrinsic[i][j]);
        let e = Matrix4::from_fn(|i, j| self.extrinsic[i][j]);
        CameraRig::new(k, e, self.image_h, self.image_w)
    }

    pub fn from_rig(rig: &CameraRig) -> Self {
        let k = rig.intrinsic();
        let e = rig.extrinsic();
        Self {
            intrinsic: std::array::from_fn(|i| std::array::from_fn(|j| k[(i, j)])),
            extrinsic: std::array::from_fn(|i| std::array::from_fn(|j| e[(i, j)])),
            image_h: rig.image_h(),
            image_w: rig.image_w(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaneRaw {
    points: Vec<[f64; 3]>,
    class_id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scores: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRaw {
    frame_id: String,
    lanes: Vec<LaneRaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    camera: Option<CameraRecord>,
}

fn lane_from_raw(raw: LaneRaw) -> Result<LaneRecord> {
    let points = raw
        .points
        .iter()
        .map(|p| Point3::new(p[0], p[1], p[2]))
        .collect();
    let lane = AnnotatedLane::collapsing_duplicates(points, raw.class_id)?;
    if let Some(c) = raw.confidence {
        if !(0.0..=1.0).contains(&c) {
            return Err(LaneError::InvalidScores(format!(
                "confidence {c} is outside [0, 1]"
            )));
        }
    }
    let scores = raw.scores.map(ClassScores::new).transpose()?;
    Ok(LaneRecord {
        lane,
        confidence: raw.confidence,
        scores,
    })
}

fn frame_to_raw(frame: &LaneFileFrame) -> FrameRaw {
    FrameRaw {
        frame_id: frame.frame_id.clone(),
        lanes: frame
            .lanes
            .iter()
            .map(|r| LaneRaw {
                points: r.lane.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
                class_id: r.lane.class_id(),
                confidence: r.confidence,
                scores: r.scores.as_ref().map(|s| s.probs().to_vec()),
            })
            .collect(),
        camera: frame.camera.as_ref().map(CameraRecord::from_rig),
    }
}

/// Parses JSON-lines text. `source` names the input in diagnostics.
pub fn parse_frames(text: &str, source: &str) -> Result<Vec<LaneFileFrame>> {
    let mut frames = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| LaneError::Parse {
            path: source.to_string(),
            line: line_no,
            message,
        };
        let raw: FrameRaw = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
        if !ids.insert(raw.frame_id.clone()) {
            return Err(parse_err(format!("duplicate frame_id `{}`", raw.frame_id)));
        }
        let frame_id = raw.frame_id;
        let camera = raw
            .camera
            .map(|c| c.to_rig())
            .transpose()
            .map_err(|e| parse_err(format!("frame `{frame_id}`: {e}")))?;
        let lanes = raw
            .lanes
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                lane_from_raw(l)
                    .map_err(|e| parse_err(format!("frame `{frame_id}`, lane {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        frames.push(LaneFileFrame {
            frame_id,
            lanes,
            camera,
        });
    }
    Ok(frames)
}

pub fn load_frames(path: &Path) -> Result<Vec<LaneFileFrame>> {
    let text = std::fs::read_to_string(path).map_err(|e| LaneError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_frames(&text, &path.display().to_string())
}

/// One JSON object per line, each line terminated by `\n`.
pub fn frames_to_string(frames: &[LaneFileFrame]) -> String {
    let mut out = String::new();
    for f in frames {
        out.push_str(&serde_json::to_string(&frame_to_raw(f)).expect("frames serialize"));
        out.push('\n');
    }
    out
}

pub fn save_frames(path: &Path, frames: &[LaneFileFrame]) -> Result<()> {
    std::fs::write(path, frames_to_string(frames)).map_err(|e| LaneError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
