use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};
use crate::lane_model::{BezierLane, KeyPointLane};

/// Per-class probabilities of one predicted lane. The last index is the
/// background ("no object") class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    probs: Vec<f64>,
}

impl ClassScores {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(LaneError::InvalidScores(format!(
                "need at least one foreground class plus background, got {} scores",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(LaneError::InvalidScores(format!(
                "probability {p} is outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(LaneError::InvalidScores(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    /// All mass on `class`.
    pub fn one_hot(class: usize, num_classes: usize) -> Result<Self> {
        if class >= num_classes {
            return Err(LaneError::InvalidClass { class, num_classes });
        }
        let mut probs = vec![0.0; num_classes];
        probs[class] = 1.0;
        Self::new(probs)
    }

    /// `confidence` on `class`, the remainder on background.
    pub fn with_confidence(class: usize, confidence: f64, num_classes: usize) -> Result<Self> {
        if class >= num_classes {
            return Err(LaneError::InvalidClass { class, num_classes });
        }
        if !(0.0..=1.0).contains(&confidence) {
            return Err(LaneError::InvalidScores(format!(
                "confidence {confidence} is outside [0, 1]"
            )));
        }
        let mut probs = vec![0.0; num_classes];
        probs[num_classes - 1] = 1.0 - confidence;
        probs[class] += confidence;
        Self::new(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_classes(&self) -> usize {
        self.probs.len()
    }

    pub fn background(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn prob(&self, class: usize) -> Result<f64> {
        self.probs
            .get(class)
            .copied()
            .ok_or(LaneError::InvalidClass {
                class,
                num_classes: self.probs.len(),
            })
    }

    /// Most likely class, background included. Ties go to the lower index.
    pub fn argmax(&self) -> usize {
        argmax(&self.probs)
    }

    /// Most likely foreground class and its probability.
    pub fn best_foreground(&self) -> (usize, f64) {
        let fg = &self.probs[..self.probs.len() - 1];
        let c = argmax(fg);
        (c, fg[c])
    }

    /// Lane confidence: the largest foreground probability.
    pub fn confidence(&self) -> f64 {
        self.best_foreground().1
    }
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedLane {
    pub keypoints: KeyPointLane,
    pub controls: BezierLane,
    pub scores: ClassScores,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthLane {
    pub keypoints: KeyPointLane,
    pub controls: BezierLane,
    pub class_id: usize,
    pub is_padding: bool,
}

impl GroundTruthLane {
    pub fn new(keypoints: KeyPointLane, controls: BezierLane) -> Self {
        let class_id = keypoints.class_id;
        Self {
            keypoints,
            controls,
            class_id,
            is_padding: false,
        }
    }

    /// A "no object" slot. Its geometry is empty and never read.
    pub fn padding(background: usize) -> Self {
        Self {
            keypoints: KeyPointLane {
                points: Vec::new(),
                class_id: background,
            },
            controls: BezierLane {
                controls: Vec::new(),
                class_id: background,
            },
            class_id: background,
            is_padding: true,
        }
    }
}

/// Axis-aligned box `(x_min, y_min, z_min, x_max, y_max, z_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box6 {
    pub x_min: f64,
    pub y_min: f64,
    pub z_min: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub z_max: f64,
}

impl Box6 {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.x_min, self.y_min, self.z_min, self.x_max, self.y_max, self.z_max,
        ]
    }
}

/// Weights of the five matching terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostWeights {
    pub position: f64,
    pub shape: f64,
    pub smoothness: f64,
    pub bezier: f64,
    pub class: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            position: 1.0,
            shape: 1.0,
            smoothness: 1.0,
            bezier: 1.0,
            class: 1.0,
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.position,
            self.shape,
            self.smoothness,
            self.bezier,
            self.class,
        ];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LaneError::InvalidConfig(format!(
                "cost weights must be finite and non-negative: {self:?}"
            )));
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(LaneError::InvalidConfig("all cost weights are zero".into()));
        }
        Ok(())
    }
}

/// Focal-loss hyperparameters for the class term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocalParams {
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for FocalParams {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            gamma: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    /// `(pred_index, gt_index)`, sorted by prediction index.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
}
