//! Tool configuration.
//!
//! A config starts from the preset of its [`Mode`] and is overridden key by
//! key from a TOML file:
//!
//! ```toml
//! mode = "argoverse2"
//! control_points = 8
//!
//! [weights]
//! smoothness = 0.5
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::format::CameraRecord;
use crate::error::{LaneError, Result};
use crate::lane_model::ParamMode;
use crate::matching::{CostWeights, FocalParams};
use crate::metrics::{ApSpace, MatchCriteria, DEFAULT_AP_THRESHOLDS};
use crate::projection::{CameraRig, PerceptionRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Front-view, mostly forward lanes: 5 control points, 17 classes.
    #[default]
    Openlane,
    /// Complex shapes: 10 control points, 4 classes.
    Argoverse2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolConfig {
    pub mode: Mode,
    pub keypoints: usize,
    pub control_points: usize,
    /// Including the background class, which is the last index.
    pub num_classes: usize,
    pub param_mode: ParamMode,
    pub poly_degree: usize,
    pub weights: CostWeights,
    pub focal: FocalParams,
    pub criteria: MatchCriteria,
    pub ap_thresholds: Vec<f64>,
    pub ap_space: ApSpace,
    /// Box applied after the front-view transform.
    pub range: PerceptionRange,
    /// Rig used for frames that carry none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraRecord>,
}

impl ToolConfig {
    pub fn preset(mode: Mode) -> Self {
        let (control_points, num_classes, range) = match mode {
            Mode::Openlane => (5, 17, PerceptionRange::openlane()),
            Mode::Argoverse2 => (10, 4, PerceptionRange::argoverse2_front()),
        };
        Self {
            mode,
            keypoints: 20,
            control_points,
            num_classes,
            param_mode: ParamMode::Chord,
            poly_degree: 3,
            weights: CostWeights::default(),
            focal: FocalParams::default(),
            criteria: MatchCriteria::default(),
            ap_thresholds: DEFAULT_AP_THRESHOLDS.to_vec(),
            ap_space: ApSpace::Xy,
            range,
            camera: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.keypoints < 4 {
            return Err(LaneError::InvalidConfig(format!(
                "keypoints must be at least 4, got {}",
                self.keypoints
            )));
        }
        if self.control_points < 2 {
            return Err(LaneError::InvalidConfig(format!(
                "control_points must be at least 2, got {}",
                self.control_points
            )));
        }
        if self.num_classes < 2 {
            return Err(LaneError::InvalidConfig(
                "num_classes must include at least one class plus background".into(),
            ));
        }
        if self.ap_thresholds.is_empty() || self.ap_thresholds.iter().any(|t| !(*t > 0.0)) {
            return Err(LaneError::InvalidConfig(
                "ap_thresholds must be a non-empty list of positive distances".into(),
            ));
        }
        self.weights.validate()?;
        self.criteria.validate()?;
        self.range.validate()?;
        self.camera_rig()?;
        Ok(())
    }

    pub fn background_class(&self) -> usize {
        self.num_classes - 1
    }

    pub fn camera_rig(&self) -> Result<CameraRig> {
        match &self.camera {
            Some(c) => c.to_rig(),
            None => Ok(CameraRig::front_default()),
        }
    }

    /// Resolves a config: preset of the mode (CLI flag, else the file's
    /// `mode`, else openlane) overridden by the file's keys.
    pub fn from_toml(text: Option<&str>, mode: Option<Mode>) -> Result<Self> {
        let file: toml::Table = match text {
            Some(t) => toml::from_str(t).map_err(|e| LaneError::InvalidConfig(e.to_string()))?,
            None => toml::Table::new(),
        };
        let mode = match mode {
            Some(m) => m,
            None => match file.get("mode") {
                Some(v) => v
                    .clone()
                    .try_into()
                    .map_err(|e: toml::de::Error| LaneError::InvalidConfig(e.to_string()))?,
                None => Mode::default(),
            },
        };
        let mut merged = toml::Table::try_from(Self::preset(mode))
            .map_err(|e| LaneError::InvalidConfig(e.to_string()))?;
        merge(&mut merged, file);
        merged.insert(
            "mode".into(),
            toml::Value::try_from(mode).expect("mode serializes"),
        );
        let cfg: Self = merged
            .try_into()
            .map_err(|e: toml::de::Error| LaneError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, mode: Option<Mode>) -> Result<Self> {
        let text = path
            .map(|p| {
                std::fs::read_to_string(p).map_err(|e| LaneError::Io {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })
            })
            .transpose()?;
        Self::from_toml(text.as_deref(), mode)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let o = ToolConfig::preset(Mode::Openlane);
        assert_eq!((o.keypoints, o.control_points, o.num_classes), (20, 5, 17));
        let a = ToolConfig::preset(Mode::Argoverse2);
        assert_eq!((a.keypoints, a.control_points, a.num_classes), (20, 10, 4));
        assert_eq!(o.ap_thresholds, vec![0.5, 1.0, 1.5]);
        assert_eq!(o.criteria.confidence_thresh, 0.25);
        assert!(o.validate().is_ok() && a.validate().is_ok());
    }

    #[test]
    fn file_overrides_preset() {
        let cfg = ToolConfig::from_toml(
            Some("mode = \"argoverse2\"\ncontrol_points = 8\n[weights]\nsmoothness = 0.5\n"),
            None,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Argoverse2);
        assert_eq!(cfg.control_points, 8);
        assert_eq!(cfg.num_classes, 4);
        assert_eq!(cfg.weights.smoothness, 0.5);
        assert_eq!(cfg.weights.shape, 1.0);
    }

    #[test]
    fn cli_mode_wins() {
        let cfg =
            ToolConfig::from_toml(Some("mode = \"argoverse2\""), Some(Mode::Openlane)).unwrap();
        assert_eq!(cfg.mode, Mode::Openlane);
        assert_eq!(cfg.control_points, 5);
    }

    #[test]
    fn invalid_configs() {
        assert!(ToolConfig::from_toml(Some("keypoints = 3"), None).is_err());
        assert!(ToolConfig::from_toml(Some("ap_thresholds = []"), None).is_err());
        assert!(ToolConfig::from_toml(Some("unknown_key = 1"), None).is_err());
        assert!(ToolConfig::from_toml(Some("[criteria]\nconfidence_thresh = 2.0"), None).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ToolConfig::preset(Mode::Argoverse2);
        assert_eq!(
            ToolConfig::from_toml(Some(&cfg.to_toml()), None).unwrap(),
            cfg
        );
    }
}
