//! Joint Bézier / key-point modeling of 3D lanes.
//!
//! A lane is carried in two forms at once: `P_k` key points resampled at
//! equal arc length, and a Bézier curve of `P_c` control points fitted by
//! least squares. Predictions are matched to ground truth with a
//! Hungarian assignment over a cost that combines position, shape,
//! smoothness, control-point and class terms, and evaluated with F-Score,
//! category accuracy and multi-threshold AP.
//!
//! ```
//! use lanefit::geometry::Point3;
//! use lanefit::lane_model::{AnnotatedLane, JointLane, ParamMode};
//!
//! let pts = (0..30).map(|i| Point3::new(0.0, i as f64, 0.0)).collect();
//! let lane = AnnotatedLane::new(pts, 0).unwrap();
//! let (joint, _fit) = JointLane::from_annotated(&lane, 20, 5, ParamMode::Chord).unwrap();
//! assert_eq!(joint.keypoints.points.len(), 20);
//! assert_eq!(joint.controls.controls.len(), 5);
//! ```

// `!(x > 0.0)` style checks are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lane_model;
pub mod matching;
pub mod metrics;
pub mod projection;

pub use error::{LaneError, Result};
