//! Lane representations and the conversions between them.
//!
//! An [`AnnotatedLane`] is whatever the annotator produced: an ordered 3D
//! polyline of arbitrary length. Every lane is converted into two fixed-size
//! forms that are used side by side:
//!
//! * a [`KeyPointLane`] of `P_k` points spaced uniformly in arc length, built
//!   by piecewise linear interpolation, and
//! * a [`BezierLane`] of `P_c` control points, the least-squares Bezier fit
//!   of the annotated points.
//!
//! A third family, [`PolyBaselineLane`], models X and Z as polynomials of Y.
//! It only exists as the comparison baseline for [`modeling_error`].

mod bezier;
mod complexity;
mod lsq;
mod polynomial;
mod resample;

use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};
use crate::geometry::{self, Point3, COINCIDENT_EPS};

pub use bezier::{
    bernstein_design_matrix, bernstein_row, bezier_residual_sum_sq, eval_bezier, fit_bezier,
    fit_bezier_with, sample_bezier, uniform_params, BezierFit,
};
pub use complexity::{classify_complexity, max_heading_angle_deg, Complexity};
pub use lsq::{solve_least_squares, LeastSquares};
pub use polynomial::{fit_polynomial_baseline, PolyBaselineLane};
pub use resample::{chord_length_params, lerp_point, resample_keypoints};

/// Number of samples used to turn a continuous model into a polyline
/// before measuring its modeling error.
pub const DENSE_SAMPLES: usize = 256;

/// How curve parameters are assigned to annotated points before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    /// Normalized cumulative arc length.
    #[default]
    Chord,
    /// `i / (P_a - 1)` regardless of spacing.
    Uniform,
}

/// A variable-length annotated polyline with a class label.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedLane {
    points: Vec<Point3>,
    class_id: usize,
}

impl AnnotatedLane {
    /// Builds a lane, rejecting non-finite coordinates, fewer than two points
    /// and consecutive points closer than 1e-9 m.
    pub fn new(points: Vec<Point3>, class_id: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(LaneError::InvalidLane(format!(
                "a lane needs at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !geometry::is_finite(p)) {
            return Err(LaneError::InvalidLane(format!("point {i} is not finite")));
        }
        if let Some(i) = points
            .windows(2)
            .position(|w| nalgebra::distance(&w[0], &w[1]) <= COINCIDENT_EPS)
        {
            return Err(LaneError::InvalidLane(format!(
                "points {i} and {} coincide",
                i + 1
            )));
        }
        Ok(Self { points, class_id })
    }

    /// Like [`AnnotatedLane::new`], but consecutive duplicates are collapsed
    /// (with a warning) instead of rejected.
    pub fn collapsing_duplicates(points: Vec<Point3>, class_id: usize) -> Result<Self> {
        let before = points.len();
        let mut kept: Vec<Point3> = Vec::with_capacity(before);
        for p in points {
            match kept.last() {
                Some(last)
                    if geometry::is_finite(&p)
                        && nalgebra::distance(last, &p) <= COINCIDENT_EPS => {}
                _ => kept.push(p),
            }
        }
        if kept.len() != before {
            log::warn!(
                "collapsed {} consecutive duplicate point(s) in a class-{class_id} lane",
                before - kept.len()
            );
        }
        Self::new(kept, class_id)
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        geometry::polyline_length(&self.points)
    }

    pub fn check_class(&self, num_classes: usize) -> Result<()> {
        if self.class_id >= num_classes {
            return Err(LaneError::InvalidClass {
                class: self.class_id,
                num_classes,
            });
        }
        Ok(())
    }

    pub fn into_points(self) -> Vec<Point3> {
        self.points
    }
}

/// Fixed-count key points of a lane.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPointLane {
    pub points: Vec<Point3>,
    pub class_id: usize,
}

/// Fixed-count Bezier control points of a lane; degree is `controls.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierLane {
    pub controls: Vec<Point3>,
    pub class_id: usize,
}

impl BezierLane {
    pub fn degree(&self) -> usize {
        self.controls.len().saturating_sub(1)
    }
}

/// One lane held in both fixed-size representations.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLane {
    pub keypoints: KeyPointLane,
    pub controls: BezierLane,
    pub class_id: usize,
}

impl JointLane {
    pub fn from_annotated(
        lane: &AnnotatedLane,
        num_keypoints: usize,
        num_controls: usize,
        mode: ParamMode,
    ) -> Result<(Self, BezierFit)> {
        let keypoints = resample_keypoints(lane, num_keypoints)?;
        let fit = fit_bezier_with(lane, num_controls, mode)?;
        let joint = JointLane {
            keypoints,
            controls: fit.curve.clone(),
            class_id: lane.class_id(),
        };
        Ok((joint, fit))
    }
}

/// Symmetric polyline Chamfer distance between a model polyline and the
/// annotation it was built from.
///
/// Distances are measured point-to-segment so a sparse but exact model (a
/// straight lane with two key points) scores zero.
pub fn modeling_error(model_points: &KeyPointLane, lane: &AnnotatedLane) -> f64 {
    crate::metrics::polyline_chamfer_distance(&model_points.points, lane.points())
        .unwrap_or(f64::INFINITY)
}

/// Modeling error of each model family on one lane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelErrors {
    pub polynomial: f64,
    pub interpolation: f64,
    pub bezier: f64,
}

/// Fits all three model families to `lane` and measures each one's
/// [`modeling_error`]. Continuous models are sampled at [`DENSE_SAMPLES`].
pub fn compare_models(
    lane: &AnnotatedLane,
    num_keypoints: usize,
    num_controls: usize,
    poly_degree: usize,
    mode: ParamMode,
) -> Result<ModelErrors> {
    let keypoints = resample_keypoints(lane, num_keypoints)?;
    let fit = fit_bezier_with(lane, num_controls, mode)?;
    let bezier_line = sample_bezier(&fit.curve, DENSE_SAMPLES)?;
    let poly = fit_polynomial_baseline(lane, poly_degree)?;
    let poly_line = poly.sample(DENSE_SAMPLES, lane.class_id());
    Ok(ModelErrors {
        polynomial: modeling_error(&poly_line, lane),
        interpolation: modeling_error(&keypoints, lane),
        bezier: modeling_error(&bezier_line, lane),
    })
}
