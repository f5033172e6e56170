//! Camera projection and the surround-view to front-view lane transform.
//!
//! [`surround_to_frontview`] keeps the part of each lane a front camera can
//! see: every point is projected into the image, points behind the camera
//! or outside the image are dropped, and the survivors are lifted back to
//! 3D using the depth retained from the projection. Lanes are split wherever
//! points were dropped, so no geometry is invented across gaps.

mod camera;

use serde::{Deserialize, Serialize};

use crate::error::{LaneError, Result};
use crate::geometry::Point3;
use crate::lane_model::AnnotatedLane;

pub use camera::{
    compose_projection, in_image, project_homogeneous, project_point, BackProjector, CameraRig,
    Pixel, ProjMatrix, MIN_DEPTH,
};

/// Axis-aligned ego-frame box `[min, max]` per axis, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerceptionRange {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
}

impl PerceptionRange {
    pub fn new(x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<Self> {
        let r = Self { x, y, z };
        r.validate()?;
        Ok(r)
    }

    pub fn openlane() -> Self {
        Self {
            x: [-30.0, 30.0],
            y: [3.0, 103.0],
            z: [-10.0, 10.0],
        }
    }

    /// Surround-view range.
    pub fn argoverse2() -> Self {
        Self {
            x: [-15.0, 15.0],
            y: [-30.0, 30.0],
            z: [-2.0, 2.0],
        }
    }

    /// Front-view variant: only the half-space ahead of the vehicle.
    pub fn argoverse2_front() -> Self {
        Self {
            y: [0.0, 30.0],
            ..Self::argoverse2()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            if !(lo < hi) {
                return Err(LaneError::InvalidConfig(format!(
                    "perception range {name}: min {lo} must be below max {hi}"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (self.x[0]..=self.x[1]).contains(&p.x)
            && (self.y[0]..=self.y[1]).contains(&p.y)
            && (self.z[0]..=self.z[1]).contains(&p.z)
    }
}

/// Splits a lane into maximal runs of kept points; runs shorter than two
/// points are discarded.
fn split_runs(kept: Vec<Option<Point3>>, class_id: usize, out: &mut Vec<AnnotatedLane>) {
    let mut run: Vec<Point3> = Vec::new();
    let flush = |run: &mut Vec<Point3>, out: &mut Vec<AnnotatedLane>| {
        if run.len() >= 2 {
            if let Ok(lane) = AnnotatedLane::collapsing_duplicates(std::mem::take(run), class_id) {
                out.push(lane);
            }
        }
        run.clear();
    };
    for p in kept {
        match p {
            Some(p) => run.push(p),
            None => flush(&mut run, out),
        }
    }
    flush(&mut run, out);
}

/// Keeps the camera-visible parts of each lane, in input order.
pub fn surround_to_frontview(
    lanes: &[AnnotatedLane],
    rig: &CameraRig,
) -> Result<Vec<AnnotatedLane>> {
    let m = compose_projection(rig)?;
    let back = BackProjector::new(&m)?;
    let mut out = Vec::new();
    for lane in lanes {
        let kept = lane
            .points()
            .iter()
            .map(|p| match project_point(p, &m) {
                Ok(px) if in_image(px.u, px.v, rig.image_h(), rig.image_w()) => {
                    Some(back.unproject(&px))
                }
                _ => None,
            })
            .collect();
        split_runs(kept, lane.class_id(), &mut out);
    }
    Ok(out)
}

/// Drops points outside `range`, splitting lanes at the gaps.
pub fn range_filter_3d(lanes: &[AnnotatedLane], range: &PerceptionRange) -> Vec<AnnotatedLane> {
    let mut out = Vec::new();
    for lane in lanes {
        let kept = lane
            .points()
            .iter()
            .map(|p| range.contains(p).then_some(*p))
            .collect();
        split_runs(kept, lane.class_id(), &mut out);
    }
    out
}
