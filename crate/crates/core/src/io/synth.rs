//! Deterministic synthetic lane scenes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::format::{LaneFileFrame, LaneRecord};
use crate::error::{LaneError, Result};
use crate::geometry::Point3;
use crate::lane_model::AnnotatedLane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SceneKind {
    /// Four forward lanes with a slight drift.
    Straight,
    /// A U-turn lane (forward, across, back) next to a forward lane.
    UShape,
    /// A closed elliptical loop, e.g. around a flowerbed.
    ClosedLoop,
    /// Two lanes sharing a trunk and splitting at about 31 degrees.
    YShape,
    /// Forward lanes crossed by a lateral marking.
    Lateral,
}

impl SceneKind {
    pub const ALL: [SceneKind; 5] = [
        SceneKind::Straight,
        SceneKind::UShape,
        SceneKind::ClosedLoop,
        SceneKind::YShape,
        SceneKind::Lateral,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::Straight => "straight",
            SceneKind::UShape => "u_shape",
            SceneKind::ClosedLoop => "closed_loop",
            SceneKind::YShape => "y_shape",
            SceneKind::Lateral => "lateral",
        }
    }
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SceneKind {
    type Err = LaneError;

    fn from_str(s: &str) -> Result<Self> {
        SceneKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| LaneError::InvalidConfig(format!("unknown scene kind `{s}`")))
    }
}

fn forward(x0: f64, drift: f64) -> Vec<Point3> {
    (0..=55)
        .map(|i| {
            let y = 5.0 + i as f64;
            Point3::new(x0 + drift * (y - 5.0), y, 0.0)
        })
        .collect()
}

/// Semi-ellipse from `(x0, 5)` out to `y = 5 + depth` and back at `x0 + 2 * half_width`.
pub fn u_turn(x0: f64, half_width: f64, depth: f64, n: usize) -> Vec<Point3> {
    (0..n)
        .map(|i| {
            let s = PI * i as f64 / (n - 1) as f64;
            Point3::new(
                x0 + half_width * (1.0 - s.cos()),
                5.0 + depth * s.sin(),
                0.0,
            )
        })
        .collect()
}

fn base_lanes(kind: SceneKind) -> Vec<(Vec<Point3>, usize)> {
    match kind {
        SceneKind::Straight => [-5.25, -1.75, 1.75, 5.25]
            .into_iter()
            .enumerate()
            .map(|(i, x)| (forward(x, 0.01), if i == 0 || i == 3 { 2 } else { 0 }))
            .collect(),
        SceneKind::UShape => vec![(u_turn(-2.0, 4.0, 25.0, 60), 0), (forward(-5.5, 0.0), 2)],
        SceneKind::ClosedLoop => {
            let n = 80;
            let ring = (0..=n)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n as f64;
                    Point3::new(6.0 * a.cos(), 25.0 + 10.0 * a.sin(), 0.0)
                })
                .collect();
            vec![(ring, 2)]
        }
        SceneKind::YShape => {
            let trunk: Vec<Point3> = (0..20)
                .map(|i| Point3::new(0.0, 5.0 + i as f64, 0.0))
                .collect();
            let mut straight = trunk.clone();
            let mut branch = trunk;
            for i in 0..=25 {
                let dy = i as f64;
                straight.push(Point3::new(0.0, 25.0 + dy, 0.0));
                branch.push(Point3::new(0.6 * dy, 25.0 + dy, 0.0));
            }
            straight.dedup();
            branch.dedup();
            vec![(straight, 0), (branch, 0)]
        }
        SceneKind::Lateral => {
            let mut lanes = vec![(forward(-1.75, 0.0), 0), (forward(1.75, 0.0), 0)];
            let crossing = (0..=24)
                .map(|i| Point3::new(-6.0 + 0.5 * i as f64, 20.0, 0.0))
                .collect();
            lanes.push((crossing, 1));
            lanes
        }
    }
}

/// Builds a scene; Gaussian noise of `noise_sigma` meters is added to every
/// coordinate. The same `(kind, noise_sigma, seed)` always gives the same frame.
pub fn synth_scene(kind: SceneKind, noise_sigma: f64, seed: u64) -> Result<LaneFileFrame> {
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(LaneError::InvalidConfig(format!(
            "noise sigma must be a non-negative number, got {noise_sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_sigma)
        .map_err(|e| LaneError::InvalidConfig(format!("noise: {e}")))?;
    let lanes = base_lanes(kind)
        .into_iter()
        .map(|(points, class_id)| {
            let points = points
                .into_iter()
                .map(|p| {
                    if noise_sigma == 0.0 {
                        p
                    } else {
                        Point3::new(
                            p.x + noise.sample(&mut rng),
                            p.y + noise.sample(&mut rng),
                            p.z + noise.sample(&mut rng),
                        )
                    }
                })
                .collect();
            AnnotatedLane::collapsing_duplicates(points, class_id).map(LaneRecord::new)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaneFileFrame {
        frame_id: format!("{kind}-{seed}"),
        lanes,
        camera: None,
    })
}
