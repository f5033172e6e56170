use serde::{Deserialize, Serialize};

use super::AnnotatedLane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Simple,
    Complex,
}

/// A frame is complex when any lane has a segment whose X-Y heading is more
/// than 45 degrees away from +Y. Exactly 45 degrees is still simple.
pub fn classify_complexity(frame: &[AnnotatedLane]) -> Complexity {
    let complex = frame.iter().any(|lane| {
        lane.points().windows(2).any(|w| {
            let dx = w[1].x - w[0].x;
            let dy = w[1].y - w[0].y;
            // angle(d, +Y) > 45deg  <=>  |dx| > dy, and vertical-only segments have no heading
            (dx != 0.0 || dy != 0.0) && dx.abs() > dy
        })
    });
    if complex {
        Complexity::Complex
    } else {
        Complexity::Simple
    }
}

/// Largest X-Y heading angle to +Y over the lane's segments, in degrees.
pub fn max_heading_angle_deg(lane: &AnnotatedLane) -> f64 {
    lane.points()
        .windows(2)
        .filter_map(|w| {
            let dx = w[1].x - w[0].x;
            let dy = w[1].y - w[0].y;
            (dx != 0.0 || dy != 0.0).then(|| dx.abs().atan2(dy).to_degrees())
        })
        .fold(0.0, f64::max)
}
