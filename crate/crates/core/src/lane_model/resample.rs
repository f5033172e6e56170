use super::{AnnotatedLane, KeyPointLane};
use crate::error::{LaneError, Result};
use crate::geometry::{cumulative_lengths, Point3, COINCIDENT_EPS};

/// Cumulative arc length at each annotated point divided by the total length.
pub fn chord_length_params(lane: &AnnotatedLane) -> Result<Vec<f64>> {
    let cum = cumulative_lengths(lane.points());
    let total = *cum.last().unwrap_or(&0.0);
    if total < COINCIDENT_EPS {
        return Err(LaneError::DegenerateLane { length: total });
    }
    let mut params: Vec<f64> = cum.iter().map(|c| c / total).collect();
    if let Some(last) = params.last_mut() {
        *last = 1.0;
    }
    Ok(params)
}

/// `(1 - t) * a + t * b`.
pub fn lerp_point(a: &Point3, b: &Point3, t: f64) -> Point3 {
    Point3::from(a.coords * (1.0 - t) + b.coords * t)
}

/// Places `num_keypoints` points at uniform arc-length fractions along the lane.
///
/// The first and last key points are copied from the lane endpoints.
pub fn resample_keypoints(lane: &AnnotatedLane, num_keypoints: usize) -> Result<KeyPointLane> {
    if num_keypoints < 2 {
        return Err(LaneError::InvalidConfig(format!(
            "resampling needs at least 2 key points, got {num_keypoints}"
        )));
    }
    let pts = lane.points();
    let cum = cumulative_lengths(pts);
    let total = *cum.last().unwrap_or(&0.0);
    if total < COINCIDENT_EPS {
        return Err(LaneError::DegenerateLane { length: total });
    }

    let last = num_keypoints - 1;
    let mut out = Vec::with_capacity(num_keypoints);
    let mut seg = 0;
    for i in 0..num_keypoints {
        if i == 0 {
            out.push(pts[0]);
            continue;
        }
        if i == last {
            out.push(pts[pts.len() - 1]);
            continue;
        }
        let s = total * i as f64 / last as f64;
        while seg + 2 < pts.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let t = ((s - cum[seg]) / (cum[seg + 1] - cum[seg])).clamp(0.0, 1.0);
        out.push(lerp_point(&pts[seg], &pts[seg + 1], t));
    }
    Ok(KeyPointLane {
        points: out,
        class_id: lane.class_id(),
    })
}
