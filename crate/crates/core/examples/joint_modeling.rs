//! One lane in both fixed-size forms: 20 key points and a Bézier curve.

use lanefit::geometry::Point3;
use lanefit::lane_model::{modeling_error, sample_bezier, AnnotatedLane, JointLane, ParamMode};

fn main() -> lanefit::Result<()> {
    // A quarter circle, sampled more densely near its start.
    let points = (0..=50)
        .map(|i| {
            let a = (i as f64 / 50.0).powf(1.5) * std::f64::consts::FRAC_PI_2;
            Point3::new(20.0 * (1.0 - a.cos()), 5.0 + 20.0 * a.sin(), 0.0)
        })
        .collect();
    let lane = AnnotatedLane::new(points, 3)?;

    for mode in [ParamMode::Chord, ParamMode::Uniform] {
        let (joint, fit) = JointLane::from_annotated(&lane, 20, 5, mode)?;
        let dense = sample_bezier(&joint.controls, 256)?;
        println!(
            "{mode:?}: key-point error {:.4} m, Bézier error {:.4} m, fit rms {:.4} m",
            modeling_error(&joint.keypoints, &lane),
            modeling_error(&dense, &lane),
            fit.residual_rms()
        );
    }

    let (joint, _) = JointLane::from_annotated(&lane, 20, 5, ParamMode::Chord)?;
    let first = joint.keypoints.points[0];
    let last = joint.keypoints.points[19];
    println!(
        "class {}, endpoints ({:.1}, {:.1}) .. ({:.1}, {:.1})",
        joint.class_id, first.x, first.y, last.x, last.y
    );
    Ok(())
}
