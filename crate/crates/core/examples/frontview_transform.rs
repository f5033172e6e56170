//! Surround-view lanes to the front camera's view.

use lanefit::geometry::Point3;
use lanefit::lane_model::AnnotatedLane;
use lanefit::projection::{
    compose_projection, project_point, range_filter_3d, surround_to_frontview, CameraRig,
    PerceptionRange,
};

fn main() -> lanefit::Result<()> {
    let rig = CameraRig::front_default();
    let m = compose_projection(&rig)?;
    let px = project_point(&Point3::new(1.0, 20.0, 0.0), &m)?;
    println!(
        "(1, 20, 0) -> pixel ({:.1}, {:.1}) at depth {:.1} m",
        px.u, px.v, px.depth
    );

    let line = |x: f64, y0: f64, y1: f64| {
        let pts = (0..=20)
            .map(|i| Point3::new(x, y0 + (y1 - y0) * i as f64 / 20.0, 0.0))
            .collect();
        AnnotatedLane::new(pts, 0)
    };
    let surround = vec![
        line(-1.75, -30.0, 30.0)?, // passes under the vehicle
        line(1.75, -30.0, -5.0)?,  // entirely behind
        line(12.0, 2.0, 30.0)?,    // off to the side, enters view further out
    ];
    let front = surround_to_frontview(&surround, &rig)?;
    for (i, lane) in front.iter().enumerate() {
        let (a, b) = (lane.points()[0], lane.points()[lane.len() - 1]);
        println!(
            "visible {i}: {} pts from y = {:.1} to {:.1} (x = {:.2})",
            lane.len(),
            a.y,
            b.y,
            a.x
        );
    }
    let clipped = range_filter_3d(&front, &PerceptionRange::argoverse2_front());
    println!(
        "{} lane(s) inside the argoverse2 front range",
        clipped.len()
    );
    Ok(())
}
