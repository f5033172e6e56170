//! Simple vs Complex scenes: does any lane turn more than 45 degrees off +Y?

use lanefit::geometry::Point3;
use lanefit::lane_model::{classify_complexity, max_heading_angle_deg, AnnotatedLane};

fn main() -> lanefit::Result<()> {
    let cases = [
        ("straight", vec![(0.0, 0.0), (0.0, 10.0)]),
        ("exactly 45", vec![(0.0, 0.0), (5.0, 5.0)]),
        ("46 degrees", vec![(0.0, 0.0), (1.0355, 1.0)]),
        ("lateral", vec![(-5.0, 10.0), (5.0, 10.0)]),
        ("reversing", vec![(0.0, 10.0), (0.0, 0.0)]),
    ];
    for (name, pts) in cases {
        let lane = AnnotatedLane::new(
            pts.iter().map(|&(x, y)| Point3::new(x, y, 0.0)).collect(),
            0,
        )?;
        println!(
            "{name:12} max heading {:6.2} deg -> {:?}",
            max_heading_angle_deg(&lane),
            classify_complexity(std::slice::from_ref(&lane))
        );
    }
    Ok(())
}
