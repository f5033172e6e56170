//! The synthetic scene kinds, round-tripped through the lane file format.

use lanefit::io::{frames_to_string, parse_frames, synth_scene, SceneKind};
use lanefit::lane_model::classify_complexity;

fn main() -> lanefit::Result<()> {
    let frames = SceneKind::ALL
        .iter()
        .map(|&k| synth_scene(k, 0.05, 7))
        .collect::<lanefit::Result<Vec<_>>>()?;
    for f in &frames {
        let lanes: Vec<_> = f.lanes.iter().map(|r| r.lane.clone()).collect();
        let points: usize = lanes.iter().map(|l| l.len()).sum();
        println!(
            "{:16} {} lane(s), {points:3} points, {:?}",
            f.frame_id,
            lanes.len(),
            classify_complexity(&lanes)
        );
    }
    let text = frames_to_string(&frames);
    assert_eq!(parse_frames(&text, "memory")?, frames);
    println!("{} bytes of JSON lines, round trip exact", text.len());
    Ok(())
}
