//! Polynomial vs key-point vs Bézier modeling on a U-turn and a straight lane.

use lanefit::io::{synth_scene, SceneKind};
use lanefit::lane_model::{compare_models, ParamMode};

fn main() -> lanefit::Result<()> {
    for kind in [SceneKind::UShape, SceneKind::Straight] {
        let frame = synth_scene(kind, 0.0, 0)?;
        let lane = &frame.lanes[0].lane;
        println!("{kind} ({} points):", lane.len());
        for mode in [ParamMode::Chord, ParamMode::Uniform] {
            let e = compare_models(lane, 20, 10, 3, mode)?;
            println!(
                "  {mode:?}: polynomial {:.2e} m, interpolation {:.2e} m, Bézier {:.2e} m",
                e.polynomial, e.interpolation, e.bezier
            );
        }
    }
    Ok(())
}
