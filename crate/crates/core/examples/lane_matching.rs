//! Matching three predictions against two ground-truth lanes.

use lanefit::geometry::Point3;
use lanefit::lane_model::{AnnotatedLane, JointLane, ParamMode};
use lanefit::matching::{
    match_frame, ClassScores, CostWeights, FocalParams, GroundTruthLane, PredictedLane,
};

const NUM_CLASSES: usize = 4; // three lane types plus background

fn joint(x: f64, bend: f64, class: usize) -> lanefit::Result<JointLane> {
    let pts = (0..30)
        .map(|i| {
            let y = 3.0 + i as f64;
            Point3::new(x + bend * y * y, y, 0.0)
        })
        .collect();
    let lane = AnnotatedLane::new(pts, class)?;
    Ok(JointLane::from_annotated(&lane, 20, 5, ParamMode::Chord)?.0)
}

fn main() -> lanefit::Result<()> {
    let gts = vec![
        GroundTruthLane::new(
            joint(-1.8, 0.0, 0)?.keypoints,
            joint(-1.8, 0.0, 0)?.controls,
        ),
        GroundTruthLane::new(
            joint(1.8, 0.002, 1)?.keypoints,
            joint(1.8, 0.002, 1)?.controls,
        ),
    ];
    let pred = |x: f64, bend: f64, probs: Vec<f64>| -> lanefit::Result<PredictedLane> {
        let j = joint(x, bend, 0)?;
        Ok(PredictedLane {
            keypoints: j.keypoints,
            controls: j.controls,
            scores: ClassScores::new(probs)?,
        })
    };
    // Listed in a different order from the ground truth; the last one is spurious.
    let preds = vec![
        pred(1.9, 0.002, vec![0.05, 0.8, 0.05, 0.1])?,
        pred(-1.7, 0.0, vec![0.9, 0.03, 0.02, 0.05])?,
        pred(7.0, -0.01, vec![0.1, 0.1, 0.1, 0.7])?,
    ];
    assert_eq!(preds[0].scores.num_classes(), NUM_CLASSES);

    let m = match_frame(&preds, gts, &CostWeights::default(), FocalParams::default())?;
    for (&(p, g), terms) in m.assignment.pairs.iter().zip(&m.loss.per_pair) {
        let target = if g < 2 {
            format!("gt {g}")
        } else {
            "no object".into()
        };
        println!("pred {p} -> {target:9}  cost {:.4}  {terms:?}", terms.sum());
    }
    println!(
        "assignment cost {:.6}, loss {:.6}",
        m.assignment.total_cost, m.loss.total
    );
    Ok(())
}
