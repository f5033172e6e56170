//! F-Score, category accuracy and AP on a hand-made set of frames.

use lanefit::geometry::Point3;
use lanefit::lane_model::KeyPointLane;
use lanefit::matching::ClassScores;
use lanefit::metrics::{
    evaluate, ApSpace, EvalFrame, EvalPrediction, MatchCriteria, DEFAULT_AP_THRESHOLDS,
};

fn lane(x: f64, class_id: usize) -> KeyPointLane {
    KeyPointLane {
        points: (0..20)
            .map(|i| Point3::new(x, 3.0 + 2.0 * i as f64, 0.0))
            .collect(),
        class_id,
    }
}

fn pred(x: f64, class: usize, confidence: f64) -> lanefit::Result<EvalPrediction> {
    Ok(EvalPrediction {
        keypoints: lane(x, class),
        scores: ClassScores::with_confidence(class, confidence, 3)?,
    })
}

fn main() -> lanefit::Result<()> {
    let frames = vec![
        EvalFrame {
            ground_truth: vec![lane(-1.8, 0), lane(1.8, 1)],
            predictions: vec![pred(-1.6, 0, 0.9)?, pred(2.1, 0, 0.7)?],
        },
        EvalFrame {
            ground_truth: vec![lane(0.0, 0)],
            // Off by 2 m: a false positive. The 0.2 lane is below the gate.
            predictions: vec![pred(2.0, 0, 0.8)?, pred(0.1, 0, 0.2)?],
        },
    ];
    let r = evaluate(
        &frames,
        &MatchCriteria::default(),
        &DEFAULT_AP_THRESHOLDS,
        ApSpace::Xy,
    )?;
    println!("TP {} FP {} FN {}", r.tp, r.fp, r.fn_);
    println!(
        "precision {:.3} recall {:.3} F-Score {:.3}",
        r.precision, r.recall, r.f_score
    );
    println!("category accuracy {:.3}", r.category_accuracy);
    for (class, ap) in &r.ap_per_class {
        println!("AP class {class}: {ap:.3}");
    }
    println!("mAP {:.3}", r.map);
    Ok(())
}
