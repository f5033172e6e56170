use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use lanefit::commands::{cmd_compare_models, cmd_match};
use lanefit::geometry::Point3;
use lanefit::io::{
    load_frames, save_frames, synth_scene, LaneFileFrame, LaneRecord, Mode, SceneKind, ToolConfig,
};
use lanefit::lane_model::AnnotatedLane;
use lanefit::matching::{
    cost_matrix, pad_ground_truth, ClassScores, GroundTruthLane, PredictedLane,
};

fn lanefit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lanefit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn synth(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut args = vec!["synth", "--output", s(&out)];
    args.extend_from_slice(extra);
    let o = lanefit(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn eval_self_match_reports_perfect_scores() {
    let dir = tempfile::tempdir().unwrap();
    let gt = synth(
        dir.path(),
        "gt.jsonl",
        &["--frames", "10", "--sigma", "0.05"],
    );
    let report = path(dir.path(), "eval.json");
    let o = lanefit(&[
        "eval",
        "--input",
        s(&gt),
        "--predictions",
        s(&gt),
        "--output",
        s(&report),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("F-Score 1.0000"), "{text}");
    assert!(text.contains("mAP 1.0000"), "{text}");
    let r = read_json(&report);
    assert_eq!(r["result"]["f_score"], 1.0);
    assert_eq!(r["result"]["map"], 1.0);
    assert_eq!(r["result"]["category_accuracy"], 1.0);
}

#[test]
fn every_report_embeds_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.toml");
    std::fs::write(&cfg, "control_points = 6\n[weights]\nclass = 2.5\n").unwrap();
    let gt = synth(dir.path(), "gt.jsonl", &["--frames", "3"]);
    for cmd in ["fit", "match", "eval", "compare-models"] {
        let out = path(dir.path(), &format!("{cmd}.json"));
        let mut args = vec![
            "--config",
            s(&cfg),
            "--mode",
            "argoverse2",
            cmd,
            "--input",
            s(&gt),
        ];
        if cmd == "match" || cmd == "eval" {
            args.extend(["--predictions", s(&gt)]);
        }
        args.extend(["--output", s(&out)]);
        let o = lanefit(&args);
        assert!(
            o.status.success(),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let r = read_json(&out);
        assert_eq!(r["command"], cmd);
        assert_eq!(r["config"]["mode"], "argoverse2");
        assert_eq!(r["config"]["control_points"], 6);
        assert_eq!(r["config"]["num_classes"], 4);
        assert_eq!(r["config"]["weights"]["class"], 2.5);
    }
}

#[test]
fn validation_failures_exit_nonzero_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.jsonl");
    std::fs::write(
        &bad,
        "{\"frame_id\":\"a\",\"lanes\":[{\"points\":[[0,0,0],[0,1,0]],\"class_id\":0}]}\n\
         {\"frame_id\":\"b\",\"lanes\":[{\"points\":[[0,0,0]],\"class_id\":0}]}\n",
    )
    .unwrap();
    let out = path(dir.path(), "out.json");
    let o = lanefit(&["fit", "--input", s(&bad), "--output", s(&out)]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains(":2:") && err.contains("frame `b`, lane 0"),
        "{err}"
    );
    assert!(!out.exists());

    // A valid file, but a lane too short for the configured control points.
    let short = path(dir.path(), "short.jsonl");
    std::fs::write(
        &short,
        "{\"frame_id\":\"a\",\"lanes\":[{\"points\":[[0,0,0],[0,1,0],[0,2,0]],\"class_id\":0}]}\n",
    )
    .unwrap();
    let o = lanefit(&[
        "fit",
        "--input",
        s(&short),
        "--output",
        s(&out),
        "--plot",
        s(&path(dir.path(), "p.csv")),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists() && !path(dir.path(), "p.csv").exists());

    let cfg = path(dir.path(), "cfg.toml");
    std::fs::write(&cfg, "keypoints = 2\n").unwrap();
    let o = lanefit(&["--config", s(&cfg), "synth", "--output", s(&out)]);
    assert!(!o.status.success());
    assert!(!out.exists());

    let o = lanefit(&["synth", "--kind", "spiral", "--output", s(&out)]);
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("spiral"));
    assert!(!out.exists());
}

#[test]
fn synth_seed_controls_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(
        dir.path(),
        "a.jsonl",
        &["--sigma", "0.1", "--seed", "1", "--frames", "3"],
    );
    let b = synth(
        dir.path(),
        "b.jsonl",
        &["--sigma", "0.1", "--seed", "2", "--frames", "3"],
    );
    assert_ne!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn transform_writes_a_lane_file() {
    let dir = tempfile::tempdir().unwrap();
    let gt = synth(dir.path(), "gt.jsonl", &["--frames", "5"]);
    let out = path(dir.path(), "front.jsonl");
    let report = path(dir.path(), "report.json");
    let o = lanefit(&[
        "transform",
        "--input",
        s(&gt),
        "--output",
        s(&out),
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    let frames = load_frames(&out).unwrap();
    assert_eq!(frames.len(), 5);
    assert!(frames.iter().all(|f| f.camera.is_some()));
    assert_eq!(read_json(&report)["frames"].as_array().unwrap().len(), 5);
}

#[test]
fn plot_csv_lists_every_series() {
    let dir = tempfile::tempdir().unwrap();
    let gt = synth(dir.path(), "gt.jsonl", &["--kind", "u_shape"]);
    let csv = path(dir.path(), "plot.csv");
    let o = lanefit(&["compare-models", "--input", s(&gt), "--plot", s(&csv)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("frame_id,lane,series,index,x,y,z\n"));
    for series in ["annotation", "polynomial", "interpolation", "bezier"] {
        assert!(text.contains(&format!(",{series},")), "{series}");
    }
}

fn line(x: f64, bend: f64, class: usize, conf: Option<f64>) -> LaneRecord {
    let pts = (0..25)
        .map(|i| {
            let y = 3.0 + 1.5 * i as f64;
            Point3::new(x + bend * y * y, y, 0.0)
        })
        .collect();
    let mut r = LaneRecord::new(AnnotatedLane::new(pts, class).unwrap());
    r.confidence = conf;
    r
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn match_total_is_the_permutation_minimum() {
    let cfg = ToolConfig::preset(Mode::Argoverse2);
    let gt = vec![LaneFileFrame {
        frame_id: "f".into(),
        lanes: vec![line(-1.8, 0.0, 0, None), line(1.8, 0.004, 1, None)],
        camera: None,
    }];
    let pred = vec![LaneFileFrame {
        frame_id: "f".into(),
        lanes: vec![
            line(1.5, 0.003, 1, Some(0.7)),
            line(6.0, -0.01, 2, Some(0.4)),
            line(-2.0, 0.001, 0, Some(0.9)),
        ],
        camera: None,
    }];
    let report = cmd_match(&cfg, &gt, &pred).unwrap();
    let f = &report.frames[0];

    let joint = |r: &LaneRecord| {
        lanefit::lane_model::JointLane::from_annotated(&r.lane, 20, 10, cfg.param_mode)
            .unwrap()
            .0
    };
    let preds: Vec<PredictedLane> = pred[0]
        .lanes
        .iter()
        .map(|r| {
            let j = joint(r);
            PredictedLane {
                keypoints: j.keypoints,
                controls: j.controls,
                scores: ClassScores::with_confidence(r.lane.class_id(), r.confidence.unwrap(), 4)
                    .unwrap(),
            }
        })
        .collect();
    let gts: Vec<GroundTruthLane> = gt[0]
        .lanes
        .iter()
        .map(|r| {
            let j = joint(r);
            GroundTruthLane::new(j.keypoints, j.controls)
        })
        .collect();
    let padded = pad_ground_truth(gts, 3, 3).unwrap();
    let c = cost_matrix(&preds, &padded, &cfg.weights, cfg.focal).unwrap();
    let best = permutations(3)
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| c[(i, j)]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    assert_eq!(f.assignment_cost, best);
    assert!((f.total_loss - best).abs() < 1e-9);
    let pairs: Vec<(usize, Option<usize>)> = f
        .pairs
        .iter()
        .map(|p| (p.prediction, p.ground_truth))
        .collect();
    assert_eq!(pairs, vec![(0, Some(1)), (1, None), (2, Some(0))]);
}

#[test]
fn compare_models_orders_u_shape_errors() {
    let cfg = ToolConfig::preset(Mode::Argoverse2);
    let frames = vec![synth_scene(SceneKind::UShape, 0.0, 0).unwrap()];
    let r = cmd_compare_models(&cfg, &frames).unwrap();
    let u = &r.lanes[0];
    assert!(u.errors.bezier < u.errors.polynomial && u.errors.interpolation < u.errors.polynomial);
    assert_eq!(r.summary.complex.lanes, 2);
    assert_eq!(r.summary.simple.lanes, 0);
}

#[test]
fn saved_frames_load_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "frames.jsonl");
    let frames: Vec<LaneFileFrame> = SceneKind::ALL
        .iter()
        .map(|&k| synth_scene(k, 0.3, 11).unwrap())
        .collect();
    save_frames(&p, &frames).unwrap();
    assert_eq!(load_frames(&p).unwrap(), frames);
    std::fs::write(&p, "").unwrap();
    assert!(load_frames(&p).unwrap().is_empty());
    assert!(load_frames(&path(dir.path(), "missing.jsonl")).is_err());
}
