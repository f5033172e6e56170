//! Least-squares Bézier fit of an unevenly sampled lane.
//!
//! Run with `cargo run --example fit_bezier`.

use lanefit::geometry::Point3;
use lanefit::lane_model::{eval_bezier, fit_bezier, AnnotatedLane};

fn main() -> lanefit::Result<()> {
    // A gentle left curve, denser near the vehicle like real annotations.
    let points = (0..40)
        .map(|i| {
            let y = 3.0 + 0.04 * (i * i) as f64;
            Point3::new(0.002 * y * y, y, 0.01 * y)
        })
        .collect();
    let lane = AnnotatedLane::new(points, 0)?;

    for num_controls in [3, 5, 10] {
        let fit = fit_bezier(&lane, num_controls)?;
        println!(
            "P_c = {num_controls:2}: residual rms {:.2e} m, rank {}{}",
            fit.residual_rms(),
            fit.rank,
            if fit.rank_deficient {
                " (deficient)"
            } else {
                ""
            }
        );
    }

    let fit = fit_bezier(&lane, 5)?;
    println!("control points:");
    for c in &fit.curve.controls {
        println!("  ({:8.3}, {:8.3}, {:6.3})", c.x, c.y, c.z);
    }
    let mid = eval_bezier(&fit.curve, 0.5)?;
    println!(
        "curve at t = 0.5: ({:.3}, {:.3}, {:.3})",
        mid.x, mid.y, mid.z
    );
    Ok(())
}
