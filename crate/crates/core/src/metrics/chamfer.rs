use crate::error::{LaneError, Result};
use crate::geometry::{point_polyline_distance, Point3};

fn mean_nearest(from: &[Point3], to: &[Point3]) -> f64 {
    from.iter()
        .map(|p| {
            to.iter()
                .map(|q| nalgebra::distance(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        / from.len() as f64
}

/// Symmetric mean nearest-point distance between two point sets.
pub fn chamfer_distance(a: &[Point3], b: &[Point3]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(LaneError::EmptyInput);
    }
    Ok(0.5 * (mean_nearest(a, b) + mean_nearest(b, a)))
}

fn mean_to_polyline(from: &[Point3], to: &[Point3]) -> f64 {
    from.iter()
        .map(|p| point_polyline_distance(p, to))
        .sum::<f64>()
        / from.len() as f64
}

/// Like [`chamfer_distance`], but each vertex is compared with the other
/// polyline's segments rather than its vertices.
pub fn polyline_chamfer_distance(a: &[Point3], b: &[Point3]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(LaneError::EmptyInput);
    }
    Ok(0.5 * (mean_to_polyline(a, b) + mean_to_polyline(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(x: f64, n: usize) -> Vec<Point3> {
        (0..n)
            .map(|i| Point3::new(x, i as f64 * 0.25, 0.0))
            .collect()
    }

    #[test]
    fn identity_and_empty() {
        let a = line(0.0, 10);
        assert_eq!(chamfer_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(chamfer_distance(&a, &[]), Err(LaneError::EmptyInput));
        let single = [Point3::new(1.0, 2.0, 3.0)];
        assert_eq!(
            chamfer_distance(&single, &[single[0], single[0]]).unwrap(),
            0.0
        );
    }

    #[test]
    fn parallel_lines_one_meter_apart() {
        let a = line(0.0, 200);
        let b = line(1.0, 200);
        let brute = {
            let mut total = 0.0;
            for (from, to) in [(&a, &b), (&b, &a)] {
                let mut s = 0.0;
                for p in from.iter() {
                    let mut best = f64::MAX;
                    for q in to.iter() {
                        best = best.min(
                            ((p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2))
                                .sqrt(),
                        );
                    }
                    s += best;
                }
                total += s / from.len() as f64;
            }
            total / 2.0
        };
        let d = chamfer_distance(&a, &b).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert!((d - brute).abs() < 1e-12);
    }

    #[test]
    fn polyline_variant_ignores_vertex_spacing() {
        let sparse = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.0, 10.0, 0.0)];
        let dense = line(0.0, 41);
        assert_eq!(polyline_chamfer_distance(&sparse, &dense).unwrap(), 0.0);
        assert!(chamfer_distance(&sparse, &dense).unwrap() > 1.0);
    }
}
