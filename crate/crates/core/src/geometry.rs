//! Shared point types and small polyline helpers.
//!
//! Ego frame: X lateral (right), Y longitudinal (forward), Z up, all in meters.

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;

/// Distances at or below this are treated as coincident points.
pub const COINCIDENT_EPS: f64 = 1e-9;

pub fn is_finite(p: &Point3) -> bool {
    p.x.is_finite() && p.y.is_finite() && p.z.is_finite()
}

/// Cumulative arc length at every vertex, starting at 0.
pub fn cumulative_lengths(points: &[Point3]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in points.windows(2) {
        acc += nalgebra::distance(&w[0], &w[1]);
        out.push(acc);
    }
    if points.is_empty() {
        out.clear();
    }
    out
}

pub fn polyline_length(points: &[Point3]) -> f64 {
    points
        .windows(2)
        .map(|w| nalgebra::distance(&w[0], &w[1]))
        .sum()
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 <= COINCIDENT_EPS * COINCIDENT_EPS {
        return nalgebra::distance(p, a);
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    nalgebra::distance(p, &(a + ab * t))
}

/// Distance from `p` to the polyline (a single vertex counts as a point).
pub fn point_polyline_distance(p: &Point3, line: &[Point3]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [only] => nalgebra::distance(p, only),
        _ => line
            .windows(2)
            .map(|w| point_segment_distance(p, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Drops the Z coordinate, keeping the point on the X-Y plane.
pub fn flatten_xy(points: &[Point3]) -> Vec<Point3> {
    points.iter().map(|p| Point3::new(p.x, p.y, 0.0)).collect()
}
