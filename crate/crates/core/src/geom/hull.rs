use super::{orient, ConvexPolygon, Point2, EPS_CROSS};
use crate::error::{Error, Result};

/// Convex hull by Andrew's monotone chain. Collinear boundary points are
/// dropped; the result starts at the lowest-leftmost point.
pub fn convex_hull(points: &[Point2]) -> Result<ConvexPolygon> {
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::domain(format!("non-finite point ({}, {})", p.x, p.y)));
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateGeometry(format!("{} distinct points", pts.len())));
    }
    let span = {
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        let ys = pts.iter().map(|p| p.y);
        let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
        (last.x - first.x).max(ymax - ymin)
    };
    let tol = EPS_CROSS * span * span;

    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry("all points are collinear".into()));
    }
    ConvexPolygon::new(hull)
}

/// Indices `(i, j)`, `i < j`, of a farthest vertex pair.
///
/// Rotating calipers over the antipodal pairs. Among pairs whose distance is
/// within a relative `1e-12` of the maximum, the lexicographically smallest
/// index pair wins.
pub fn diameter_indices(poly: &ConvexPolygon) -> (usize, usize) {
    let v = poly.vertices();
    let n = v.len();
    let mut cands: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * n);
    let mut push = |a: usize, b: usize| {
        if a != b {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            cands.push((a, b, v[a].dist2(v[b])));
        }
    };
    let mut j = 1usize;
    for i in 0..n {
        let ni = (i + 1) % n;
        // Advance j while the triangle (v[i], v[ni], v[j+1]) grows.
        let mut steps = 0;
        while steps < n && orient(v[i], v[ni], v[(j + 1) % n]) > orient(v[i], v[ni], v[j]) {
            j = (j + 1) % n;
            steps += 1;
        }
        push(i, j);
        push(ni, j);
        // Parallel edges: the next vertex is antipodal too.
        let nj = (j + 1) % n;
        if orient(v[i], v[ni], v[nj]) >= orient(v[i], v[ni], v[j]) {
            push(i, nj);
            push(ni, nj);
        }
    }
    let best = cands.iter().map(|c| c.2).fold(0.0, f64::max);
    let cutoff = best * (1.0 - 2e-12);
    cands
        .into_iter()
        .filter(|c| c.2 >= cutoff)
        .map(|c| (c.0, c.1))
        .min()
        .expect("polygon has at least three vertices")
}

/// Farthest vertex pair and its distance.
pub fn diameter(poly: &ConvexPolygon) -> (Point2, Point2, f64) {
    let (i, j) = diameter_indices(poly);
    let (a, b) = (poly.vertices()[i], poly.vertices()[j]);
    (a, b, a.dist(b))
}
