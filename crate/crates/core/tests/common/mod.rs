#![allow(dead_code)]

use fwmedian::geom::{ConvexPolygon, Point2};
use fwmedian::random::random_convex_polygon;
use proptest::prelude::*;

/// Random convex polygons of unit diameter.
pub fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    (3usize..40, any::<u64>()).prop_map(|(n, seed)| random_convex_polygon(n, seed).unwrap())
}

/// A point inside `poly` from barycentric weights over a fan triangle.
pub fn interior_point(poly: &ConvexPolygon, t: (f64, f64, f64)) -> Point2 {
    let v = poly.vertices();
    let i = 1 + ((t.0 * (v.len() - 2) as f64) as usize).min(v.len() - 3);
    let (mut a, mut b) = (t.1, t.2);
    if a + b > 1.0 {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    v[0] + (v[i] - v[0]) * a + (v[i + 1] - v[0]) * b
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
