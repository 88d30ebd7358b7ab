//! Random convex polygons via Valtr's construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{diameter, ConvexPolygon, Point2};

/// Splits sorted coordinates into edge vectors that sum to zero: the two
/// extremes are joined by two monotone chains with randomly assigned
/// interior coordinates.
fn chain_components<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    let (min, max) = (xs[0], xs[n - 1]);
    let mut out = Vec::with_capacity(n);
    let (mut last_a, mut last_b) = (min, min);
    for &x in &xs[1..n - 1] {
        if rng.gen::<bool>() {
            out.push(x - last_a);
            last_a = x;
        } else {
            out.push(last_b - x);
            last_b = x;
        }
    }
    out.push(max - last_a);
    out.push(last_b - max);
    out
}

/// A random convex polygon with `n` vertices, centered at its centroid and
/// scaled to unit diameter. Deterministic in `seed`.
pub fn random_convex_polygon(n: usize, seed: u64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::domain(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let dx = chain_components(&mut rng, n);
        let mut dy = chain_components(&mut rng, n);
        dy.shuffle(&mut rng);
        let mut edges: Vec<Point2> = dx.into_iter().zip(dy).map(|(x, y)| Point2::new(x, y)).collect();
        edges.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
        let mut p = Point2::new(0.0, 0.0);
        let pts: Vec<Point2> = edges
            .iter()
            .map(|&e| {
                p = p + e;
                p
            })
            .collect();
        // Edges sorted by angle always close into a convex ring; a repeated
        // coordinate (zero-length edge) is the only failure and is retried.
        let Ok(poly) = ConvexPolygon::new(pts) else { continue };
        if poly.len() != n {
            continue;
        }
        let c = poly.centroid();
        let d = diameter(&poly).2;
        return Ok(poly.translate(-c).scale(1.0 / d));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_determinism() {
        assert_eq!(random_convex_polygon(3, 1).unwrap().len(), 3);
        let a = random_convex_polygon(64, 5).unwrap();
        let b = random_convex_polygon(64, 5).unwrap();
        let c = random_convex_polygon(64, 6).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_ne!(a.vertices(), c.vertices());
        assert_eq!(a.len(), 64);
        assert!((diameter(&a).2 - 1.0).abs() < 1e-12);
        assert!(random_convex_polygon(2, 0).is_err());
    }
}
