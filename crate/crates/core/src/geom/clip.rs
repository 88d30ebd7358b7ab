use super::{signed_area, AxisRect, ConvexPolygon, Point2};

/// Keeps the part of `ring` where `normal · x <= offset` (Sutherland–Hodgman
/// against one half-plane). `ring` must be convex and counterclockwise.
pub(crate) fn clip_ring(ring: &[Point2], normal: Point2, offset: f64) -> Vec<Point2> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let side = |p: Point2| normal.dot(p) - offset;
    let mut prev = ring[n - 1];
    let mut prev_s = side(prev);
    for &cur in ring {
        let cur_s = side(cur);
        if cur_s <= 0.0 {
            if prev_s > 0.0 {
                out.push(intersect(prev, cur, prev_s, cur_s));
            }
            out.push(cur);
        } else if prev_s <= 0.0 {
            out.push(intersect(prev, cur, prev_s, cur_s));
        }
        prev = cur;
        prev_s = cur_s;
    }
    out
}

fn intersect(a: Point2, b: Point2, sa: f64, sb: f64) -> Point2 {
    let t = sa / (sa - sb);
    a + (b - a) * t
}

/// Drops near-duplicate consecutive vertices and returns `None` when fewer
/// than three remain or the area is negligible relative to `ref_area`.
fn finish(mut ring: Vec<Point2>, ref_area: f64) -> Option<ConvexPolygon> {
    let scale = ref_area.sqrt().max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    ring.dedup_by(|a, b| a.dist(*b) <= tol);
    while ring.len() > 1 && ring[0].dist(ring[ring.len() - 1]) <= tol {
        ring.pop();
    }
    if ring.len() < 3 || signed_area(&ring) <= 1e-14 * ref_area {
        return None;
    }
    Some(ConvexPolygon::from_ccw_unchecked(ring))
}

/// Intersection of `poly` with the half-plane `normal · x <= offset`.
pub fn clip_halfplane(poly: &ConvexPolygon, normal: Point2, offset: f64) -> Option<ConvexPolygon> {
    let ring = clip_ring(poly.vertices(), normal, offset);
    finish(ring, poly.area())
}

/// Intersection of `poly` with `rect`; `None` when it has no area.
pub fn clip_to_rect(poly: &ConvexPolygon, rect: &AxisRect) -> Option<ConvexPolygon> {
    let mut ring = poly.vertices().to_vec();
    let planes = [
        (Point2::new(-1.0, 0.0), -rect.x0),
        (Point2::new(1.0, 0.0), rect.x1()),
        (Point2::new(0.0, -1.0), -rect.y0),
        (Point2::new(0.0, 1.0), rect.y1()),
    ];
    for (n, c) in planes {
        ring = clip_ring(&ring, n, c);
        if ring.len() < 3 {
            return None;
        }
    }
    finish(ring, poly.area().min(rect.area()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_rect_is_identity() {
        let sq = AxisRect::raw(0.0, 0.0, 1.0, 1.0).to_polygon();
        let c = clip_to_rect(&sq, &AxisRect::raw(-1.0, -1.0, 3.0, 3.0)).unwrap();
        assert!((c.area() - 1.0).abs() < 1e-15);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn half_overlap() {
        let sq = AxisRect::raw(0.0, 0.0, 1.0, 1.0).to_polygon();
        let c = clip_to_rect(&sq, &AxisRect::raw(0.5, 0.0, 1.0, 1.0)).unwrap();
        assert!((c.area() - 0.5).abs() < 1e-15);
        let bb = c.bbox();
        assert!((bb.x0 - 0.5).abs() < 1e-15 && (bb.w - 0.5).abs() < 1e-15 && (bb.h - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_and_touching_are_empty() {
        let sq = AxisRect::raw(0.0, 0.0, 1.0, 1.0).to_polygon();
        assert!(clip_to_rect(&sq, &AxisRect::raw(2.0, 2.0, 1.0, 1.0)).is_none());
        assert!(clip_to_rect(&sq, &AxisRect::raw(1.0, 0.0, 1.0, 1.0)).is_none());
        let tri = ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap();
        assert!(clip_to_rect(&tri, &AxisRect::raw(0.5, 0.5, 0.5, 0.5)).is_none());
    }

    #[test]
    fn halfplane_split_preserves_area() {
        let sq = AxisRect::raw(0.0, 0.0, 1.0, 1.0).to_polygon();
        let n = Point2::new(1.0, 2.0);
        let a = clip_halfplane(&sq, n, 1.2).unwrap();
        let b = clip_halfplane(&sq, -n, -1.2).unwrap();
        assert!((a.area() + b.area() - 1.0).abs() < 1e-14);
    }
}
