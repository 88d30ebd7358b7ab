//! Lower and upper boundary chains of a convex polygon as functions of x.
//!
//! Used for `O(log n)` rectangle queries: whether a rectangle meets the
//! polygon with positive area, and the bounding box of the intersection.

use super::{AxisRect, ConvexPolygon, Point2};

#[derive(Debug, Clone)]
pub struct MonotoneChains {
    /// Convex lower boundary, x nondecreasing.
    lower: Vec<Point2>,
    /// Concave upper boundary, x nondecreasing.
    upper: Vec<Point2>,
    lower_min: usize,
    upper_max: usize,
}

impl MonotoneChains {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let v = poly.vertices();
        let n = v.len();
        let key = |a: &Point2, b: &Point2| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
        let left_bottom = (0..n).min_by(|&a, &b| key(&v[a], &v[b])).unwrap();
        let right_top = (0..n).max_by(|&a, &b| key(&v[a], &v[b])).unwrap();
        let left_top = (0..n)
            .min_by(|&a, &b| v[a].x.total_cmp(&v[b].x).then(v[b].y.total_cmp(&v[a].y)))
            .unwrap();
        let right_bottom = (0..n)
            .max_by(|&a, &b| v[a].x.total_cmp(&v[b].x).then(v[b].y.total_cmp(&v[a].y)))
            .unwrap();

        let walk = |from: usize, to: usize| {
            let mut out = vec![v[from]];
            let mut i = from;
            while i != to {
                i = (i + 1) % n;
                out.push(v[i]);
            }
            out
        };
        let lower = monotone(walk(left_bottom, right_bottom));
        let mut upper = walk(right_top, left_top);
        upper.reverse();
        let upper = monotone(upper);

        let lower_min = (0..lower.len()).min_by(|&a, &b| lower[a].y.total_cmp(&lower[b].y)).unwrap();
        let upper_max = (0..upper.len()).max_by(|&a, &b| upper[a].y.total_cmp(&upper[b].y)).unwrap();
        Self {
            lower,
            upper,
            lower_min,
            upper_max,
        }
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.lower[0].x, self.lower[self.lower.len() - 1].x)
    }

    pub fn lower_at(&self, x: f64) -> f64 {
        eval(&self.lower, x)
    }

    pub fn upper_at(&self, x: f64) -> f64 {
        eval(&self.upper, x)
    }

    /// Bounding box of `rect ∩ C`, or `None` when the intersection has no
    /// area.
    pub fn intersection_bbox(&self, rect: &AxisRect) -> Option<AxisRect> {
        let (cx0, cx1) = self.x_range();
        let mut xa = rect.x0.max(cx0);
        let mut xb = rect.x1().min(cx1);
        if xb <= xa {
            return None;
        }
        // {x : upper(x) >= y0} and {x : lower(x) <= y1} are intervals.
        let (ua, ub) = level_interval(&self.upper, self.upper_max, rect.y0, true)?;
        let (la, lb) = level_interval(&self.lower, self.lower_min, rect.y1(), false)?;
        xa = xa.max(ua).max(la);
        xb = xb.min(ub).min(lb);
        let scale = rect.w.max(rect.h);
        if xb - xa <= 1e-14 * scale {
            return None;
        }
        let lo = {
            let m = self.lower[self.lower_min];
            if m.x >= xa && m.x <= xb {
                m.y
            } else {
                self.lower_at(xa).min(self.lower_at(xb))
            }
        };
        let hi = {
            let m = self.upper[self.upper_max];
            if m.x >= xa && m.x <= xb {
                m.y
            } else {
                self.upper_at(xa).max(self.upper_at(xb))
            }
        };
        let y0 = rect.y0.max(lo);
        let y1 = rect.y1().min(hi);
        if y1 - y0 <= 1e-14 * scale {
            return None;
        }
        Some(AxisRect::raw(xa, y0, xb - xa, y1 - y0))
    }
}

/// Drops backtracking caused by rounding so x is nondecreasing.
fn monotone(chain: Vec<Point2>) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(chain.len());
    for p in chain {
        match out.last() {
            Some(q) if p.x < q.x => out.push(Point2::new(q.x, p.y)),
            _ => out.push(p),
        }
    }
    out
}

fn eval(chain: &[Point2], x: f64) -> f64 {
    let n = chain.len();
    if x <= chain[0].x {
        return chain[0].y;
    }
    if x >= chain[n - 1].x {
        return chain[n - 1].y;
    }
    // First vertex strictly right of x.
    let j = chain.partition_point(|p| p.x <= x);
    let (a, b) = (chain[j - 1], chain[j]);
    let t = (x - a.x) / (b.x - a.x);
    a.y + t * (b.y - a.y)
}

/// For a concave chain (`above = true`) returns the x-interval where the
/// chain is `>= level`; for a convex chain, where it is `<= level`.
fn level_interval(chain: &[Point2], peak: usize, level: f64, above: bool) -> Option<(f64, f64)> {
    let ok = |p: &Point2| if above { p.y >= level } else { p.y <= level };
    if !ok(&chain[peak]) {
        return None;
    }
    let cross_x = |a: Point2, b: Point2| {
        if (b.y - a.y).abs() <= f64::MIN_POSITIVE {
            a.x
        } else {
            a.x + (level - a.y) / (b.y - a.y) * (b.x - a.x)
        }
    };
    // Rising side: chain[..=peak] moves toward the feasible side.
    let left = &chain[..=peak];
    let i = left.partition_point(|p| !ok(p));
    let xa = if i == 0 { left[0].x } else { cross_x(left[i - 1], left[i]) };
    let right = &chain[peak..];
    let j = right.partition_point(ok);
    let xb = if j == right.len() {
        right[right.len() - 1].x
    } else {
        cross_x(right[j - 1], right[j])
    };
    Some((xa, xb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::clip_to_rect;

    fn diamond() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point2::new(0.0, 1.0),
            Point2::new(2.0, 0.0),
            Point2::new(4.0, 1.0),
            Point2::new(2.0, 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn chains_evaluate() {
        let c = MonotoneChains::new(&diamond());
        assert_eq!(c.x_range(), (0.0, 4.0));
        assert!((c.lower_at(1.0) - 0.5).abs() < 1e-15);
        assert!((c.upper_at(3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn bbox_matches_clipping() {
        let poly = diamond();
        let c = MonotoneChains::new(&poly);
        let rects = [
            AxisRect::raw(0.0, 0.0, 1.0, 0.5),
            AxisRect::raw(0.2, 0.0, 1.0, 0.7),
            AxisRect::raw(1.5, 1.5, 2.0, 2.0),
            AxisRect::raw(3.5, 1.6, 1.0, 1.0),
            AxisRect::raw(-1.0, -1.0, 6.0, 6.0),
        ];
        for r in rects {
            let exact = clip_to_rect(&poly, &r).map(|p| p.bbox());
            let fast = c.intersection_bbox(&r);
            match (exact, fast) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    assert!((a.x0 - b.x0).abs() < 1e-12, "{r:?}: {a:?} vs {b:?}");
                    assert!((a.y0 - b.y0).abs() < 1e-12, "{r:?}: {a:?} vs {b:?}");
                    assert!((a.w - b.w).abs() < 1e-12, "{r:?}: {a:?} vs {b:?}");
                    assert!((a.h - b.h).abs() < 1e-12, "{r:?}: {a:?} vs {b:?}");
                }
                (a, b) => panic!("{r:?}: clip {a:?} vs chains {b:?}"),
            }
        }
    }
}
