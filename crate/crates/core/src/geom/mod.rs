//! Convex-polygon primitives.
//!
//! Conventions
//! - Polygons are stored counterclockwise without a repeated closing vertex.
//! - Boundary points count as inside.
//! - Predicates compare cross products against `EPS_CROSS * L²`, where `L` is
//!   the polygon's bounding extent; inputs are expected to be reasonably
//!   scaled (the pipeline normalizes the box height to 1 before partitioning).

mod chains;
mod clip;
mod hull;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

pub use chains::MonotoneChains;
pub(crate) use clip::clip_ring;
pub use clip::{clip_halfplane, clip_to_rect};
pub use hull::{convex_hull, diameter, diameter_indices};

/// Relative tolerance on cross products.
pub const EPS_CROSS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point2) -> f64 {
        let d = self - o;
        d.dot(d)
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    /// Rotates counterclockwise about the origin by `angle` radians.
    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle `(a, b, c)`.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Axis-aligned rectangle given by its lower-left corner and dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRect {
    pub x0: f64,
    pub y0: f64,
    pub w: f64,
    pub h: f64,
}

impl AxisRect {
    pub fn new(x0: f64, y0: f64, w: f64, h: f64) -> Result<Self> {
        if !(w > 0.0 && h > 0.0) || !x0.is_finite() || !y0.is_finite() || !w.is_finite() || !h.is_finite() {
            return Err(Error::domain(format!("rectangle needs finite positive size, got {w} × {h}")));
        }
        Ok(Self { x0, y0, w, h })
    }

    pub(crate) const fn raw(x0: f64, y0: f64, w: f64, h: f64) -> Self {
        Self { x0, y0, w, h }
    }

    pub fn x1(&self) -> f64 {
        self.x0 + self.w
    }

    pub fn y1(&self) -> f64 {
        self.y0 + self.h
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.x0 + 0.5 * self.w, self.y0 + 0.5 * self.h)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn aspect_ratio(&self) -> f64 {
        crate::numeric::aspect_ratio(self.w, self.h)
    }

    /// Corners in counterclockwise order starting at the lower-left.
    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x0, self.y0),
            Point2::new(self.x1(), self.y0),
            Point2::new(self.x1(), self.y1()),
            Point2::new(self.x0, self.y1()),
        ]
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon::from_ccw_unchecked(self.corners().to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Point2> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    /// Validates and normalizes a vertex ring.
    ///
    /// Accepts either orientation (clockwise input is reversed), drops a
    /// repeated closing vertex and consecutive duplicates, and rejects rings
    /// that are not convex or have no area.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::domain(format!("non-finite vertex ({}, {})", p.x, p.y)));
        }
        let scale = extent(&vertices);
        let mut v = dedup_ring(vertices, 1e-14 * scale.max(f64::MIN_POSITIVE));
        if v.len() < 3 {
            return Err(Error::DegenerateGeometry(format!("{} distinct vertices", v.len())));
        }
        let signed = signed_area(&v);
        if signed.abs() <= EPS_CROSS * scale * scale {
            return Err(Error::DegenerateGeometry("polygon has zero area".into()));
        }
        if signed < 0.0 {
            v.reverse();
        }
        let tol = EPS_CROSS * scale * scale;
        let n = v.len();
        for i in 0..n {
            let turn = orient(v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            if turn < -tol {
                return Err(Error::NotConvex { vertex: i });
            }
        }
        Ok(Self { vertices: v })
    }

    /// Wraps a ring already known to be counterclockwise and convex.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Iterates edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Centroid of the lamina.
    pub fn centroid(&self) -> Point2 {
        // Relative to the first vertex for conditioning.
        let o = self.vertices[0];
        let mut a = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let c = p.cross(q);
            a += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point2::new(o.x + cx / (3.0 * a), o.y + cy / (3.0 * a))
    }

    pub fn bbox(&self) -> AxisRect {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        AxisRect::raw(x0, y0, x1 - x0, y1 - y0)
    }

    /// Absolute tolerance for cross-product tests on this polygon.
    pub fn cross_tolerance(&self) -> f64 {
        let s = extent(&self.vertices);
        EPS_CROSS * s * s
    }

    /// Point-in-polygon test by binary search over the fan from vertex 0.
    /// Runs in `O(log n)`; boundary points are inside.
    pub fn contains(&self, p: Point2) -> bool {
        self.contains_with_tol(p, self.cross_tolerance())
    }

    pub(crate) fn contains_with_tol(&self, p: Point2, tol: f64) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let o = v[0];
        let rel = p - o;
        if (v[1] - o).cross(rel) < -tol || (v[n - 1] - o).cross(rel) > tol {
            return false;
        }
        let (mut lo, mut hi) = (1usize, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if (v[mid] - o).cross(rel) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        orient(v[lo], v[hi], p) >= -tol
    }

    /// Euclidean distance from `p` to the polygon (0 inside).
    pub fn distance(&self, p: Point2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                let t = ((p - a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
                p.dist(a + e * t)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Euclidean distance from an interior point to the boundary (0 outside).
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                e.cross(p - a) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }

    /// Applies `f` to every vertex. `f` must preserve orientation and convexity
    /// (rigid motions, positive scalings).
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> ConvexPolygon {
        ConvexPolygon::from_ccw_unchecked(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn translate(&self, t: Point2) -> ConvexPolygon {
        self.map(|p| p + t)
    }

    pub fn scale(&self, s: f64) -> ConvexPolygon {
        assert!(s > 0.0, "scale must be positive");
        self.map(|p| p * s)
    }

    pub fn rotate_about(&self, pivot: Point2, angle: f64) -> ConvexPolygon {
        self.map(|p| pivot + (p - pivot).rotate(angle))
    }
}

fn extent(v: &[Point2]) -> f64 {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    (x1 - x0).max(y1 - y0).max(0.0)
}

pub(crate) fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let o = v[0];
    0.5 * compensated_sum((1..n - 1).map(|i| (v[i] - o).cross(v[i + 1] - o)))
}

fn dedup_ring(v: Vec<Point2>, tol: f64) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(v.len());
    for p in v {
        if out.last().is_none_or(|q| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
        out.pop();
    }
    out
}

/// Bounding box of `C` in the frame where its diameter lies on the x-axis.
///
/// `rotation` maps world directions to box directions; `origin` is the box's
/// lower-left corner expressed in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedBox {
    pub w: f64,
    pub h: f64,
    pub rotation: f64,
    pub origin: Point2,
}

impl OrientedBox {
    pub fn to_box(&self, p: Point2) -> Point2 {
        (p - self.origin).rotate(self.rotation)
    }

    pub fn to_world(&self, q: Point2) -> Point2 {
        self.origin + q.rotate(-self.rotation)
    }

    pub fn rect(&self) -> AxisRect {
        AxisRect::raw(0.0, 0.0, self.w, self.h)
    }

    /// World-frame center of the box.
    pub fn center_world(&self) -> Point2 {
        self.to_world(Point2::new(0.5 * self.w, 0.5 * self.h))
    }
}

/// Rotates `poly` so its diameter lies along the x-axis and returns the
/// axis-aligned bounding box in that frame, together with the polygon
/// expressed in box coordinates (lower-left corner at the origin).
pub fn diameter_aligned_box(poly: &ConvexPolygon) -> (OrientedBox, ConvexPolygon) {
    let (i, j) = diameter_indices(poly);
    let (a, b) = (poly.vertices()[i], poly.vertices()[j]);
    let d = b - a;
    let rotation = -d.y.atan2(d.x);
    let rotated: Vec<Point2> = poly.vertices().iter().map(|p| p.rotate(rotation)).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &rotated {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let shift = Point2::new(x0, y0);
    let boxed = ConvexPolygon::from_ccw_unchecked(rotated.into_iter().map(|p| p - shift).collect());
    let obox = OrientedBox {
        w: x1 - x0,
        h: y1 - y0,
        rotation,
        origin: shift.rotate(-rotation),
    };
    (obox, boxed)
}
