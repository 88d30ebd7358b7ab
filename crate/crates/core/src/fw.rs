//! Closed-form Fermat–Weber integrals `FW(S, p) = ∬_S ‖x − p‖ dA`.
//!
//! Polygons are handled exactly: each edge contributes a signed pair of
//! right triangles with the right angle at the foot of the perpendicular
//! from `p`, so the evaluator needs no quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point2};
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

/// Below this leg length the `a³·asinh(b/a)` term is taken at its limit 0.
const LEG_GUARD: f64 = 1e-300;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// FW of a `w × h` rectangle about its center.
pub fn fw_rect(w: f64, h: f64, norm: Norm) -> Result<f64> {
    positive("width", w)?;
    positive("height", h)?;
    Ok(fw_rect_raw(w, h, norm))
}

pub(crate) fn fw_rect_raw(w: f64, h: f64, norm: Norm) -> f64 {
    match norm {
        Norm::L2 => {
            let d = w.hypot(h);
            h * w * d / 6.0 + w.powi(3) / 12.0 * (h / w).asinh() + h.powi(3) / 12.0 * (w / h).asinh()
        }
        Norm::L1 => 0.25 * (w * w * h + w * h * h),
        Norm::Linf => {
            let (w, h) = if w >= h { (w, h) } else { (h, w) };
            0.25 * w * w * h + h.powi(3) / 12.0
        }
    }
}

/// Half of the Euclidean rectangle value, `FW_{1/2}(w, h)`.
pub fn fw_half_rect(w: f64, h: f64) -> Result<f64> {
    Ok(0.5 * fw_rect(w, h, Norm::L2)?)
}

pub fn fw_disk(r: f64) -> Result<f64> {
    positive("radius", r)?;
    Ok(2.0 * std::f64::consts::PI * r.powi(3) / 3.0)
}

/// Circular sector of radius `r` and opening `theta`, about its apex.
pub fn fw_sector(r: f64, theta: f64) -> Result<f64> {
    positive("radius", r)?;
    if !(0.0..=std::f64::consts::TAU).contains(&theta) {
        return Err(Error::domain(format!("sector angle {theta} outside [0, 2π]")));
    }
    Ok(theta * r.powi(3) / 3.0)
}

/// Right triangle with legs `a = BC`, `b = CA` (right angle at `C`), about
/// the vertex `B`.
pub fn fw_right_triangle(a: f64, b: f64) -> Result<f64> {
    positive("leg a", a)?;
    positive("leg b", b)?;
    Ok(right_triangle(a, b))
}

fn right_triangle(a: f64, b: f64) -> f64 {
    if a < LEG_GUARD {
        return 0.0;
    }
    let c = a.hypot(b);
    a * b * c / 6.0 + a.powi(3) / 6.0 * (b / a).asinh()
}

/// Signed right-triangle value along a line at distance `d`: odd in `t`.
fn fan(d: f64, t: f64) -> f64 {
    t.signum() * right_triangle(d, t.abs())
}

/// Per-edge frame relative to `p`: distance to the supporting line, foot
/// parameters of both endpoints, side sign, unit direction, foot point.
struct EdgeFrame {
    d: f64,
    t0: f64,
    t1: f64,
    sign: f64,
    u: Point2,
    foot: Point2,
}

fn edge_frame(a: Point2, b: Point2, p: Point2) -> Option<EdgeFrame> {
    let e = b - a;
    let len = e.norm();
    if len == 0.0 {
        return None;
    }
    let u = e * (1.0 / len);
    let ap = p - a;
    let s = u.dot(ap);
    let h = u.cross(ap);
    Some(EdgeFrame {
        d: h.abs(),
        t0: -s,
        t1: len - s,
        sign: if h >= 0.0 { 1.0 } else { -1.0 },
        u,
        foot: a + u * s,
    })
}

/// Exact Euclidean `FW(C, p)` for a counterclockwise convex ring. `p` may
/// lie anywhere; outside points are handled by signed fan triangles.
pub fn fw_ring_at(ring: &[Point2], p: Point2) -> f64 {
    let n = ring.len();
    let mut acc = CompensatedSum::default();
    for i in 0..n {
        let Some(f) = edge_frame(ring[i], ring[(i + 1) % n], p) else {
            continue;
        };
        if f.d == 0.0 {
            continue;
        }
        acc.add(f.sign * fan(f.d, f.t1));
        acc.add(-f.sign * fan(f.d, f.t0));
    }
    acc.value()
}

pub fn fw_polygon_at(poly: &ConvexPolygon, p: Point2) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::domain(format!("evaluation point {p:?} is not finite")));
    }
    Ok(fw_ring_at(poly.vertices(), p))
}

/// `∇_p FW(C, p) = −∮ ‖x − p‖ n ds`.
pub fn fw_ring_gradient(ring: &[Point2], p: Point2) -> Point2 {
    let n = ring.len();
    let (mut gx, mut gy) = (CompensatedSum::default(), CompensatedSum::default());
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let Some(f) = edge_frame(a, b, p) else { continue };
        let line = arc_length_moment(f.d, f.t1) - arc_length_moment(f.d, f.t0);
        // Outward normal of a counterclockwise edge.
        let normal = Point2::new(f.u.y, -f.u.x);
        gx.add(-normal.x * line);
        gy.add(-normal.y * line);
    }
    Point2::new(gx.value(), gy.value())
}

/// `∫_0^t √(d² + s²) ds`.
fn arc_length_moment(d: f64, t: f64) -> f64 {
    let r = d.hypot(t);
    if d < LEG_GUARD {
        return 0.5 * t * t.abs();
    }
    0.5 * (t * r + d * d * (t / d).asinh())
}

/// Hessian of `FW(C, ·)` at `p`, row-major.
pub fn fw_ring_hessian(ring: &[Point2], p: Point2) -> [[f64; 2]; 2] {
    let n = ring.len();
    let mut h = [[0.0; 2]; 2];
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let Some(f) = edge_frame(a, b, p) else { continue };
        // ∇_p ∫_edge ‖x − p‖ ds = (p − foot)·[asinh(t/d)] − u·[√(d²+t²)].
        let across = p - f.foot;
        let asinh_span = if f.d < LEG_GUARD {
            0.0
        } else {
            (f.t1 / f.d).asinh() - (f.t0 / f.d).asinh()
        };
        let root_span = f.d.hypot(f.t1) - f.d.hypot(f.t0);
        let grad_line = across * asinh_span - f.u * root_span;
        let normal = Point2::new(f.u.y, -f.u.x);
        let nv = [normal.x, normal.y];
        let gv = [grad_line.x, grad_line.y];
        for r in 0..2 {
            for c in 0..2 {
                h[r][c] -= nv[r] * gv[c];
            }
        }
    }
    let off = 0.5 * (h[0][1] + h[1][0]);
    h[0][1] = off;
    h[1][0] = off;
    h
}
