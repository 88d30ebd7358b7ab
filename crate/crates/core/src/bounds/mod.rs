//! Lower and upper bounding functions for `FW(C)` and `FW(C, k)`.
//!
//! The lower bound comes from the region of area `A` with the smallest FW
//! value inside a slab of height `h`: a disk, clipped by the slab once its
//! radius exceeds `h/2`. The upper bound is the concave envelope of the
//! half-rectangle bound, capped by the full-rectangle value.

pub mod cases;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::{fw_rect_raw, Norm};
use crate::numeric::bisect_increasing;

const ROOT_TOL: f64 = 1e-13;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::domain("k must be at least 1"))
    } else {
        Ok(())
    }
}

/// Area of a radius-`r` disk clipped to a centered slab of height `h`.
fn slab_disk_area(r: f64, h: f64) -> f64 {
    let half = 0.5 * h;
    if r <= half {
        return PI * r * r;
    }
    h * (r * r - half * half).sqrt() + 2.0 * r * r * (half / r).asin()
}

/// Radius `r` with `Area(disk(r) ∩ slab(h)) = A`.
pub fn slab_disk_radius(area: f64, h: f64) -> Result<f64> {
    check_positive("area", area)?;
    check_positive("slab height", h)?;
    Ok(slab_radius_raw(area, h))
}

fn slab_radius_raw(area: f64, h: f64) -> f64 {
    if area <= PI * 0.25 * h * h {
        return (area / PI).sqrt();
    }
    bisect_increasing(|r| slab_disk_area(r, h) - area, 0.5 * h, area / h + h, ROOT_TOL)
}

/// Disk-only lower bound `(2 / (3√π)) A^{3/2}`.
pub fn phi_lb_disk(area: f64) -> Result<f64> {
    check_positive("area", area)?;
    Ok(2.0 / (3.0 * PI.sqrt()) * area.powf(1.5))
}

/// Lower bound on `FW(C)` for a convex `C` of area `A` inside a slab of
/// height `h`.
pub fn phi_lb(area: f64, h: f64) -> Result<f64> {
    check_positive("area", area)?;
    check_positive("slab height", h)?;
    Ok(phi_lb_raw(area, h))
}

pub(crate) fn phi_lb_raw(area: f64, h: f64) -> f64 {
    let r = slab_radius_raw(area, h);
    if r <= 0.5 * h {
        return 2.0 / 3.0 * PI * r.powi(3);
    }
    let root = (r * r - 0.25 * h * h).max(0.0).sqrt();
    4.0 * r.powi(3) / 3.0 * (0.5 * h / r).asin() + r * h * root / 3.0 + h.powi(3) / 12.0 * ((2.0 * r + 2.0 * root) / h).ln()
}

/// `k · Φ_LB(A/k, 1)`, for a box normalized to height 1.
pub fn kmedian_lower_bound(area: f64, k: usize) -> Result<f64> {
    kmedian_lower_bound_slab(area, k, 1.0)
}

/// `k · Φ_LB(A/k, h)`: lower bound on `FW(C, k)` when `C` fits in a slab of
/// height `h`. Homogeneous of degree 3 under scaling of `(A^{1/2}, h)`.
pub fn kmedian_lower_bound_slab(area: f64, k: usize, h: f64) -> Result<f64> {
    check_k(k)?;
    check_positive("area", area)?;
    check_positive("slab height", h)?;
    Ok(k as f64 * phi_lb_raw(area / k as f64, h))
}

/// Area `A_c` where `FW_{1/2}(w, 2A_c/w) = FW_□(w, h)`. Arguments are
/// sorted so that `w >= h`.
pub fn alpha_c(w: f64, h: f64) -> Result<f64> {
    check_positive("width", w)?;
    check_positive("height", h)?;
    Ok(alpha_c_raw(w, h))
}

pub(crate) fn alpha_c_raw(w: f64, h: f64) -> f64 {
    let (w, h) = if w >= h { (w, h) } else { (h, w) };
    let full = fw_rect_raw(w, h, Norm::L2);
    bisect_increasing(|a| 0.5 * fw_rect_raw(w, 2.0 * a / w, Norm::L2) - full, 0.0, 2.0 * w * h, ROOT_TOL)
}

/// The upper envelope `min(A/A_c, 1) · FW_□(w, h)` for one cell,
/// precomputed so it can be evaluated at many areas.
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub w: f64,
    pub h: f64,
    pub alpha_c: f64,
    pub full: f64,
}

impl Envelope {
    pub fn new(w: f64, h: f64) -> Result<Self> {
        check_positive("width", w)?;
        check_positive("height", h)?;
        Ok(Self::raw(w, h))
    }

    pub(crate) fn raw(w: f64, h: f64) -> Self {
        Self {
            w,
            h,
            alpha_c: alpha_c_raw(w, h),
            full: fw_rect_raw(w, h, Norm::L2),
        }
    }

    /// Cell of area `cell_area` with aspect ratio `beta`, long side horizontal.
    pub(crate) fn with_aspect(cell_area: f64, beta: f64) -> Self {
        Self::raw((cell_area * beta).sqrt(), (cell_area / beta).sqrt())
    }

    pub fn eval(&self, area: f64) -> f64 {
        (area / self.alpha_c).min(1.0) * self.full
    }
}

/// Upper bound on `FW(C)` for a convex `C` of area `A` in a `w × h` box.
pub fn phi_ub(area: f64, w: f64, h: f64) -> Result<f64> {
    check_area_in_box(area, w, h)?;
    Ok(Envelope::raw(w, h).eval(area))
}

/// The half-rectangle bound `FW_{1/2}(w, 2A/w)` before taking the envelope
/// (with `w` the longer side).
pub fn phi_ub_raw(area: f64, w: f64, h: f64) -> Result<f64> {
    check_area_in_box(area, w, h)?;
    let w = w.max(h);
    Ok(0.5 * fw_rect_raw(w, 2.0 * area / w, Norm::L2))
}

fn check_area_in_box(area: f64, w: f64, h: f64) -> Result<()> {
    check_positive("area", area)?;
    check_positive("width", w)?;
    check_positive("height", h)?;
    if area > w * h * (1.0 + 1e-12) {
        return Err(Error::domain(format!("area {area} exceeds box area {}", w * h)));
    }
    Ok(())
}

/// `k · Φ_UB(A/k, √(2Aβ/k), √(2A/(kβ)))`, where `β` is the largest cell
/// aspect ratio of the partition.
pub fn kmedian_upper_bound(area: f64, k: usize, beta: f64) -> Result<f64> {
    check_k(k)?;
    check_positive("area", area)?;
    if !(beta >= 1.0 && beta.is_finite()) {
        return Err(Error::domain(format!("aspect ratio must be >= 1, got {beta}")));
    }
    let a = area / k as f64;
    Ok(k as f64 * Envelope::with_aspect(2.0 * a, beta).eval(a))
}

/// Bounds for one instance, reported in the height-normalized frame
/// (`h = 1`) except for `lb` and `ub`, which are in input units.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub area: f64,
    pub k: usize,
    pub w: f64,
    pub h: f64,
    pub z: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lb: f64,
    pub ub: f64,
    pub alpha_c: f64,
    pub rho: f64,
}

impl BoundsReport {
    /// `area` is the polygon area, `(w, h)` its diameter-aligned box with
    /// `w >= h`, and `beta` the largest cell aspect ratio of the partition.
    pub fn new(area: f64, k: usize, w: f64, h: f64, beta: f64) -> Result<Self> {
        check_positive("width", w)?;
        check_positive("height", h)?;
        let lb = kmedian_lower_bound_slab(area, k, h)?;
        let ub = kmedian_upper_bound(area, k, beta)?;
        let (area_n, w_n) = (area / (h * h), w / h);
        let alpha = area_n / k as f64;
        let cell = Envelope::with_aspect(2.0 * alpha, beta);
        Ok(Self {
            area,
            k,
            w,
            h,
            z: w_n / k as f64,
            alpha,
            beta,
            lb,
            ub,
            alpha_c: cell.alpha_c,
            rho: ub / lb,
        })
    }
}
