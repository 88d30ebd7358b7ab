//! Two-grid equal-area partitions.
//!
//! The box is cut once, vertically or horizontally, and each side is split
//! into a uniform grid. Up to six candidate configurations are enumerated
//! around `p₀ = ⌊√(wk/h)⌋` columns and `q₀ = ⌊√(hk/w)⌋` rows; the one with
//! the smallest worst-case cell aspect ratio wins.

use serde::{Deserialize, Serialize};

use super::{split_strip, Partition, PartitionKind, Strip, StripOrientation};
use crate::error::{Error, Result};
use crate::geom::AxisRect;

/// Relative tolerance for treating two aspect ratios as equal.
const AR_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitFlag {
    /// Left grid of width `w − ℓ`, right grid of width `ℓ`.
    Vertical,
    /// Bottom grid of height `h − ℓ`, top grid of height `ℓ`.
    Horizontal,
}

/// Which enumeration loop produced a configuration, and the offset from
/// `p₀` or `q₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigSource {
    Columns(i8),
    Rows(i8),
}

/// `p` is always a column count and `q` a row count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub flag: SplitFlag,
    pub p1: usize,
    pub q1: usize,
    pub p2: usize,
    pub q2: usize,
    /// Size of the second grid across the cut; 0 for a single grid.
    pub ell: f64,
    pub ar1: f64,
    pub ar2: f64,
    pub source: ConfigSource,
}

impl GridConfig {
    pub fn n1(&self) -> usize {
        self.p1 * self.q1
    }

    pub fn n2(&self) -> usize {
        self.p2 * self.q2
    }

    pub fn k(&self) -> usize {
        self.n1() + self.n2()
    }

    pub fn max_ar(&self) -> f64 {
        self.ar1.max(self.ar2)
    }

    pub fn min_ar(&self) -> f64 {
        self.ar1.min(self.ar2)
    }
}

fn ratio(x: f64) -> f64 {
    x.max(1.0 / x)
}

/// Enumerates the candidate configurations for splitting `bounds` into `k`
/// cells, columns loop first.
pub fn subdivide_configs(bounds: &AxisRect, k: usize) -> Result<Vec<GridConfig>> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let (w, h) = (bounds.w, bounds.h);
    let kf = k as f64;
    let p0 = (w * kf / h).sqrt().floor() as i64;
    let q0 = (h * kf / w).sqrt().floor() as i64;
    let mut out = Vec::with_capacity(6);

    for off in -1i8..=1 {
        let p = p0 + off as i64;
        if p < 1 {
            continue;
        }
        let p = p as usize;
        let q = k / p;
        if q < 1 {
            continue;
        }
        let s = k - p * q;
        let ar1 = ratio(w * (q * q) as f64 / (h * kf));
        let (ell, ar2) = if s == 0 {
            (0.0, ar1)
        } else {
            (w * (s * (q + 1)) as f64 / kf, ratio(w * ((q + 1) * (q + 1)) as f64 / (h * kf)))
        };
        out.push(GridConfig {
            flag: SplitFlag::Vertical,
            p1: p - s,
            q1: q,
            p2: s,
            q2: if s == 0 { 0 } else { q + 1 },
            ell,
            ar1,
            ar2,
            source: ConfigSource::Columns(off),
        });
    }

    for off in -1i8..=1 {
        let q = q0 + off as i64;
        if q < 1 {
            continue;
        }
        let q = q as usize;
        let p = k / q;
        if p < 1 {
            continue;
        }
        let s = k - p * q;
        let ar1 = ratio(h * (p * p) as f64 / (w * kf));
        let (ell, ar2) = if s == 0 {
            (0.0, ar1)
        } else {
            (h * (s * (p + 1)) as f64 / kf, ratio(h * ((p + 1) * (p + 1)) as f64 / (w * kf)))
        };
        out.push(GridConfig {
            flag: SplitFlag::Horizontal,
            p1: p,
            q1: q - s,
            p2: if s == 0 { 0 } else { p + 1 },
            q2: s,
            ell,
            ar1,
            ar2,
            source: ConfigSource::Rows(off),
        });
    }
    Ok(out)
}

fn less(a: f64, b: f64) -> bool {
    a < b * (1.0 - AR_TIE)
}

/// Smallest worst-case aspect ratio; ties go to the smaller best-case
/// aspect ratio, then to the earliest candidate.
pub fn select_best_config(configs: &[GridConfig]) -> Result<GridConfig> {
    let mut best = *configs
        .first()
        .ok_or_else(|| Error::domain("no grid configurations to choose from"))?;
    for c in &configs[1..] {
        let better = less(c.max_ar(), best.max_ar()) || (!less(best.max_ar(), c.max_ar()) && less(c.min_ar(), best.min_ar()));
        if better {
            best = *c;
        }
    }
    Ok(best)
}

/// Lays out `cfg` in `bounds`. Strips are the grid columns for a vertical
/// cut and the grid rows for a horizontal one.
pub fn grid_partition(bounds: &AxisRect, cfg: &GridConfig) -> Result<Partition> {
    let (n1, n2) = (cfg.n1(), cfg.n2());
    let extent = match cfg.flag {
        SplitFlag::Vertical => bounds.w,
        SplitFlag::Horizontal => bounds.h,
    };
    let consistent = n1 + n2 > 0
        && (cfg.p1 == 0) == (cfg.q1 == 0)
        && (cfg.p2 == 0) == (cfg.q2 == 0)
        && cfg.ell.is_finite()
        && (0.0..=extent).contains(&cfg.ell)
        && ((n2 == 0) == (cfg.ell == 0.0))
        && ((n1 == 0) == (cfg.ell == extent));
    if !consistent {
        return Err(Error::domain(format!("inconsistent grid configuration {cfg:?}")));
    }

    let mut cells = Vec::with_capacity(n1 + n2);
    let mut strips = Vec::new();
    let mut add_grid = |region: AxisRect, cols: usize, rows: usize| {
        if cols == 0 {
            return;
        }
        let (orientation, lanes, per_lane) = match cfg.flag {
            SplitFlag::Vertical => (StripOrientation::Vertical, cols, rows),
            SplitFlag::Horizontal => (StripOrientation::Horizontal, rows, cols),
        };
        let lane_rects = split_strip(
            &region,
            match orientation {
                StripOrientation::Vertical => StripOrientation::Horizontal,
                StripOrientation::Horizontal => StripOrientation::Vertical,
            },
            lanes,
        );
        for lane in lane_rects {
            let first = cells.len();
            cells.extend(split_strip(&lane, orientation, per_lane));
            strips.push(Strip {
                orientation,
                rect: lane,
                cells: (first..first + per_lane).collect(),
                original_count: per_lane,
            });
        }
    };

    match cfg.flag {
        SplitFlag::Vertical => {
            let cut = bounds.x1() - cfg.ell;
            add_grid(AxisRect::raw(bounds.x0, bounds.y0, cut - bounds.x0, bounds.h), cfg.p1, cfg.q1);
            add_grid(AxisRect::raw(cut, bounds.y0, bounds.x1() - cut, bounds.h), cfg.p2, cfg.q2);
        }
        SplitFlag::Horizontal => {
            let cut = bounds.y1() - cfg.ell;
            add_grid(AxisRect::raw(bounds.x0, bounds.y0, bounds.w, cut - bounds.y0), cfg.p1, cfg.q1);
            add_grid(AxisRect::raw(bounds.x0, cut, bounds.w, bounds.y1() - cut), cfg.p2, cfg.q2);
        }
    }

    Ok(Partition {
        kind: PartitionKind::Grid(*cfg),
        bounds: *bounds,
        cells,
        strips,
    })
}

/// Enumerates, selects and lays out the best configuration.
pub fn subdivide_partition(bounds: &AxisRect, k: usize) -> Result<Partition> {
    let best = select_best_config(&subdivide_configs(bounds, k)?)?;
    grid_partition(bounds, &best)
}
