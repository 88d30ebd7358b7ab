//! Strip-based ("squarified") equal-area partition.
//!
//! Repeatedly fills a strip along the short side of the unfilled region,
//! adding cells to the strip while the common cell aspect ratio strictly
//! decreases. The last strip takes whatever remains.

use serde::{Deserialize, Serialize};

use super::{split_strip, Partition, PartitionKind, Strip, StripOrientation};
use crate::error::{Error, Result};
use crate::geom::AxisRect;
use crate::numeric::aspect_ratio;

pub fn squarified_partition(bounds: &AxisRect, k: usize) -> Result<Partition> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if !(bounds.w > 0.0 && bounds.h > 0.0 && bounds.w.is_finite() && bounds.h.is_finite()) {
        return Err(Error::domain(format!("box must have positive size, got {bounds:?}")));
    }
    let cell_area = bounds.area() / k as f64;
    let mut region = *bounds;
    let mut left = k;
    let mut cells = Vec::with_capacity(k);
    let mut strips = Vec::new();

    while left > 0 {
        // `side` is the strip's length, the cells are stacked along it.
        let (orientation, side) = if region.w >= region.h {
            (StripOrientation::Vertical, region.h)
        } else {
            (StripOrientation::Horizontal, region.w)
        };
        let ar = |i: usize| aspect_ratio(i as f64 * cell_area / side, side / i as f64);
        let mut n = 1;
        let mut current = ar(1);
        while n < left {
            let next = ar(n + 1);
            if next < current {
                n += 1;
                current = next;
            } else {
                break;
            }
        }

        let last = n == left;
        let rect = match orientation {
            StripOrientation::Vertical => {
                let width = if last { region.w } else { n as f64 * cell_area / side };
                let strip = AxisRect::raw(region.x0, region.y0, width, region.h);
                region = AxisRect::raw(region.x0 + width, region.y0, region.x1() - (region.x0 + width), region.h);
                strip
            }
            StripOrientation::Horizontal => {
                let height = if last { region.h } else { n as f64 * cell_area / side };
                let strip = AxisRect::raw(region.x0, region.y0, region.w, height);
                region = AxisRect::raw(region.x0, region.y0 + height, region.w, region.y1() - (region.y0 + height));
                strip
            }
        };
        let first = cells.len();
        cells.extend(split_strip(&rect, orientation, n));
        strips.push(Strip {
            orientation,
            rect,
            cells: (first..first + n).collect(),
            original_count: n,
        });
        left -= n;
    }

    Ok(Partition {
        kind: PartitionKind::Squarified,
        bounds: *bounds,
        cells,
        strips,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AspectStats {
    pub max_ar: f64,
    /// Largest aspect ratio over all cells but the last one created.
    pub max_ar_excl_last: f64,
    pub last_ar: f64,
}

pub fn partition_aspect_stats(p: &Partition) -> AspectStats {
    let ars: Vec<f64> = p.cells.iter().map(AxisRect::aspect_ratio).collect();
    let (last, rest) = ars.split_last().expect("partition has at least one cell");
    let max_ar_excl_last = rest.iter().copied().fold(1.0, f64::max);
    AspectStats {
        max_ar: max_ar_excl_last.max(*last),
        max_ar_excl_last,
        last_ar: *last,
    }
}
