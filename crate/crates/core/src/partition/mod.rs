//! Equal-area partitions of an axis-aligned box into `k` rectangles.

pub mod grid;
pub mod squarified;

use serde::{Deserialize, Serialize};

use crate::geom::AxisRect;

pub use grid::{grid_partition, select_best_config, subdivide_configs, subdivide_partition, ConfigSource, GridConfig, SplitFlag};
pub use squarified::{partition_aspect_stats, squarified_partition, AspectStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StripOrientation {
    /// A column: cells stacked bottom to top.
    Vertical,
    /// A row: cells placed left to right.
    Horizontal,
}

/// A row or column of congruent cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub orientation: StripOrientation,
    /// The region the strip covers.
    pub rect: AxisRect,
    /// Indices into [`Partition::cells`], in order along the strip.
    pub cells: Vec<usize>,
    /// Number of cells when the strip was created.
    pub original_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PartitionKind {
    Squarified,
    Grid(GridConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub kind: PartitionKind,
    /// The partitioned box.
    pub bounds: AxisRect,
    /// Cells in creation order.
    pub cells: Vec<AxisRect>,
    pub strips: Vec<Strip>,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.cells.len()
    }

    /// Largest cell aspect ratio.
    pub fn max_aspect_ratio(&self) -> f64 {
        self.cells.iter().map(AxisRect::aspect_ratio).fold(1.0, f64::max)
    }
}

/// Splits `rect` into `n` congruent cells along `orientation`. Positions are
/// computed from the strip ends so the last cell closes the strip exactly.
pub(crate) fn split_strip(rect: &AxisRect, orientation: StripOrientation, n: usize) -> Vec<AxisRect> {
    let nf = n as f64;
    (0..n)
        .map(|i| match orientation {
            StripOrientation::Vertical => {
                let y0 = rect.y0 + rect.h * (i as f64 / nf);
                let y1 = if i + 1 == n {
                    rect.y1()
                } else {
                    rect.y0 + rect.h * ((i + 1) as f64 / nf)
                };
                AxisRect::raw(rect.x0, y0, rect.w, y1 - y0)
            }
            StripOrientation::Horizontal => {
                let x0 = rect.x0 + rect.w * (i as f64 / nf);
                let x1 = if i + 1 == n {
                    rect.x1()
                } else {
                    rect.x0 + rect.w * ((i + 1) as f64 / nf)
                };
                AxisRect::raw(x0, rect.y0, x1 - x0, rect.h)
            }
        })
        .collect()
}
