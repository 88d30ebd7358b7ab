//! End-to-end solve: align, partition, place, and map back to the world.

use serde::{Deserialize, Serialize};

use crate::bounds::{kmedian_lower_bound, kmedian_upper_bound, BoundsReport};
use crate::error::{Error, Result};
use crate::fw::fw_ring_at;
use crate::geom::{clip_to_rect, diameter_aligned_box, AxisRect, ConvexPolygon, OrientedBox, Point2};
use crate::numeric::compensated_sum;
use crate::objective::{evaluate_exact, Objective};
use crate::partition::{squarified_partition, subdivide_partition, Partition};
use crate::placement::{place_medians, MedianSolution, PlacementStrategy, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Squarified strips.
    #[default]
    Construct,
    /// Best of the two-grid configurations.
    Subdivide,
}

impl Algorithm {
    pub fn partition(self, bounds: &AxisRect, k: usize) -> Result<Partition> {
        match self {
            Algorithm::Construct => squarified_partition(bounds, k),
            Algorithm::Subdivide => subdivide_partition(bounds, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub placement: PlacementStrategy,
    pub seed: u64,
}

/// A solved instance. Everything except [`Solved::world_points`] lives in
/// the normalized frame: diameter along the x-axis, box `[0, w/h] × [0, 1]`.
#[derive(Debug, Clone)]
pub struct Solved {
    pub frame: OrientedBox,
    /// Box height `h`; normalized lengths are world lengths divided by it.
    pub scale: f64,
    pub polygon: ConvexPolygon,
    pub solution: MedianSolution,
}

/// The polygon in the normalized frame, with the world frame and scale.
pub fn normalize(poly: &ConvexPolygon) -> (OrientedBox, f64, ConvexPolygon) {
    let (frame, local) = diameter_aligned_box(poly);
    let scale = frame.h;
    (frame, scale, local.scale(1.0 / scale))
}

pub fn solve(poly: &ConvexPolygon, k: usize, opts: &SolveOptions) -> Result<Solved> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let (frame, scale, local) = normalize(poly);
    let bounds = AxisRect::raw(0.0, 0.0, frame.w / scale, 1.0);
    let partition = opts.algorithm.partition(&bounds, k)?;
    let solution = place_medians(&local, &partition, opts.placement, opts.seed);
    Ok(Solved {
        frame,
        scale,
        polygon: local,
        solution,
    })
}

impl Solved {
    pub fn k(&self) -> usize {
        self.solution.points.len()
    }

    pub fn to_world(&self, p: Point2) -> Point2 {
        self.frame.to_world(p * self.scale)
    }

    pub fn world_points(&self) -> Vec<Point2> {
        self.solution.points.iter().map(|&p| self.to_world(p)).collect()
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.solution.provenance
    }

    pub fn partition(&self) -> &Partition {
        &self.solution.partition
    }

    /// World-frame corners of every partition cell.
    pub fn world_cells(&self) -> Vec<[Point2; 4]> {
        self.partition()
            .cells
            .iter()
            .map(|c| c.corners().map(|q| self.to_world(q)))
            .collect()
    }

    fn cube(&self) -> f64 {
        self.scale.powi(3)
    }

    /// Exact objective in world units.
    pub fn evaluate(&self) -> Result<Objective> {
        let mut o = evaluate_exact(&self.polygon, &self.solution.points)?;
        let s2 = self.scale * self.scale;
        o.value *= self.cube();
        for c in &mut o.per_cell {
            c.site = self.to_world(c.site);
            c.area *= s2;
            c.fw *= self.cube();
        }
        Ok(o)
    }

    /// `k · Φ_LB(A/k, h)` in world units.
    pub fn lower_bound(&self) -> f64 {
        kmedian_lower_bound(self.polygon.area(), self.k()).expect("valid instance") * self.cube()
    }

    /// `k · Φ_UB` at the partition's largest cell aspect ratio, world units.
    pub fn upper_bound(&self) -> f64 {
        kmedian_upper_bound(self.polygon.area(), self.k(), self.partition().max_aspect_ratio()).expect("valid instance") * self.cube()
    }

    pub fn bounds_report(&self) -> Result<BoundsReport> {
        BoundsReport::new(
            self.polygon.area(),
            self.k(),
            self.frame.w / self.scale,
            1.0,
            self.partition().max_aspect_ratio(),
        )
    }

    /// `Σ_i FW(C ∩ R_i, p_i)` over the cells the final points serve, world
    /// units. Randomly placed points serve no cell.
    pub fn assigned_cell_sum(&self) -> f64 {
        let s = &self.solution;
        let terms = s.assigned_cell.iter().zip(&s.points).filter_map(|(cell, &p)| {
            let piece = clip_to_rect(&self.polygon, cell.as_ref()?)?;
            Some(fw_ring_at(piece.vertices(), p))
        });
        compensated_sum(terms) * self.cube()
    }

    /// `Σ_i FW(C ∩ R_i, center(R_i))` over the original partition cells,
    /// before any relocation, world units.
    pub fn cell_center_sum(&self) -> f64 {
        let terms = self.partition().cells.iter().filter_map(|cell| {
            let piece = clip_to_rect(&self.polygon, cell)?;
            Some(fw_ring_at(piece.vertices(), cell.center()))
        });
        compensated_sum(terms) * self.cube()
    }
}
