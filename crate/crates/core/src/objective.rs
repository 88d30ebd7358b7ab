//! Evaluating `FW(C, P) = ∬_C min_i ‖x − p_i‖ dA` for a fixed point set.
//!
//! The exact evaluator clips `C` to each site's Voronoi cell and sums the
//! closed-form integrals; the Monte Carlo evaluator is an independent check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::{fw_ring_at, fw_ring_gradient, fw_ring_hessian};
use crate::geom::{clip_ring, diameter, signed_area, ConvexPolygon, Point2};
use crate::numeric::{compensated_sum, CompensatedSum};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoronoiCell {
    pub site: Point2,
    /// `None` when the cell has no area inside `C`.
    pub cell: Option<ConvexPolygon>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CellContribution {
    pub site: Point2,
    pub area: f64,
    pub fw: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Objective {
    pub value: f64,
    pub per_cell: Vec<CellContribution>,
    pub method: Method,
    /// Standard error of a Monte Carlo estimate.
    pub stderr: Option<f64>,
}

/// Uniform bucket grid over the sites for neighbor and nearest queries.
struct SiteGrid<'a> {
    sites: &'a [Point2],
    x0: f64,
    y0: f64,
    size: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> SiteGrid<'a> {
    fn new(sites: &'a [Point2]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in sites {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        let per_side = (sites.len() as f64).sqrt().ceil().max(1.0);
        let size = span / per_side;
        let nx = (((x1 - x0) / size).floor() as usize + 1).max(1);
        let ny = (((y1 - y0) / size).floor() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        let mut grid = Self {
            sites,
            x0,
            y0,
            size,
            nx,
            ny,
            buckets: Vec::new(),
        };
        for (i, &p) in sites.iter().enumerate() {
            let (bx, by) = grid.bucket_of(p);
            buckets[by * nx + bx].push(i);
        }
        grid.buckets = buckets;
        grid
    }

    fn bucket_of(&self, p: Point2) -> (usize, usize) {
        let bx = ((p.x - self.x0) / self.size).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let by = ((p.y - self.y0) / self.size).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (bx, by)
    }

    /// Sites in the square ring at Chebyshev bucket distance `r` around
    /// `(bx, by)`; `None` once the ring lies entirely outside the grid.
    fn ring(&self, bx: usize, by: usize, r: usize, out: &mut Vec<usize>) -> bool {
        out.clear();
        let (bx, by, r) = (bx as i64, by as i64, r as i64);
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        if bx - r < 0 && by - r < 0 && bx + r >= nx && by + r >= ny && r > 0 {
            return false;
        }
        let mut push = |x: i64, y: i64| {
            if (0..nx).contains(&x) && (0..ny).contains(&y) {
                out.extend_from_slice(&self.buckets[(y * nx + x) as usize]);
            }
        };
        if r == 0 {
            push(bx, by);
            return true;
        }
        for x in bx - r..=bx + r {
            push(x, by - r);
            push(x, by + r);
        }
        for y in by - r + 1..by + r {
            push(bx - r, y);
            push(bx + r, y);
        }
        true
    }

    /// Index of the nearest site (lowest index on ties).
    fn nearest(&self, p: Point2) -> usize {
        let (bx, by) = self.bucket_of(p);
        let mut best = (f64::INFINITY, usize::MAX);
        let mut ring = Vec::new();
        let mut r = 0;
        while self.ring(bx, by, r, &mut ring) {
            for &j in &ring {
                let d = self.sites[j].dist2(p);
                if d < best.0 || (d == best.0 && j < best.1) {
                    best = (d, j);
                }
            }
            // Sites beyond ring r are at least r·size away.
            if best.1 != usize::MAX && (r as f64 * self.size).powi(2) > best.0 {
                break;
            }
            r += 1;
        }
        best.1
    }
}

fn check_sites(poly: &ConvexPolygon, points: &[Point2]) -> Result<Vec<Point2>> {
    if points.is_empty() {
        return Err(Error::domain("at least one site is required"));
    }
    let diam = diameter(poly).2;
    let nudge = 1e-12 * diam;
    let inward = poly.centroid();
    let mut sites = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::domain(format!("site {i} is not finite")));
        }
        if poly.distance(p) > 1e-9 * diam {
            return Err(Error::SiteOutside { index: i, point: p });
        }
        let q = if poly.boundary_distance(p) <= nudge {
            let to_center = inward - p;
            p + to_center * (nudge / to_center.norm().max(f64::MIN_POSITIVE))
        } else {
            p
        };
        sites.push(q);
    }
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(points[a].y.total_cmp(&points[b].y)));
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::DuplicateSites { first, second });
        }
    }
    Ok(sites)
}

fn max_dist2(ring: &[Point2], p: Point2) -> f64 {
    ring.iter().map(|q| q.dist2(p)).fold(0.0, f64::max)
}

fn clip_cells(poly: &ConvexPolygon, sites: &[Point2]) -> Vec<Vec<Point2>> {
    let grid = SiteGrid::new(sites);
    let area = poly.area();
    (0..sites.len())
        .into_par_iter()
        .map(|i| {
            let p = sites[i];
            let mut ring_pts = poly.vertices().to_vec();
            let (bx, by) = grid.bucket_of(p);
            let mut ring = Vec::new();
            let mut r = 0;
            while grid.ring(bx, by, r, &mut ring) {
                ring.sort_by(|&a, &b| sites[a].dist2(p).total_cmp(&sites[b].dist2(p)).then(a.cmp(&b)));
                for &j in &ring {
                    if j == i {
                        continue;
                    }
                    let q = sites[j];
                    // A site farther than twice the cell radius cannot cut it.
                    if q.dist2(p) > 4.0 * max_dist2(&ring_pts, p) {
                        break;
                    }
                    let n = q - p;
                    ring_pts = clip_ring(&ring_pts, n, n.dot(p.midpoint(q)));
                    if ring_pts.len() < 3 {
                        return Vec::new();
                    }
                }
                let reach = r as f64 * grid.size;
                if reach * reach > 4.0 * max_dist2(&ring_pts, p) {
                    break;
                }
                r += 1;
            }
            if signed_area(&ring_pts) <= 1e-15 * area {
                return Vec::new();
            }
            ring_pts
        })
        .collect()
}

/// Voronoi cells of `points` clipped to `poly`. Sites must be distinct and
/// inside `poly`; sites on the boundary are nudged inward by `1e-12·diam`.
pub fn voronoi_clip(poly: &ConvexPolygon, points: &[Point2]) -> Result<Vec<VoronoiCell>> {
    let sites = check_sites(poly, points)?;
    Ok(clip_cells(poly, &sites)
        .into_iter()
        .zip(points)
        .map(|(ring, &site)| VoronoiCell {
            site,
            cell: (ring.len() >= 3).then(|| ConvexPolygon::from_ccw_unchecked(ring)),
        })
        .collect())
}

pub fn evaluate_exact(poly: &ConvexPolygon, points: &[Point2]) -> Result<Objective> {
    let sites = check_sites(poly, points)?;
    let rings = clip_cells(poly, &sites);
    let per_cell: Vec<CellContribution> = rings
        .par_iter()
        .zip(points.par_iter())
        .map(|(ring, &site)| {
            if ring.len() < 3 {
                CellContribution { site, area: 0.0, fw: 0.0 }
            } else {
                CellContribution {
                    site,
                    area: signed_area(ring),
                    fw: fw_ring_at(ring, site),
                }
            }
        })
        .collect();
    Ok(Objective {
        value: compensated_sum(per_cell.iter().map(|c| c.fw)),
        per_cell,
        method: Method::Exact,
        stderr: None,
    })
}

const MC_CHUNK: usize = 1 << 16;

/// Uniform sampler on a convex polygon by area-weighted fan triangles.
pub struct PolygonSampler<'a> {
    verts: &'a [Point2],
    cumulative: Vec<f64>,
}

impl<'a> PolygonSampler<'a> {
    pub fn new(poly: &'a ConvexPolygon) -> Self {
        let v = poly.vertices();
        let mut acc = 0.0;
        let cumulative = (1..v.len() - 1)
            .map(|i| {
                acc += 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]);
                acc
            })
            .collect();
        Self { verts: v, cumulative }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point2 {
        let total = *self.cumulative.last().expect("polygon has a triangle");
        let t = rng.gen::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= t).min(self.cumulative.len() - 1);
        let (a, b, c) = (self.verts[0], self.verts[i + 1], self.verts[i + 2]);
        let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        a + (b - a) * u + (c - a) * v
    }
}

/// Monte Carlo estimate with `samples` uniform points. Chunk `i` draws from
/// stream `i` of a ChaCha8 generator seeded with `seed`, so results do not
/// depend on the thread count.
pub fn evaluate_mc(poly: &ConvexPolygon, points: &[Point2], samples: usize, seed: u64) -> Result<Objective> {
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    if points.is_empty() {
        return Err(Error::domain("at least one site is required"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("sites must be finite"));
    }
    let grid = SiteGrid::new(points);
    let sampler = PolygonSampler::new(poly);
    let k = points.len();
    let chunks = samples.div_ceil(MC_CHUNK);

    struct Acc {
        sum: CompensatedSum,
        sum_sq: CompensatedSum,
        per_site: Vec<(f64, usize)>,
    }
    let parts: Vec<Acc> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut acc = Acc {
                sum: CompensatedSum::new(),
                sum_sq: CompensatedSum::new(),
                per_site: vec![(0.0, 0); k],
            };
            for _ in 0..n {
                let x = sampler.sample(&mut rng);
                let j = grid.nearest(x);
                let d = points[j].dist(x);
                acc.sum.add(d);
                acc.sum_sq.add(d * d);
                acc.per_site[j].0 += d;
                acc.per_site[j].1 += 1;
            }
            acc
        })
        .collect();

    let (mut sum, mut sum_sq) = (CompensatedSum::new(), CompensatedSum::new());
    let mut per_site = vec![(0.0, 0usize); k];
    for a in &parts {
        sum.add(a.sum.value());
        sum_sq.add(a.sum_sq.value());
        for (t, s) in per_site.iter_mut().zip(&a.per_site) {
            t.0 += s.0;
            t.1 += s.1;
        }
    }
    let n = samples as f64;
    let area = poly.area();
    let mean = sum.value() / n;
    let var = if samples > 1 {
        ((sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let per_cell = per_site
        .iter()
        .zip(points)
        .map(|(&(s, c), &site)| CellContribution {
            site,
            area: area * c as f64 / n,
            fw: area * s / n,
        })
        .collect();
    Ok(Objective {
        value: area * mean,
        per_cell,
        method: Method::MonteCarlo,
        stderr: Some(area * (var / n).sqrt()),
    })
}

const NEWTON_MAX_ITER: usize = 200;

/// Minimizes `p ↦ FW(C, p)` by damped Newton steps on the exact gradient
/// and Hessian, starting from the centroid. Converged once
/// `‖∇FW‖ <= tol · Area(C)` (both sides have units of area).
pub fn solve_1median(poly: &ConvexPolygon, tol: f64) -> Result<(Point2, f64)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    // Work about the centroid so translation does not cost precision.
    let origin = poly.centroid();
    let ring: Vec<Point2> = poly.vertices().iter().map(|&v| v - origin).collect();
    let ring = &ring[..];
    let target = tol * poly.area();
    let mut p = Point2::new(0.0, 0.0);
    let mut f = fw_ring_at(ring, p);
    let mut g = fw_ring_gradient(ring, p);
    for _ in 0..NEWTON_MAX_ITER {
        if g.norm() <= target {
            return Ok((p + origin, f));
        }
        let h = fw_ring_hessian(ring, p);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let newton = (det > 0.0 && h[0][0] > 0.0)
            .then(|| Point2::new(-(h[1][1] * g.x - h[0][1] * g.y) / det, -(-h[1][0] * g.x + h[0][0] * g.y) / det));
        let mut step = match newton {
            Some(d) if d.dot(g) < 0.0 => d,
            _ => -g * (poly.bbox().w.max(poly.bbox().h) / g.norm().max(f64::MIN_POSITIVE) * 0.1),
        };
        let mut accepted = false;
        for _ in 0..60 {
            let q = p + step;
            let fq = fw_ring_at(ring, q);
            if fq < f && fq <= f + 1e-4 * step.dot(g) {
                p = q;
                f = fq;
                accepted = true;
                break;
            }
            step = step * 0.5;
        }
        g = fw_ring_gradient(ring, p);
        if !accepted {
            // No further decrease is representable; accept if close enough.
            if g.norm() <= 1e3 * target {
                return Ok((p + origin, f));
            }
            break;
        }
    }
    if g.norm() <= target {
        return Ok((p + origin, f));
    }
    Err(Error::NonConvergence {
        iterations: NEWTON_MAX_ITER,
        best: p + origin,
        value: f,
        gradient_norm: g.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fw::{fw_rect, Norm};
    use crate::geom::AxisRect;

    fn unit_square() -> ConvexPolygon {
        AxisRect::raw(0.0, 0.0, 1.0, 1.0).to_polygon()
    }

    #[test]
    fn single_site_is_whole_polygon() {
        let sq = unit_square();
        let cells = voronoi_clip(&sq, &[Point2::new(0.5, 0.5)]).unwrap();
        assert_eq!(cells.len(), 1);
        assert!((cells[0].cell.as_ref().unwrap().area() - 1.0).abs() < 1e-15);
        let o = evaluate_exact(&sq, &[Point2::new(0.5, 0.5)]).unwrap();
        assert!((o.value - 0.382_597_858_232_106).abs() < 1e-12);
    }

    #[test]
    fn two_symmetric_sites() {
        let sq = unit_square();
        let pts = [Point2::new(0.25, 0.5), Point2::new(0.75, 0.5)];
        let o = evaluate_exact(&sq, &pts).unwrap();
        let e = 2.0 * fw_rect(0.5, 1.0, Norm::L2).unwrap();
        assert!((o.value - e).abs() < 1e-13);
        assert!((o.per_cell[0].area - 0.5).abs() < 1e-15);
        assert!((e - 0.296_616_708_034_475).abs() < 1e-12);
    }

    #[test]
    fn rejects_duplicates_and_outside_sites() {
        let sq = unit_square();
        let p = Point2::new(0.3, 0.3);
        assert!(matches!(
            voronoi_clip(&sq, &[p, Point2::new(0.6, 0.1), p]),
            Err(Error::DuplicateSites { first: 0, second: 2 })
        ));
        assert!(matches!(
            voronoi_clip(&sq, &[Point2::new(2.0, 0.5)]),
            Err(Error::SiteOutside { index: 0, .. })
        ));
        // Boundary sites are accepted.
        assert!(evaluate_exact(&sq, &[Point2::new(0.0, 0.0), Point2::new(1.0, 0.5)]).is_ok());
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let sq = unit_square();
        let pts = [Point2::new(0.5, 0.5)];
        let mc = evaluate_mc(&sq, &pts, 200_000, 7).unwrap();
        let err = mc.stderr.unwrap();
        assert!((mc.value - 0.382_597_858).abs() < 4.0 * err, "{} ± {err}", mc.value);
        let again = evaluate_mc(&sq, &pts, 200_000, 7).unwrap();
        assert_eq!(mc.value, again.value);
    }

    #[test]
    fn one_median_of_square_is_its_center() {
        let (p, v) = solve_1median(&AxisRect::raw(1.0, 2.0, 1.0, 1.0).to_polygon(), 1e-12).unwrap();
        assert!(p.dist(Point2::new(1.5, 2.5)) < 1e-9);
        assert!((v - 0.382_597_858_232_106).abs() < 1e-12);
    }

    #[test]
    fn one_median_of_triangle_has_zero_gradient() {
        let tri = ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.5, 1.0)]).unwrap();
        let (p, v) = solve_1median(&tri, 1e-10).unwrap();
        assert!(fw_ring_gradient(tri.vertices(), p).norm() <= 1e-10 * tri.area());
        for d in [Point2::new(1e-3, 0.0), Point2::new(0.0, 1e-3), Point2::new(-1e-3, 1e-3)] {
            assert!(fw_ring_at(tri.vertices(), p + d) >= v);
        }
    }
}
