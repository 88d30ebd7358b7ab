//! Factorial experiments over polygons, `k`, algorithms and placements.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::ConvexPolygon;
use crate::io::load_polygon;
use crate::pipeline::{solve, Algorithm, SolveOptions};
use crate::placement::PlacementStrategy;
use crate::random::random_convex_polygon;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolygonSource {
    /// Polygon files; non-convex rings are replaced by their convex hull.
    Files(Vec<PathBuf>),
    Random {
        count: usize,
        n_vertices: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub polygons: PolygonSource,
    pub k_values: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub placements: Vec<PlacementStrategy>,
    pub repetitions: usize,
    pub seed: u64,
}

/// One cell of the factorial design, averaged over repetitions (mean of
/// objectives, mean of ratios).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub polygon: String,
    pub k: usize,
    pub algorithm: Algorithm,
    pub placement: PlacementStrategy,
    pub objective: f64,
    pub lb: f64,
    pub ratio: f64,
    pub n_outside: usize,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ItemError {
    pub polygon: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub rows: Vec<ExperimentRow>,
    pub errors: Vec<ItemError>,
}

fn load_all(src: &PolygonSource) -> Vec<(String, Result<ConvexPolygon>)> {
    match src {
        PolygonSource::Files(paths) => paths.iter().map(|p| (p.display().to_string(), load_polygon(p, true))).collect(),
        PolygonSource::Random { count, n_vertices, seed } => (0..*count)
            .map(|i| {
                let s = seed.wrapping_add(i as u64);
                (format!("random-{i}"), random_convex_polygon(*n_vertices, s))
            })
            .collect(),
    }
}

fn run_cell(
    poly: &ConvexPolygon,
    k: usize,
    algorithm: Algorithm,
    placement: PlacementStrategy,
    reps: usize,
    seed: u64,
) -> Result<(f64, f64, f64, usize, f64)> {
    let (mut obj, mut ratio, mut ms) = (0.0, 0.0, 0.0);
    let (mut lb, mut outside) = (0.0, 0);
    for r in 0..reps {
        let opts = SolveOptions {
            algorithm,
            placement,
            seed: seed.wrapping_add(r as u64),
        };
        let t = Instant::now();
        let solved = solve(poly, k, &opts)?;
        ms += t.elapsed().as_secs_f64() * 1e3;
        let value = solved.evaluate()?.value;
        lb = solved.lower_bound();
        outside = solved.solution.orphans.len();
        obj += value;
        ratio += value / lb;
    }
    let n = reps as f64;
    Ok((obj / n, lb, ratio / n, outside, ms / n))
}

/// Runs the full design. Rows are ordered by (polygon, k, algorithm,
/// placement) regardless of scheduling; failures are collected per item.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    if spec.k_values.is_empty() || spec.k_values.contains(&0) {
        return Err(Error::domain("k values must be nonempty and positive"));
    }
    if spec.repetitions == 0 {
        return Err(Error::domain("repetitions must be at least 1"));
    }
    let polys = load_all(&spec.polygons);
    let mut out = ExperimentOutput::default();
    let mut jobs = Vec::new();
    for (pi, (name, poly)) in polys.iter().enumerate() {
        match poly {
            Err(e) => out.errors.push(ItemError {
                polygon: name.clone(),
                message: e.to_string(),
            }),
            Ok(_) => {
                for &k in &spec.k_values {
                    for &a in &spec.algorithms {
                        for &p in &spec.placements {
                            jobs.push((pi, k, a, p));
                        }
                    }
                }
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(pi, k, a, p)| {
            let poly = polys[pi].1.as_ref().expect("filtered above");
            (pi, k, a, p, run_cell(poly, k, a, p, spec.repetitions, spec.seed))
        })
        .collect();
    for (pi, k, algorithm, placement, r) in results {
        let name = polys[pi].0.clone();
        match r {
            Ok((objective, lb, ratio, n_outside, runtime_ms)) => out.rows.push(ExperimentRow {
                polygon: name,
                k,
                algorithm,
                placement,
                objective,
                lb,
                ratio,
                n_outside,
                runtime_ms,
            }),
            Err(e) => out.errors.push(ItemError {
                polygon: format!("{name} (k = {k})"),
                message: e.to_string(),
            }),
        }
    }
    Ok(out)
}

/// Writes rows as CSV with a header.
pub fn write_csv<W: std::io::Write>(rows: &[ExperimentRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(polygons: PolygonSource) -> ExperimentSpec {
        ExperimentSpec {
            polygons,
            k_values: vec![3, 7],
            algorithms: vec![Algorithm::Construct, Algorithm::Subdivide],
            placements: vec![PlacementStrategy::Random, PlacementStrategy::Modified],
            repetitions: 2,
            seed: 11,
        }
    }

    #[test]
    fn factorial_order_and_ratios() {
        let out = run_experiment(&spec(PolygonSource::Random {
            count: 2,
            n_vertices: 12,
            seed: 1,
        }))
        .unwrap();
        assert_eq!(out.rows.len(), 2 * 2 * 2 * 2);
        assert!(out.errors.is_empty());
        assert_eq!(out.rows[0].k, 3);
        assert_eq!(out.rows[4].k, 7);
        for r in &out.rows {
            assert!(r.ratio >= 1.0 - 1e-9 && r.ratio <= 2.002 + 1e-6, "{r:?}");
        }
    }

    #[test]
    fn unreadable_files_are_reported() {
        let out = run_experiment(&spec(PolygonSource::Files(vec![PathBuf::from("/nonexistent/poly.json")]))).unwrap();
        assert!(out.rows.is_empty());
        assert_eq!(out.errors.len(), 1);
    }

    #[test]
    fn csv_has_header() {
        let row = ExperimentRow {
            polygon: "p".into(),
            k: 3,
            algorithm: Algorithm::Construct,
            placement: PlacementStrategy::Random,
            objective: 1.0,
            lb: 0.9,
            ratio: 1.1,
            n_outside: 0,
            runtime_ms: 0.5,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("polygon,k,algorithm,placement,objective,lb,ratio,n_outside,runtime_ms\n"));
        assert!(text.contains("p,3,construct,random,"));
    }
}
