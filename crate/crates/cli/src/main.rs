use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fwmedian::bounds::{cases::case_table_check, BoundsReport};
use fwmedian::experiment::{run_experiment, write_csv, ExperimentSpec, PolygonSource};
use fwmedian::geom::{diameter_aligned_box, AxisRect, ConvexPolygon, Point2};
use fwmedian::io::{load_points, load_polygon, points_to_json};
use fwmedian::objective::{evaluate_exact, evaluate_mc, voronoi_clip};
use fwmedian::partition::{select_best_config, subdivide_configs};
use fwmedian::pipeline::{normalize, solve, Algorithm, SolveOptions, Solved};
use fwmedian::placement::PlacementStrategy;
use fwmedian::random::random_convex_polygon;
use fwmedian::svg::{render_config_panels, render_svg, Scene};

#[derive(Parser)]
#[command(name = "fwmedian", version, about = "Approximate continuous k-medians in a convex polygon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition the diameter-aligned bounding box into k equal-area cells.
    Partition {
        #[command(flatten)]
        input: PolygonInput,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Alg::Construct)]
        alg: Alg,
        /// Print every grid configuration the subdivide algorithm considers.
        #[arg(long)]
        dump_configs: bool,
        /// With --dump-configs: use a `W,H` box instead of a polygon.
        #[arg(long = "box", value_delimiter = ',', requires = "dump_configs")]
        box_dims: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Place k medians and report the objective and bounds.
    Solve {
        #[command(flatten)]
        input: PolygonInput,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the k-medians objective for given points.
    Evaluate {
        #[command(flatten)]
        input: PolygonInput,
        /// JSON file with `[[x, y], ...]` or `{"points": [...]}`.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = EvalMethod::Exact)]
        method: EvalMethod,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Lower/upper bounds for an instance, or the re-derived case table.
    Bounds {
        #[command(flatten)]
        input: PolygonInput,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Alg::Construct)]
        alg: Alg,
        /// Recompute the worst-case ratio for every partition case.
        #[arg(long)]
        cases: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run a factorial experiment and emit one row per design cell.
    Experiment {
        /// Polygon files (convex hulls are taken).
        files: Vec<PathBuf>,
        /// Number of random polygons when no files are given.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 32)]
        vertices: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,5,10,25,50,100")]
        k: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "construct,subdivide")]
        alg: Vec<Alg>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "random,modified")]
        placement: Vec<Placement>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Draw the polygon, partition and medians as SVG.
    Render {
        #[command(flatten)]
        input: PolygonInput,
        #[command(flatten)]
        run: RunArgs,
        /// Overlay the Voronoi cells of the medians.
        #[arg(long)]
        voronoi: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PolygonInput {
    /// Polygon file: WKT, JSON vertex array, or GeoJSON.
    polygon: Option<PathBuf>,
    /// Use the convex hull of the input vertices.
    #[arg(long)]
    hull: bool,
    /// Generate a random convex polygon with this many vertices instead.
    #[arg(long, conflicts_with = "polygon")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    polygon_seed: u64,
}

impl PolygonInput {
    fn load(&self) -> anyhow::Result<ConvexPolygon> {
        match (&self.polygon, self.random) {
            (Some(path), _) => load_polygon(path, self.hull).with_context(|| format!("reading {}", path.display())),
            (None, Some(n)) => Ok(random_convex_polygon(n, self.polygon_seed)?),
            (None, None) => Err(fwmedian::Error::Domain("a polygon file or --random N is required".into()).into()),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Alg::Construct)]
    alg: Alg,
    #[arg(long, value_enum, default_value_t = Placement::Random)]
    placement: Placement,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            algorithm: self.alg.into(),
            placement: self.placement.into(),
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    stdout.write_all(b"\n")?;
                }
                Ok(())
            }
        }
    }

    fn unsupported(&self, command: &str) -> anyhow::Error {
        fwmedian::Error::Domain(format!("{command} does not support --format {:?}", self.format).to_lowercase()).into()
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Wkt,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Alg {
    #[value(alias = "squarified")]
    Construct,
    #[value(alias = "grid")]
    Subdivide,
}

impl From<Alg> for Algorithm {
    fn from(a: Alg) -> Self {
        match a {
            Alg::Construct => Algorithm::Construct,
            Alg::Subdivide => Algorithm::Subdivide,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Placement {
    Random,
    Modified,
}

impl From<Placement> for PlacementStrategy {
    fn from(p: Placement) -> Self {
        match p {
            Placement::Random => PlacementStrategy::Random,
            Placement::Modified => PlacementStrategy::Modified,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EvalMethod {
    Exact,
    Mc,
}

fn pretty(v: &serde_json::Value) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn quad_wkt(c: &[Point2; 4]) -> String {
    let ring: Vec<String> = c.iter().chain(&c[..1]).map(|p| format!("{} {}", p.x, p.y)).collect();
    format!("({})", ring.join(", "))
}

fn cmd_partition(input: &PolygonInput, k: usize, alg: Alg, dump: bool, box_dims: Option<&[f64]>, out: &Output) -> anyhow::Result<()> {
    if dump {
        let bounds = match box_dims {
            Some(&[w, h]) => AxisRect::new(0.0, 0.0, w, h)?,
            Some(_) => bail!(fwmedian::Error::Domain("--box expects W,H".into())),
            None => {
                let (frame, scale, _) = normalize(&input.load()?);
                AxisRect::new(0.0, 0.0, frame.w / scale, 1.0)?
            }
        };
        let configs = subdivide_configs(&bounds, k)?;
        let best = select_best_config(&configs)?;
        let selected = configs.iter().position(|c| *c == best);
        return match out.format {
            Format::Json => out.emit(&pretty(&json!({ "bounds": bounds, "configs": configs, "selected": selected }))?),
            Format::Svg => out.emit(&render_config_panels(&bounds, &configs, selected)),
            _ => Err(out.unsupported("partition --dump-configs")),
        };
    }
    let poly = input.load()?;
    let solved = solve(
        &poly,
        k,
        &SolveOptions {
            algorithm: alg.into(),
            ..Default::default()
        },
    )?;
    let cells = solved.world_cells();
    match out.format {
        Format::Json => out.emit(&pretty(&json!({
            "k": k,
            "algorithm": Algorithm::from(alg),
            "max_aspect_ratio": solved.partition().max_aspect_ratio(),
            "cells": cells.iter().map(|c| c.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "partition": solved.partition(),
        }))?),
        Format::Wkt => {
            let parts: Vec<String> = cells.iter().map(|c| format!("({})", quad_wkt(c))).collect();
            out.emit(&format!("MULTIPOLYGON ({})", parts.join(", ")))
        }
        Format::Csv => {
            let mut s = String::from("cell,x0,y0,x1,y1,x2,y2,x3,y3\n");
            for (i, c) in cells.iter().enumerate() {
                let xs: Vec<String> = c.iter().flat_map(|p| [p.x.to_string(), p.y.to_string()]).collect();
                s.push_str(&format!("{i},{}\n", xs.join(",")));
            }
            out.emit(&s)
        }
        Format::Svg => {
            let mut scene = Scene::from_solved(&solved, &poly);
            scene.points.clear();
            out.emit(&render_svg(&scene))
        }
    }
}

fn solve_summary(solved: &Solved, poly: &ConvexPolygon) -> anyhow::Result<serde_json::Value> {
    let objective = solved.evaluate()?;
    let (frame, _) = diameter_aligned_box(poly);
    let report = BoundsReport::new(poly.area(), solved.k(), frame.w, frame.h, solved.partition().max_aspect_ratio())?;
    Ok(json!({
        "k": solved.k(),
        "points": points_to_json(&solved.world_points()),
        "provenance": solved.provenance(),
        "orphans": solved.solution.orphans,
        "objective": objective.value,
        "lower_bound": report.lb,
        "upper_bound": report.ub,
        "ratio": objective.value / report.lb,
        "max_aspect_ratio": report.beta,
    }))
}

fn cmd_solve(input: &PolygonInput, run: &RunArgs, out: &Output) -> anyhow::Result<()> {
    let poly = input.load()?;
    let solved = solve(&poly, run.k, &run.options())?;
    match out.format {
        Format::Json => out.emit(&pretty(&solve_summary(&solved, &poly)?)?),
        Format::Csv => {
            let mut s = String::from("x,y,provenance\n");
            for (p, prov) in solved.world_points().iter().zip(solved.provenance()) {
                s.push_str(&format!("{},{},{}\n", p.x, p.y, serde_json::to_value(prov)?.as_str().unwrap_or("")));
            }
            out.emit(&s)
        }
        Format::Wkt => {
            let pts: Vec<String> = solved.world_points().iter().map(|p| format!("({} {})", p.x, p.y)).collect();
            out.emit(&format!("MULTIPOINT ({})", pts.join(", ")))
        }
        Format::Svg => out.emit(&render_svg(&Scene::from_solved(&solved, &poly))),
    }
}

fn cmd_evaluate(input: &PolygonInput, points: &Path, method: EvalMethod, samples: usize, seed: u64, out: &Output) -> anyhow::Result<()> {
    let poly = input.load()?;
    let pts = load_points(points).with_context(|| format!("reading {}", points.display()))?;
    let objective = match method {
        EvalMethod::Exact => evaluate_exact(&poly, &pts)?,
        EvalMethod::Mc => evaluate_mc(&poly, &pts, samples, seed)?,
    };
    match out.format {
        Format::Json => out.emit(&pretty(&serde_json::to_value(&objective)?)?),
        Format::Csv => {
            let mut s = String::from("x,y,area,fw\n");
            for c in &objective.per_cell {
                s.push_str(&format!("{},{},{},{}\n", c.site.x, c.site.y, c.area, c.fw));
            }
            out.emit(&s)
        }
        _ => Err(out.unsupported("evaluate")),
    }
}

fn cmd_bounds(input: &PolygonInput, k: Option<usize>, alg: Alg, cases: bool, out: &Output) -> anyhow::Result<()> {
    if cases {
        let rows = case_table_check();
        return match out.format {
            Format::Json => out.emit(&pretty(&serde_json::to_value(&rows)?)?),
            Format::Csv => {
                let mut s = String::from("case,condition,rho_max,reference\n");
                for r in &rows {
                    s.push_str(&format!("{},\"{}\",{:.4},{:.4}\n", r.label, r.condition, r.rho_max, r.reference));
                }
                out.emit(&s)
            }
            _ => Err(out.unsupported("bounds --cases")),
        };
    }
    let Some(k) = k else {
        bail!(fwmedian::Error::Domain("--k is required unless --cases is given".into()))
    };
    let poly = input.load()?;
    let solved = solve(
        &poly,
        k,
        &SolveOptions {
            algorithm: alg.into(),
            ..Default::default()
        },
    )?;
    let (frame, _) = diameter_aligned_box(&poly);
    let report = BoundsReport::new(poly.area(), k, frame.w, frame.h, solved.partition().max_aspect_ratio())?;
    match out.format {
        Format::Json => out.emit(&pretty(&serde_json::to_value(&report)?)?),
        Format::Csv => out.emit(&format!(
            "area,k,w,h,z,alpha,beta,lb,ub,alpha_c,rho\n{},{},{},{},{},{},{},{},{},{},{}\n",
            report.area,
            report.k,
            report.w,
            report.h,
            report.z,
            report.alpha,
            report.beta,
            report.lb,
            report.ub,
            report.alpha_c,
            report.rho
        )),
        _ => Err(out.unsupported("bounds")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    files: &[PathBuf],
    count: usize,
    vertices: usize,
    k: &[usize],
    alg: &[Alg],
    placement: &[Placement],
    repetitions: usize,
    seed: u64,
    out: &Output,
) -> anyhow::Result<()> {
    let polygons = if files.is_empty() {
        PolygonSource::Random {
            count,
            n_vertices: vertices,
            seed,
        }
    } else {
        PolygonSource::Files(files.to_vec())
    };
    let spec = ExperimentSpec {
        polygons,
        k_values: k.to_vec(),
        algorithms: alg.iter().map(|&a| a.into()).collect(),
        placements: placement.iter().map(|&p| p.into()).collect(),
        repetitions,
        seed,
    };
    let result = run_experiment(&spec)?;
    for e in &result.errors {
        eprintln!("warning: {}: {}", e.polygon, e.message);
    }
    match out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&result.rows, &mut buf)?;
            out.emit(&String::from_utf8(buf)?)
        }
        Format::Json => out.emit(&pretty(&serde_json::to_value(&result)?)?),
        _ => Err(out.unsupported("experiment")),
    }
}

fn cmd_render(input: &PolygonInput, run: &RunArgs, voronoi: bool, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let poly = input.load()?;
    let solved = solve(&poly, run.k, &run.options())?;
    let mut scene = Scene::from_solved(&solved, &poly);
    if voronoi {
        scene = scene.with_voronoi(&voronoi_clip(&poly, &solved.world_points())?);
    }
    let output = Output {
        format: Format::Svg,
        out: out.clone(),
    };
    output.emit(&render_svg(&scene))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Partition {
            input,
            k,
            alg,
            dump_configs,
            box_dims,
            output,
        } => cmd_partition(input, *k, *alg, *dump_configs, box_dims.as_deref(), output),
        Command::Solve { input, run, output } => cmd_solve(input, run, output),
        Command::Evaluate {
            input,
            points,
            method,
            samples,
            seed,
            output,
        } => cmd_evaluate(input, points, *method, *samples, *seed, output),
        Command::Bounds {
            input,
            k,
            alg,
            cases,
            output,
        } => cmd_bounds(input, *k, *alg, *cases, output),
        Command::Experiment {
            files,
            count,
            vertices,
            k,
            alg,
            placement,
            repetitions,
            seed,
            output,
        } => cmd_experiment(files, *count, *vertices, k, alg, placement, *repetitions, *seed, output),
        Command::Render { input, run, voronoi, out } => cmd_render(input, run, *voronoi, out),
    }
}

/// 2 for bad input, 3 when a numerical routine fails to converge.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<fwmedian::Error>()) {
        Some(e) if e.is_numeric() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
