//! SVG rendering of polygons, partitions, medians and Voronoi cells.

use std::fmt::Write as _;

use crate::geom::{AxisRect, ConvexPolygon, Point2};
use crate::objective::VoronoiCell;
use crate::partition::{grid_partition, GridConfig, SplitFlag};
use crate::pipeline::Solved;
use crate::placement::Provenance;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 16.0;

/// Everything to draw, in one common frame.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub polygon: Option<ConvexPolygon>,
    /// Partition cells as corner quads.
    pub cells: Vec<[Point2; 4]>,
    pub points: Vec<(Point2, Provenance)>,
    pub voronoi: Vec<ConvexPolygon>,
}

impl Scene {
    /// The solved instance in world coordinates.
    pub fn from_solved(solved: &Solved, polygon: &ConvexPolygon) -> Self {
        Self {
            polygon: Some(polygon.clone()),
            cells: solved.world_cells(),
            points: solved.world_points().into_iter().zip(solved.provenance().iter().copied()).collect(),
            voronoi: Vec::new(),
        }
    }

    pub fn with_voronoi(mut self, cells: &[VoronoiCell]) -> Self {
        self.voronoi = cells.iter().filter_map(|c| c.cell.clone()).collect();
        self
    }

    fn extent(&self) -> Option<(Point2, Point2)> {
        let pts = self
            .polygon
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .chain(self.cells.iter().flatten().copied())
            .chain(self.points.iter().map(|p| p.0));
        let mut it = pts.peekable();
        it.peek()?;
        let (mut lo, mut hi) = (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in it {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        Some((lo, hi))
    }
}

fn color(p: Provenance) -> &'static str {
    match p {
        Provenance::Kept => "#1f77b4",
        Provenance::Relocated => "#2ca02c",
        Provenance::Random => "#d62728",
        Provenance::Reinserted => "#9467bd",
    }
}

struct View {
    lo: Point2,
    hi_y: f64,
    s: f64,
    dx: f64,
    dy: f64,
}

impl View {
    fn new(lo: Point2, hi: Point2, width: f64, dx: f64, dy: f64) -> (Self, f64) {
        let span_x = (hi.x - lo.x).max(f64::MIN_POSITIVE);
        let s = (width - 2.0 * MARGIN) / span_x.max(hi.y - lo.y);
        let height = (hi.y - lo.y) * s + 2.0 * MARGIN;
        (Self { lo, hi_y: hi.y, s, dx, dy }, height)
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (
            self.dx + MARGIN + (p.x - self.lo.x) * self.s,
            self.dy + MARGIN + (self.hi_y - p.y) * self.s,
        )
    }

    fn path(&self, pts: &[Point2]) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { 'M' } else { 'L' });
        }
        d.push('Z');
        d
    }
}

fn draw(out: &mut String, scene: &Scene, view: &View) {
    for quad in &scene.cells {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="none" stroke="#999" stroke-width="0.6"/>"##,
            view.path(quad)
        );
    }
    for cell in &scene.voronoi {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="none" stroke="#ff7f0e" stroke-width="0.8" stroke-dasharray="3 2"/>"##,
            view.path(cell.vertices())
        );
    }
    if let Some(poly) = &scene.polygon {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="none" stroke="#000" stroke-width="1.5"/>"##,
            view.path(poly.vertices())
        );
    }
    for &(p, prov) in &scene.points {
        let (x, y) = view.map(p);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{}"/>"#, color(prov));
    }
}

/// A standalone SVG document for `scene`. Point colors encode provenance.
pub fn render_svg(scene: &Scene) -> String {
    let (lo, hi) = scene.extent().unwrap_or((Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)));
    let (view, height) = View::new(lo, hi, WIDTH, 0.0, 0.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.3}">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    draw(&mut out, scene, &view);
    out.push_str("</svg>\n");
    out
}

/// All candidate grid configurations of `bounds`, one panel each, in a
/// three-column layout. The `selected` panel is outlined in red.
pub fn render_config_panels(bounds: &AxisRect, configs: &[GridConfig], selected: Option<usize>) -> String {
    let panel_w = 300.0;
    let cols = 3usize;
    let lo = Point2::new(bounds.x0, bounds.y0);
    let hi = Point2::new(bounds.x1(), bounds.y1());
    let (_, panel_h) = View::new(lo, hi, panel_w, 0.0, 0.0);
    let label_h = 18.0;
    let rows = configs.len().div_ceil(cols).max(1);
    let (total_w, total_h) = (panel_w * cols as f64, (panel_h + label_h) * rows as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h:.0}" viewBox="0 0 {total_w} {total_h:.3}">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, cfg) in configs.iter().enumerate() {
        let (dx, dy) = ((i % cols) as f64 * panel_w, (i / cols) as f64 * (panel_h + label_h));
        let (view, _) = View::new(lo, hi, panel_w, dx, dy + label_h);
        let cells = grid_partition(bounds, cfg).map(|p| p.cells).unwrap_or_default();
        let scene = Scene {
            cells: cells.iter().map(AxisRect::corners).collect(),
            ..Scene::default()
        };
        draw(&mut out, &scene, &view);
        let stroke = if Some(i) == selected { "#d62728" } else { "#000" };
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#,
            view.path(&bounds.corners())
        );
        let flag = match cfg.flag {
            SplitFlag::Vertical => "V",
            SplitFlag::Horizontal => "H",
        };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{flag} {}x{} + {}x{}  AR {:.4} / {:.4}</text>"#,
            dx + MARGIN,
            dy + 14.0,
            cfg.p1,
            cfg.q1,
            cfg.p2,
            cfg.q2,
            cfg.ar1,
            cfg.ar2
        );
    }
    out.push_str("</svg>\n");
    out
}
