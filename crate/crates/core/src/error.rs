use thiserror::Error;

use crate::geom::Point2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input points do not span a region with positive area.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("polygon is not convex (turn at vertex {vertex} has the wrong sign)")]
    NotConvex { vertex: usize },

    /// An argument is outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("duplicate sites at index {first} and {second}")]
    DuplicateSites { first: usize, second: usize },

    #[error("site {index} at ({x}, {y}) lies outside the polygon", x = .point.x, y = .point.y)]
    SiteOutside { index: usize, point: Point2 },

    #[error("no convergence after {iterations} iterations (best value {value}, gradient norm {gradient_norm})")]
    NonConvergence {
        iterations: usize,
        best: Point2,
        value: f64,
        gradient_norm: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of a numerical procedure rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
