//! Partition-based approximation of the continuous k-medians problem
//! (multi-source Fermat–Weber) on a convex polygon.
//!
//! The pipeline aligns the polygon's diameter with the x-axis, splits the
//! bounding box into `k` equal-area rectangles (squarified strips or a pair
//! of uniform grids), and places one median per rectangle. Closed-form
//! Fermat–Weber integrals give exact objective values, and the lower/upper
//! bounding functions in [`bounds`] certify the approximation ratio.
//!
//! ```
//! use fwmedian::{geom::ConvexPolygon, geom::Point2, pipeline};
//!
//! let square = ConvexPolygon::new(vec![
//!     Point2::new(0.0, 0.0),
//!     Point2::new(2.0, 0.0),
//!     Point2::new(2.0, 1.0),
//!     Point2::new(0.0, 1.0),
//! ])
//! .unwrap();
//! let solved = pipeline::solve(&square, 4, &pipeline::SolveOptions::default()).unwrap();
//! assert_eq!(solved.world_points().len(), 4);
//! ```

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod fw;
pub mod geom;
pub mod io;
pub mod numeric;
pub mod objective;
pub mod partition;
pub mod pipeline;
pub mod placement;
pub mod random;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{AxisRect, ConvexPolygon, OrientedBox, Point2};
