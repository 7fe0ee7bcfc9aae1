//! Shortest paths with increasing chords inside simple polygons.
//!
//! The pipeline builds the dead regions of both endpoints, removes them from
//! the polygon, takes the geodesic of what remains, and certifies the result
//! with a sampling verifier.

pub mod curve;
pub mod dead_region;
pub mod error;
pub mod fixtures;
pub mod geodesic;
pub mod geom;
pub mod ic;
pub mod io;
pub mod oracle;
pub mod path;
pub mod svg;
pub mod triangulate;
pub mod verify;

pub use error::{Error, GeomError, Result};
pub use geom::{HalfPlane, Location, Point, Side, SimplePolygon};
pub use path::{CurvePiece, NormalFan, PiecewisePath};
pub use verify::{VerifyConfig, VerifyReport};
