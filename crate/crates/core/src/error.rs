use thiserror::Error;

use crate::geom::Point;
use crate::verify::VerifyReport;

/// Polygon validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("polygon is not simple: {0}")]
    NotSimple(String),
    #[error("polygon is degenerate: {0}")]
    Degenerate(String),
    #[error("non-finite coordinate {0}")]
    NonFinite(Point),
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),

    // path model
    #[error("arc-length parameter {0} outside [0, {1}]")]
    OutOfRange(f64, f64),
    #[error("paths do not share the joining endpoint: {0} vs {1}")]
    EndpointMismatch(Point, Point),
    #[error("selected normal line is parallel to the travel direction")]
    TangentInLine,
    #[error("invalid curve piece: {0}")]
    InvalidPiece(String),

    // verifier
    #[error("path endpoints coincide")]
    DegenerateEndpoints,
    #[error("region between paths is degenerate: {0}")]
    RegionDegenerate(String),

    // dead regions
    #[error("anchor {0} is not strictly inside the polygon")]
    AnchorOutside(Point),
    #[error("curve tracing stalled near {0}")]
    StallDetected(Point),
    #[error("string exhausted while unwinding")]
    StringExhausted,
    #[error("dead-region construction did not close: {0}")]
    ToleranceUnachievable(String),

    // geodesics
    #[error("point {0} lies outside the polygon")]
    PointOutside(Point),
    #[error("endpoints lie in different components of the domain")]
    DisconnectedEndpoints,
    #[error("point {0} lies inside a dead region")]
    PointInDeadRegion(Point),
    #[error("domain is empty after subtracting regions")]
    EmptyDomain,
    #[error("triangulation failed: {0}")]
    Triangulation(String),

    // top level
    #[error("constructed path failed verification ({})", failing_names(.0))]
    VerificationFailed(Vec<VerifyReport>),

    // oracle
    #[error("instance is not a single-reflex instance: {0}")]
    NotSingleReflexInstance(String),
}

fn failing_names(reports: &[VerifyReport]) -> String {
    reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.property.name())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
