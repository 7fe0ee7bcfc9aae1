//! Shortest increasing-chords paths: remove both dead regions, take the
//! geodesic of what is left, and certify it.

use serde::{Deserialize, Serialize};

use crate::dead_region::{build_dead_region, regions_contain, subtract_regions, DeadRegion};
use crate::error::{Error, Result};
use crate::geodesic::shortest_path_domain;
use crate::geom::{Location, Point, SimplePolygon};
use crate::path::PiecewisePath;
use crate::verify::{verify_all, VerifyConfig, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Path,
    InfeasibleSDead,
    InfeasibleTDead,
    InfeasibleDisconnected,
}

impl Status {
    pub fn is_feasible(self) -> bool {
        self == Status::Path
    }
}

/// Construction tolerance and flattening error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub delta: f64,
}

impl Tolerances {
    pub const REL: f64 = 1e-7;

    pub fn for_polygon(poly: &SimplePolygon) -> Self {
        let t = Self::REL * poly.diameter();
        Tolerances { tol: t, delta: t }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Regions {
    /// Regions of `s`: points from which `s` cannot be reached.
    pub s: Vec<DeadRegion>,
    /// Regions of `t`.
    pub t: Vec<DeadRegion>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IcResult {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<PiecewisePath>,
    pub regions: Regions,
    pub reports: Vec<VerifyReport>,
    pub tolerances: Tolerances,
    /// The blocking endpoint lies within the tolerance band of a region.
    #[serde(default)]
    pub boundary: bool,
}

/// Why a pair is infeasible: the region holding the endpoint, or `None`
/// when the domain is disconnected.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub point: Point,
    pub anchor: Point,
    pub window: Option<Point>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Feasibility {
    pub status: Status,
    pub boundary: bool,
    pub witnesses: Vec<Witness>,
    pub regions: Regions,
}

fn check_endpoints(poly: &SimplePolygon, s: Point, t: Point) -> Result<()> {
    if s == t {
        return Err(Error::DegenerateEndpoints);
    }
    for p in [s, t] {
        if poly.contains(p) != Location::Inside {
            return Err(Error::PointOutside(p));
        }
    }
    Ok(())
}

fn both_regions(poly: &SimplePolygon, s: Point, t: Point, tol: f64) -> Result<Regions> {
    let (ds, dt) = rayon::join(
        || build_dead_region(poly, s, tol),
        || build_dead_region(poly, t, tol),
    );
    Ok(Regions { s: ds?, t: dt? })
}

fn blocker(regions: &[DeadRegion], p: Point) -> Option<(bool, Witness)> {
    match regions_contain(regions, p) {
        Location::Outside => None,
        loc => {
            let r = regions
                .iter()
                .find(|r| crate::dead_region::region_contains(r, p) != Location::Outside)?;
            Some((
                loc == Location::Boundary,
                Witness {
                    point: p,
                    anchor: r.anchor,
                    window: Some(r.window),
                },
            ))
        }
    }
}

fn classify(regions: &Regions, s: Point, t: Point) -> Option<(Status, bool, Witness)> {
    if let Some((b, w)) = blocker(&regions.t, s) {
        return Some((Status::InfeasibleSDead, b, w));
    }
    if let Some((b, w)) = blocker(&regions.s, t) {
        return Some((Status::InfeasibleTDead, b, w));
    }
    None
}

/// Which blocker applies, without computing the path.
pub fn feasibility(
    poly: &SimplePolygon,
    s: Point,
    t: Point,
    tol: Tolerances,
) -> Result<Feasibility> {
    check_endpoints(poly, s, t)?;
    let regions = both_regions(poly, s, t, tol.tol)?;
    if let Some((status, boundary, w)) = classify(&regions, s, t) {
        return Ok(Feasibility {
            status,
            boundary,
            witnesses: vec![w],
            regions,
        });
    }
    let all: Vec<DeadRegion> = regions.s.iter().chain(&regions.t).cloned().collect();
    let domain = subtract_regions(poly, &all, tol.delta)?;
    let (cs, ct) = (domain.component_of(s), domain.component_of(t));
    let status = if cs.is_some() && cs == ct {
        Status::Path
    } else {
        Status::InfeasibleDisconnected
    };
    Ok(Feasibility {
        status,
        boundary: false,
        witnesses: Vec::new(),
        regions,
    })
}

/// Shortest path with increasing chords from `s` to `t`, verified.
pub fn shortest_increasing_chords_path(
    poly: &SimplePolygon,
    s: Point,
    t: Point,
    tol: Tolerances,
) -> Result<IcResult> {
    shortest_increasing_chords_path_with(poly, s, t, tol, VerifyConfig::DEFAULT_N)
}

pub fn shortest_increasing_chords_path_with(
    poly: &SimplePolygon,
    s: Point,
    t: Point,
    tol: Tolerances,
    n: usize,
) -> Result<IcResult> {
    check_endpoints(poly, s, t)?;
    let regions = both_regions(poly, s, t, tol.tol)?;
    let infeasible = |status, boundary, regions| IcResult {
        status,
        path: None,
        regions,
        reports: Vec::new(),
        tolerances: tol,
        boundary,
    };
    if let Some((status, boundary, _)) = classify(&regions, s, t) {
        return Ok(infeasible(status, boundary, regions));
    }
    let all: Vec<DeadRegion> = regions.s.iter().chain(&regions.t).cloned().collect();
    let domain = subtract_regions(poly, &all, tol.delta)?;
    let path = match shortest_path_domain(&domain, s, t) {
        Ok(p) => p,
        Err(Error::DisconnectedEndpoints) => {
            return Ok(infeasible(Status::InfeasibleDisconnected, false, regions))
        }
        Err(e) => return Err(e),
    };
    let cfg = VerifyConfig {
        n,
        tol: verify_tol(poly, tol),
    };
    let reports = verify_all(&path, cfg)?;
    if reports.iter().any(|r| !r.pass) {
        return Err(Error::VerificationFailed(reports));
    }
    Ok(IcResult {
        status: Status::Path,
        path: Some(path),
        regions,
        reports,
        tolerances: tol,
        boundary: false,
    })
}

/// Verifier slack for constructed paths: construction and flattening
/// errors add up along the path.
pub fn verify_tol(poly: &SimplePolygon, tol: Tolerances) -> f64 {
    (VerifyConfig::REL_TOL * poly.diameter()).max(4.0 * (tol.tol + tol.delta))
}
