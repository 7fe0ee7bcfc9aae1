//! Sampling verifier for increasing chords, self-approach, the normal and
//! half-plane restatements, and the 2π/3 length bound.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::path::{half_planes, CurvePiece, LineSelector, PiecewisePath};

/// Interior wedge lines examined at each bend in addition to the extremes.
pub const WEDGE_LINES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    IncreasingChords,
    SelfApproachingFwd,
    SelfApproachingBwd,
    NormalProperty,
    HalfPlane,
    LengthBound,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::IncreasingChords => "increasing_chords",
            Property::SelfApproachingFwd => "self_approaching_fwd",
            Property::SelfApproachingBwd => "self_approaching_bwd",
            Property::NormalProperty => "normal_property",
            Property::HalfPlane => "half_plane",
            Property::LengthBound => "length_bound",
        }
    }
}

/// Outcome of one property check. `witness` holds arc-length parameters of a
/// violating configuration and is present exactly when the check fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub property: Property,
    pub pass: bool,
    pub worst_margin: f64,
    pub witness: Option<Vec<f64>>,
    pub samples_used: usize,
    pub tolerance: f64,
}

impl VerifyReport {
    fn new(
        property: Property,
        margin: f64,
        witness: impl Into<Vec<f64>>,
        samples: usize,
        tol: f64,
    ) -> Self {
        let pass = margin >= -tol;
        VerifyReport {
            property,
            pass,
            worst_margin: margin,
            witness: if pass { None } else { Some(witness.into()) },
            samples_used: samples,
            tolerance: tol,
        }
    }
}

/// Sample count and tolerance for a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub tol: f64,
}

impl VerifyConfig {
    pub const DEFAULT_N: usize = 20_000;
    pub const REL_TOL: f64 = 1e-7;

    pub fn for_diameter(diameter: f64) -> Self {
        VerifyConfig {
            n: Self::DEFAULT_N,
            tol: Self::REL_TOL * diameter,
        }
    }
}

/// Radical inverse of `i` in base `b`.
#[inline(always)]
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// Arc-length samples: endpoints, joints, eighth points of every piece and a
/// van der Corput prefix of length `count`, closed under `s -> L - s`.
/// Prefixes are nested, so larger counts give supersets.
pub fn sample_params(path: &PiecewisePath, count: usize) -> Vec<f64> {
    let l = path.length();
    let mut v = vec![0.0, l];
    for (i, p) in path.pieces().iter().enumerate() {
        let off = path.offsets()[i];
        for k in 0..8 {
            v.push(off + p.length() * k as f64 / 8.0);
        }
    }
    for j in 1..=count as u64 {
        v.push(l * radical_inverse(j, 2));
    }
    let mirrored: Vec<f64> = v.iter().map(|s| l - s).collect();
    v.extend(mirrored);
    for s in v.iter_mut() {
        *s = s.clamp(0.0, l);
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn min_by_margin<W: PartialOrd>(a: (f64, W), b: (f64, W)) -> (f64, W) {
    // ties resolved by the lexicographically smaller witness for determinism
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1.partial_cmp(&b.1) == Some(std::cmp::Ordering::Greater) {
                b
            } else {
                a
            }
        }
    }
}

/// A single segment satisfies every property with margin exactly zero.
fn is_straight(path: &PiecewisePath) -> bool {
    matches!(path.pieces(), [CurvePiece::Segment { .. }])
}

fn exact(property: Property, tol: f64) -> VerifyReport {
    VerifyReport::new(property, 0.0, Vec::new(), 0, tol)
}

/// Worst `|ad| - |bc|` over sampled `a ≤ b ≤ c ≤ d`: all degenerate triples
/// over a dense grid and `n` low-discrepancy quadruples.
pub fn check_increasing_chords(path: &PiecewisePath, n: usize, tol: f64) -> VerifyReport {
    if is_straight(path) {
        return exact(Property::IncreasingChords, tol);
    }
    let l = path.length();
    let grid = sample_params(path, (n / 40).max(4));
    let pts: Vec<Point> = grid.iter().map(|&s| path.point_at_unchecked(s)).collect();
    let m = pts.len();

    // triples a < b < c = d (forward) and a = b < c < d (backward)
    let tri = (0..m)
        .into_par_iter()
        .map(|c| {
            let mut best = (0.0, [0.0; 4]);
            let mut pre = (f64::INFINITY, 0usize);
            for b in 0..c {
                let db = pts[b].dist(pts[c]);
                if pre.0 < f64::INFINITY {
                    let margin = pre.0 - db;
                    if margin < best.0 {
                        best = (margin, [grid[pre.1], grid[b], grid[c], grid[c]]);
                    }
                }
                if db < pre.0 {
                    pre = (db, b);
                }
            }
            let mut suf = (f64::INFINITY, 0usize);
            for d in (c + 1..m).rev() {
                let dd = pts[c].dist(pts[d]);
                if suf.0 < f64::INFINITY {
                    let margin = suf.0 - dd;
                    if margin < best.0 {
                        best = (margin, [grid[c], grid[c], grid[d], grid[suf.1]]);
                    }
                }
                if dd < suf.0 {
                    suf = (dd, d);
                }
            }
            best
        })
        .reduce(|| (0.0, [0.0; 4]), min_by_margin);

    let quads = (1..=n as u64)
        .into_par_iter()
        .map(|i| {
            let mut q = [
                radical_inverse(i, 2),
                radical_inverse(i, 3),
                radical_inverse(i, 5),
                radical_inverse(i, 7),
            ];
            q.sort_by(f64::total_cmp);
            let mut best = (0.0, [0.0; 4]);
            // each quadruple and its mirror image
            for s in [q.map(|u| u * l), q.map(|u| l - u * l)] {
                let mut s = s;
                s.sort_by(f64::total_cmp);
                let p: Vec<Point> = s.iter().map(|&x| path.point_at_unchecked(x)).collect();
                let margin = p[0].dist(p[3]) - p[1].dist(p[2]);
                best = min_by_margin(best, (margin, s));
            }
            best
        })
        .reduce(|| (0.0, [0.0; 4]), min_by_margin);

    let (margin, witness) = min_by_margin(tri, quads);
    VerifyReport::new(Property::IncreasingChords, margin, witness, m + 2 * n, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Worst forward margin at arc length `s`: min over later points `z` and
/// wedge tangents `d` of `(z - p)·d`, with the witness parameter of `z`.
fn forward_margin(path: &PiecewisePath, s: f64) -> (f64, f64) {
    let fan = match path.normal_at(s) {
        Ok(f) => f,
        Err(_) => return (0.0, s),
    };
    let p = fan.at;
    let (i0, local) = path.locate(s);
    let mut best = (0.0, s);
    for d in fan.sample_tangents(WEDGE_LINES) {
        let base = p.dot(d);
        for (i, piece) in path.pieces().iter().enumerate().skip(i0) {
            let s0 = if i == i0 { local } else { 0.0 };
            let (v, at) = piece.min_dot(d, s0, piece.length());
            let margin = v - base;
            if margin < best.0 {
                best = (margin, path.offsets()[i] + at);
            }
        }
    }
    best
}

fn directional(path: &PiecewisePath, params: &[f64]) -> (f64, [f64; 2]) {
    params
        .par_iter()
        .map(|&s| {
            let (m, z) = forward_margin(path, s);
            (m, [s, z])
        })
        .reduce(|| (0.0, [0.0, 0.0]), min_by_margin)
}

fn sa_params(path: &PiecewisePath, n: usize) -> Vec<f64> {
    sample_params(path, n)
}

/// Checks that normal lines never cross the remaining path in the given
/// direction; touching within `tol` is allowed. Witness parameters are given
/// on the input path.
pub fn check_self_approaching(
    path: &PiecewisePath,
    direction: Direction,
    n: usize,
    tol: f64,
) -> VerifyReport {
    if is_straight(path) {
        return exact(
            match direction {
                Direction::Forward => Property::SelfApproachingFwd,
                Direction::Backward => Property::SelfApproachingBwd,
            },
            tol,
        );
    }
    let params = sa_params(path, n);
    let l = path.length();
    let (margin, witness, prop) = match direction {
        Direction::Forward => {
            let (m, w) = directional(path, &params);
            (m, w, Property::SelfApproachingFwd)
        }
        Direction::Backward => {
            let rev = path.reverse();
            let (m, w) = directional(&rev, &params);
            (m, w.map(|x| l - x), Property::SelfApproachingBwd)
        }
    };
    VerifyReport::new(prop, margin, witness, params.len(), tol)
}

/// Both directional checks in one sweep.
pub fn check_normal_property_ic(path: &PiecewisePath, n: usize, tol: f64) -> VerifyReport {
    if is_straight(path) {
        return exact(Property::NormalProperty, tol);
    }
    let params = sa_params(path, n);
    let l = path.length();
    let rev = path.reverse();
    let (fm, fw) = directional(path, &params);
    let (bm, bw) = directional(&rev, &params);
    let bw = bw.map(|x| l - x);
    let (margin, witness) = min_by_margin((fm, fw), (bm, bw));
    VerifyReport::new(
        Property::NormalProperty,
        margin,
        witness,
        2 * params.len(),
        tol,
    )
}

/// Half-plane restatement: at every sampled point and wedge line, the earlier
/// path lies in the negative closed half-plane and the later path in the
/// positive one.
pub fn check_half_plane(path: &PiecewisePath, n: usize, tol: f64) -> VerifyReport {
    if is_straight(path) {
        return exact(Property::HalfPlane, tol);
    }
    let params = sa_params(path, n);
    let rev = path.reverse();
    let l = path.length();
    let (margin, witness) = params
        .par_iter()
        .map(|&s| half_plane_margin(path, &rev, s, l))
        .reduce(|| (0.0, [0.0, 0.0]), min_by_margin);
    VerifyReport::new(Property::HalfPlane, margin, witness, params.len(), tol)
}

fn half_plane_margin(path: &PiecewisePath, rev: &PiecewisePath, s: f64, l: f64) -> (f64, [f64; 2]) {
    let mut best = (0.0, [s, s]);
    let fan = match path.normal_at(s) {
        Ok(f) => f,
        Err(_) => return best,
    };
    let k = if fan.is_bend() { WEDGE_LINES + 2 } else { 1 };
    let (i0, local) = path.locate(s);
    let (r0, rlocal) = rev.locate(l - s);
    for j in 0..k {
        let sel = match j {
            0 if k == 1 => LineSelector::Outgoing,
            0 => LineSelector::Incoming,
            1 => LineSelector::Outgoing,
            _ => LineSelector::Interior((j - 1) as f64 / (WEDGE_LINES + 1) as f64),
        };
        let (neg, pos) = match half_planes(&fan, sel) {
            Ok(h) => h,
            Err(_) => {
                return (f64::NEG_INFINITY, [s, s]);
            }
        };
        // later path in h⁺: min signed distance
        let d = pos.inward();
        let base = pos.signed_distance(fan.at) - fan.at.dot(d);
        for (i, piece) in path.pieces().iter().enumerate().skip(i0) {
            let s0 = if i == i0 { local } else { 0.0 };
            let (v, at) = piece.min_dot(d, s0, piece.length());
            let margin = v + base;
            if margin < best.0 {
                best = (margin, [s, path.offsets()[i] + at]);
            }
        }
        // earlier path in h⁻, scanned on the reversed path
        let d = neg.inward();
        let base = neg.signed_distance(fan.at) - fan.at.dot(d);
        for (i, piece) in rev.pieces().iter().enumerate().skip(r0) {
            let s0 = if i == r0 { rlocal } else { 0.0 };
            let (v, at) = piece.min_dot(d, s0, piece.length());
            let margin = v + base;
            if margin < best.0 {
                best = (margin, [s, l - (rev.offsets()[i] + at)]);
            }
        }
    }
    best
}

/// `length ≤ (2π/3)·|st| + tol`; the margin is the slack.
pub fn check_length_bound(path: &PiecewisePath, tol: f64) -> Result<VerifyReport> {
    let st = path.start().dist(path.end());
    if st == 0.0 {
        return Err(Error::DegenerateEndpoints);
    }
    let margin = 2.0 * PI / 3.0 * st - path.length();
    Ok(VerifyReport::new(
        Property::LengthBound,
        margin,
        vec![path.length()],
        1,
        tol,
    ))
}

/// Increasing-chords check of the geodesic in the region bounded by two
/// paths with shared endpoints.
pub fn geodesic_between_check(
    p1: &PiecewisePath,
    p2: &PiecewisePath,
    n: usize,
    tol: f64,
) -> Result<VerifyReport> {
    let g = crate::geodesic::geodesic_in_hourglass(p1, p2, tol)?;
    Ok(check_increasing_chords(&g, n, tol))
}

/// Full suite: chords, both self-approach directions, normal, half-plane and
/// length bound.
pub fn verify_all(path: &PiecewisePath, cfg: VerifyConfig) -> Result<Vec<VerifyReport>> {
    let len = check_length_bound(path, cfg.tol)?;
    if is_straight(path) {
        let props = [
            Property::IncreasingChords,
            Property::SelfApproachingFwd,
            Property::SelfApproachingBwd,
            Property::NormalProperty,
            Property::HalfPlane,
        ];
        let mut out: Vec<VerifyReport> = props.iter().map(|&p| exact(p, cfg.tol)).collect();
        out.push(len);
        return Ok(out);
    }
    // one sweep per direction serves both directional checks and the normal check
    let params = sa_params(path, cfg.n);
    let l = path.length();
    let (fm, fw) = directional(path, &params);
    let (bm, bw) = directional(&path.reverse(), &params);
    let bw = bw.map(|x| l - x);
    let k = params.len();
    let fwd = VerifyReport::new(Property::SelfApproachingFwd, fm, fw, k, cfg.tol);
    let bwd = VerifyReport::new(Property::SelfApproachingBwd, bm, bw, k, cfg.tol);
    let (nm, nw) = min_by_margin((fm, fw), (bm, bw));
    Ok(vec![
        check_increasing_chords(path, cfg.n, cfg.tol),
        fwd,
        bwd,
        VerifyReport::new(Property::NormalProperty, nm, nw, 2 * k, cfg.tol),
        check_half_plane(path, cfg.n, cfg.tol),
        len,
    ])
}

/// Self-approach margins in both directions at `n` sample parameters.
pub fn normal_margins(path: &PiecewisePath, n: usize) -> Vec<f64> {
    let params = sample_params(path, n);
    let rev = path.reverse();
    params
        .iter()
        .flat_map(|&s| [forward_margin(path, s).0, forward_margin(&rev, s).0])
        .collect()
}

/// Quick rejection: worst self-approach margin on a coarse grid.
pub fn quick_normal_margin(path: &PiecewisePath, n: usize) -> f64 {
    normal_margins(path, n)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}
