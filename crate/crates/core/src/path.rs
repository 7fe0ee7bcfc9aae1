//! Directed piecewise-smooth paths built from segments, circular arcs and
//! traced curves, with arc-length parametrization and normal fans.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::RollingCurve;
use crate::error::{Error, Result};
use crate::geom::{turn_angle, HalfPlane, Point};

/// Tangent deviation allowed between consecutive traced samples.
pub const MAX_SAMPLE_TURN: f64 = 0.2;

/// One sample of a traced curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub arclen: f64,
    pub point: Point,
    pub tangent: Point,
}

/// Closed-form source of a traced piece: the piece runs along `curve` from
/// parameter `start` to `end` (either order).
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub curve: RollingCurve,
    pub start: f64,
    pub end: f64,
}

impl Generator {
    fn dir(&self) -> f64 {
        if self.end >= self.start {
            1.0
        } else {
            -1.0
        }
    }

    pub fn length(&self) -> f64 {
        self.curve.length(self.start, self.end)
    }

    /// Parameter at arc length `s` from the start.
    pub fn param_at(&self, s: f64) -> f64 {
        let total = self.length();
        if total == 0.0 {
            return self.start;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let f = |u: f64| {
            let p = self.start + (self.end - self.start) * u;
            self.curve.length(self.start, p) - s
        };
        // Newton from the linear guess, bisection as safeguard
        let mut u = (s / total).clamp(0.0, 1.0);
        for _ in 0..60 {
            let fu = f(u);
            if fu.abs() <= 1e-15 * (1.0 + total) {
                break;
            }
            if fu > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let p = self.start + (self.end - self.start) * u;
            let speed = self.curve.derivative(p).norm() * (self.end - self.start).abs();
            let mut next = if speed > 0.0 {
                u - fu / speed
            } else {
                f64::NAN
            };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() < 1e-17 {
                break;
            }
            u = next;
        }
        self.start + (self.end - self.start) * u
    }

    pub fn point(&self, param: f64) -> Point {
        self.curve.point(param)
    }

    /// Unit tangent in the piece's travel direction.
    pub fn tangent(&self, param: f64) -> Point {
        self.curve.tangent(param) * self.dir()
    }

    pub fn reversed(&self) -> Generator {
        Generator {
            curve: self.curve.clone(),
            start: self.end,
            end: self.start,
        }
    }

    /// Builds evenly refined samples with chordal error at most `tol`.
    pub fn samples(&self, tol: f64) -> Vec<Sample> {
        let params = self.curve.adaptive_params(self.start, self.end, tol);
        let mut out = Vec::with_capacity(params.len());
        for p in params {
            out.push(Sample {
                arclen: self.curve.length(self.start, p),
                point: self.point(p),
                tangent: self.tangent(p),
            });
        }
        out
    }
}

/// A traced curve: samples with tangents, optionally backed by a generator.
#[derive(Clone, Debug, PartialEq)]
pub struct TracedPiece {
    pub samples: Vec<Sample>,
    pub generator: Option<Generator>,
    pub tolerance: f64,
}

impl TracedPiece {
    pub fn from_generator(generator: Generator, tolerance: f64) -> Self {
        let samples = generator.samples(tolerance);
        TracedPiece {
            samples,
            generator: Some(generator),
            tolerance,
        }
    }

    /// Checks the sample invariants.
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::InvalidPiece("traced piece needs two samples".into()));
        }
        for w in self.samples.windows(2) {
            if w[1].arclen <= w[0].arclen {
                return Err(Error::InvalidPiece(
                    "sample arc lengths not increasing".into(),
                ));
            }
            if w[0].tangent.dot(w[1].tangent) < MAX_SAMPLE_TURN.cos() - 1e-12 {
                return Err(Error::InvalidPiece(
                    "consecutive tangents deviate too much".into(),
                ));
            }
        }
        Ok(())
    }

    fn length(&self) -> f64 {
        self.samples.last().map(|s| s.arclen).unwrap_or(0.0) - self.samples[0].arclen
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let s = s + self.samples[0].arclen;
        let i = match self.samples.binary_search_by(|q| q.arclen.total_cmp(&s)) {
            Ok(i) => i.min(self.samples.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.samples.len() - 2),
        };
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let f = ((s - a.arclen) / (b.arclen - a.arclen)).clamp(0.0, 1.0);
        (i, f)
    }

    fn point_at(&self, s: f64) -> Point {
        if let Some(g) = &self.generator {
            return g.point(g.param_at(s));
        }
        let (i, f) = self.locate(s);
        blend(self.samples[i], self.samples[i + 1], f).0
    }

    fn tangent_at(&self, s: f64) -> Point {
        if let Some(g) = &self.generator {
            return g.tangent(g.param_at(s));
        }
        let (i, f) = self.locate(s);
        blend(self.samples[i], self.samples[i + 1], f).1
    }

    fn reversed(&self) -> TracedPiece {
        let total = self.samples.last().map(|s| s.arclen).unwrap_or(0.0);
        TracedPiece {
            samples: self
                .samples
                .iter()
                .rev()
                .map(|s| Sample {
                    arclen: total - s.arclen,
                    point: s.point,
                    tangent: -s.tangent,
                })
                .collect(),
            generator: self.generator.as_ref().map(Generator::reversed),
            tolerance: self.tolerance,
        }
    }
}

/// Point and tangent on the circular arc leaving `p0` along `t0` toward `p1`,
/// at fraction `f` of its turning.
fn arc_from(p0: Point, t0: Point, p1: Point, f: f64) -> (Point, Point) {
    let chord = p1 - p0;
    let l = chord.norm();
    if l == 0.0 {
        return (p0, t0);
    }
    let alpha = turn_angle(t0, chord);
    let n0 = t0.perp();
    // p(f) = p0 + t0·L·sin(2αf)/(2 sin α) + n0·L·(1 - cos 2αf)/(2 sin α)
    let (kt, kn) = if alpha.abs() < 1e-6 {
        (l * f, l * alpha * f * f)
    } else {
        let s = alpha.sin();
        (
            l * (2.0 * alpha * f).sin() / (2.0 * s),
            l * (1.0 - (2.0 * alpha * f).cos()) / (2.0 * s),
        )
    };
    (p0 + t0 * kt + n0 * kn, t0.rotated(2.0 * alpha * f))
}

/// Circular-arc blending between two samples.
fn blend(a: Sample, b: Sample, f: f64) -> (Point, Point) {
    let (pa, ta) = arc_from(a.point, a.tangent, b.point, f);
    let (pb, tb) = arc_from(b.point, -b.tangent, a.point, 1.0 - f);
    let p = pa * (1.0 - f) + pb * f;
    let t = (ta * (1.0 - f) - tb * f).normalized();
    (p, t)
}

/// A smooth piece of a path.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvePiece {
    Segment {
        a: Point,
        b: Point,
    },
    /// Points `center + radius·(cos θ, sin θ)` for θ from `start_angle` over
    /// the signed `sweep`.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    Traced(TracedPiece),
}

impl CurvePiece {
    pub fn segment(a: Point, b: Point) -> Self {
        CurvePiece::Segment { a, b }
    }

    /// Arc about `center` from `from` sweeping `sweep` radians.
    pub fn arc_from(center: Point, from: Point, sweep: f64) -> Self {
        CurvePiece::Arc {
            center,
            radius: from.dist(center),
            start_angle: (from - center).angle(),
            sweep,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CurvePiece::Segment { a, b } => {
                if a == b {
                    return Err(Error::InvalidPiece("zero-length segment".into()));
                }
            }
            CurvePiece::Arc { radius, sweep, .. } => {
                if !(*radius > 0.0) || sweep.abs() >= TAU || *sweep == 0.0 {
                    return Err(Error::InvalidPiece(
                        "arc radius or sweep out of range".into(),
                    ));
                }
            }
            CurvePiece::Traced(t) => t.validate()?,
        }
        Ok(())
    }

    pub fn is_curved(&self) -> bool {
        !matches!(self, CurvePiece::Segment { .. })
    }

    pub fn length(&self) -> f64 {
        match self {
            CurvePiece::Segment { a, b } => a.dist(*b),
            CurvePiece::Arc { radius, sweep, .. } => radius * sweep.abs(),
            CurvePiece::Traced(t) => t.length(),
        }
    }

    pub fn start(&self) -> Point {
        match self {
            CurvePiece::Segment { a, .. } => *a,
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                ..
            } => *center + Point::polar(*start_angle) * *radius,
            CurvePiece::Traced(t) => t.samples[0].point,
        }
    }

    pub fn end(&self) -> Point {
        match self {
            CurvePiece::Segment { b, .. } => *b,
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => *center + Point::polar(start_angle + sweep) * *radius,
            CurvePiece::Traced(t) => t.samples.last().map(|s| s.point).unwrap_or_default(),
        }
    }

    /// Point at local arc length `s`.
    pub fn point_at(&self, s: f64) -> Point {
        match self {
            CurvePiece::Segment { a, b } => {
                let l = a.dist(*b);
                if s >= l {
                    *b
                } else {
                    a.lerp(*b, s / l)
                }
            }
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let th = start_angle + sweep.signum() * s / radius;
                *center + Point::polar(th) * *radius
            }
            CurvePiece::Traced(t) => t.point_at(s),
        }
    }

    /// Unit tangent (direction of travel) at local arc length `s`.
    pub fn tangent_at(&self, s: f64) -> Point {
        match self {
            CurvePiece::Segment { a, b } => (*b - *a).normalized(),
            CurvePiece::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let th = start_angle + sweep.signum() * s / radius;
                Point::polar(th).perp() * sweep.signum()
            }
            CurvePiece::Traced(t) => t.tangent_at(s),
        }
    }

    pub fn start_tangent(&self) -> Point {
        match self {
            CurvePiece::Traced(t) => t.samples[0].tangent,
            _ => self.tangent_at(0.0),
        }
    }

    pub fn end_tangent(&self) -> Point {
        match self {
            CurvePiece::Traced(t) => t.samples.last().map(|s| s.tangent).unwrap_or_default(),
            _ => self.tangent_at(self.length()),
        }
    }

    pub fn reversed(&self) -> CurvePiece {
        match self {
            CurvePiece::Segment { a, b } => CurvePiece::Segment { a: *b, b: *a },
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => CurvePiece::Arc {
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
            CurvePiece::Traced(t) => CurvePiece::Traced(t.reversed()),
        }
    }

    /// Sub-piece between local arc lengths; reversed when `s1 < s0`.
    pub fn sub(&self, s0: f64, s1: f64) -> CurvePiece {
        if s1 < s0 {
            return self.sub(s1, s0).reversed();
        }
        let l = self.length();
        let s0 = s0.clamp(0.0, l);
        let s1 = s1.clamp(0.0, l);
        match self {
            CurvePiece::Segment { .. } => CurvePiece::Segment {
                a: self.point_at(s0),
                b: self.point_at(s1),
            },
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => CurvePiece::Arc {
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep.signum() * s0 / radius,
                sweep: sweep.signum() * (s1 - s0) / radius,
            },
            CurvePiece::Traced(t) => {
                if let Some(g) = &t.generator {
                    let g2 = Generator {
                        curve: g.curve.clone(),
                        start: g.param_at(s0),
                        end: g.param_at(s1),
                    };
                    CurvePiece::Traced(TracedPiece::from_generator(g2, t.tolerance))
                } else {
                    let base = t.samples[0].arclen;
                    let mut samples = vec![Sample {
                        arclen: 0.0,
                        point: t.point_at(s0),
                        tangent: t.tangent_at(s0),
                    }];
                    for q in &t.samples {
                        let local = q.arclen - base;
                        if local > s0 && local < s1 {
                            samples.push(Sample {
                                arclen: local - s0,
                                ..*q
                            });
                        }
                    }
                    samples.push(Sample {
                        arclen: s1 - s0,
                        point: t.point_at(s1),
                        tangent: t.tangent_at(s1),
                    });
                    samples.dedup_by(|b, a| b.arclen <= a.arclen);
                    CurvePiece::Traced(TracedPiece {
                        samples,
                        generator: None,
                        tolerance: t.tolerance,
                    })
                }
            }
        }
    }

    /// Minimum of `z · d` over the piece restricted to local arc lengths
    /// `[s0, s1]`, with the arc length where it is attained.
    pub fn min_dot(&self, d: Point, s0: f64, s1: f64) -> (f64, f64) {
        let mut best = (self.point_at(s0).dot(d), s0);
        let mut consider = |s: f64, v: f64| {
            if v < best.0 {
                best = (v, s);
            }
        };
        consider(s1, self.point_at(s1).dot(d));
        match self {
            CurvePiece::Segment { .. } => {}
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                // interior minimum where the radius points along -d
                let target = (-d).angle();
                let dir = sweep.signum();
                let th0 = start_angle + dir * s0 / radius;
                let span = (s1 - s0) / radius;
                let mut delta = (target - th0) * dir;
                delta = delta.rem_euclid(TAU);
                if delta <= span {
                    let s = s0 + delta * radius;
                    consider(s, (*center + Point::polar(target) * *radius).dot(d));
                }
            }
            CurvePiece::Traced(t) => {
                let base = t.samples[0].arclen;
                for q in &t.samples {
                    let local = q.arclen - base;
                    if local > s0 && local < s1 {
                        consider(local, q.point.dot(d));
                    }
                }
            }
        }
        best
    }

    /// Polyline approximation with Hausdorff error at most `delta`, as
    /// `(local arc length, point)` including both ends.
    pub fn flatten(&self, delta: f64) -> Vec<(f64, Point)> {
        match self {
            CurvePiece::Segment { a, b } => vec![(0.0, *a), (a.dist(*b), *b)],
            CurvePiece::Arc { radius, sweep, .. } => {
                let step = if delta >= *radius {
                    PI / 2.0
                } else {
                    2.0 * (1.0 - delta / radius).acos()
                };
                let n = ((sweep.abs() / step).ceil() as usize).max(1);
                let l = self.length();
                (0..=n)
                    .map(|i| {
                        let s = l * i as f64 / n as f64;
                        (s, self.point_at(s))
                    })
                    .collect()
            }
            CurvePiece::Traced(t) => {
                if let Some(g) = &t.generator {
                    if delta < t.tolerance {
                        return g
                            .samples(delta)
                            .into_iter()
                            .map(|q| (q.arclen, q.point))
                            .collect();
                    }
                }
                let base = t.samples[0].arclen;
                t.samples
                    .iter()
                    .map(|q| (q.arclen - base, q.point))
                    .collect()
            }
        }
    }

    /// Signed total turning of the tangent.
    pub fn turning(&self) -> f64 {
        match self {
            CurvePiece::Segment { .. } => 0.0,
            CurvePiece::Arc { sweep, .. } => *sweep,
            CurvePiece::Traced(t) => t
                .samples
                .windows(2)
                .map(|w| turn_angle(w[0].tangent, w[1].tangent))
                .sum(),
        }
    }
}

/// Directed chain of curve pieces from `s` to `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    pieces: Vec<CurvePiece>,
    offsets: Vec<f64>,
    total: f64,
}

/// Tangent discontinuities smaller than this are smooth joints.
pub const BEND_EPS: f64 = 1e-9;

impl PiecewisePath {
    /// Builds a path from consecutive pieces. Zero-length pieces are dropped;
    /// consecutive pieces must meet within `1e-9` relative to the path size.
    pub fn new(pieces: Vec<CurvePiece>) -> Result<Self> {
        let scale = pieces
            .iter()
            .map(|p| p.start().norm().max(p.end().norm()) + p.length())
            .fold(1.0, f64::max);
        let min_len = 1e-14 * scale;
        let mut kept: Vec<CurvePiece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if p.length() <= min_len {
                continue;
            }
            if let CurvePiece::Traced(t) = &p {
                if t.samples.len() < 2 {
                    continue;
                }
            }
            if let Some(prev) = kept.last() {
                let gap = prev.end().dist(p.start());
                if gap > 1e-9 * scale {
                    return Err(Error::EndpointMismatch(prev.end(), p.start()));
                }
            }
            // snap segment starts onto the previous end
            let p = match (kept.last(), p) {
                (Some(prev), CurvePiece::Segment { b, .. }) => {
                    CurvePiece::Segment { a: prev.end(), b }
                }
                (_, p) => p,
            };
            kept.push(p);
        }
        if kept.is_empty() {
            return Err(Error::InvalidPiece(
                "path has no pieces of positive length".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(kept.len());
        let mut acc = 0.0;
        for p in &kept {
            offsets.push(acc);
            acc += p.length();
        }
        Ok(PiecewisePath {
            pieces: kept,
            offsets,
            total: acc,
        })
    }

    pub fn from_polyline(points: &[Point]) -> Result<Self> {
        let pieces = points
            .windows(2)
            .filter(|w| w[0] != w[1])
            .map(|w| CurvePiece::segment(w[0], w[1]))
            .collect();
        PiecewisePath::new(pieces)
    }

    pub fn pieces(&self) -> &[CurvePiece] {
        &self.pieces
    }

    pub fn start(&self) -> Point {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Point {
        self.pieces[self.pieces.len() - 1].end()
    }

    pub fn length(&self) -> f64 {
        self.total
    }

    /// Arc-length offset of each piece start.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Arc lengths of interior piece joints.
    pub fn joints(&self) -> &[f64] {
        &self.offsets[1..]
    }

    fn check(&self, s: f64) -> Result<()> {
        let slack = 1e-12 * (1.0 + self.total);
        if !(s >= -slack && s <= self.total + slack) {
            return Err(Error::OutOfRange(s, self.total));
        }
        Ok(())
    }

    /// Piece index and local arc length; joints resolve to the later piece.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.clamp(0.0, self.total);
        let i = match self.offsets.binary_search_by(|o| o.total_cmp(&s)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let i = i.min(self.pieces.len() - 1);
        (i, (s - self.offsets[i]).min(self.pieces[i].length()))
    }

    pub fn point_at(&self, s: f64) -> Result<Point> {
        self.check(s)?;
        Ok(self.point_at_unchecked(s))
    }

    pub(crate) fn point_at_unchecked(&self, s: f64) -> Point {
        if s >= self.total {
            return self.end();
        }
        let (i, l) = self.locate(s);
        self.pieces[i].point_at(l)
    }

    /// Forward (right) tangent at `s`.
    pub fn tangent_at(&self, s: f64) -> Result<Point> {
        self.check(s)?;
        if s >= self.total {
            return Ok(self.pieces[self.pieces.len() - 1].end_tangent());
        }
        let (i, l) = self.locate(s);
        Ok(self.pieces[i].tangent_at(l))
    }

    /// Normal fan at arc length `s`; a double wedge at bend points.
    pub fn normal_at(&self, s: f64) -> Result<NormalFan> {
        self.check(s)?;
        let s = s.clamp(0.0, self.total);
        let at = self.point_at_unchecked(s);
        let slack = 1e-12 * (1.0 + self.total);
        let joint = self
            .offsets
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &o)| (o - s).abs() <= slack)
            .map(|(i, _)| i);
        let (backward, forward) = match joint {
            Some(i) => (
                self.pieces[i - 1].end_tangent(),
                self.pieces[i].start_tangent(),
            ),
            None if s >= self.total - slack => {
                let t = self.pieces[self.pieces.len() - 1].end_tangent();
                (t, t)
            }
            None => {
                let (i, l) = self.locate(s);
                let t = self.pieces[i].tangent_at(l);
                (t, t)
            }
        };
        Ok(NormalFan {
            at,
            backward,
            forward,
        })
    }

    pub fn reverse(&self) -> PiecewisePath {
        let pieces: Vec<CurvePiece> = self.pieces.iter().rev().map(CurvePiece::reversed).collect();
        let mut offsets = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for p in &pieces {
            offsets.push(acc);
            acc += p.length();
        }
        // exact total length is preserved
        PiecewisePath {
            pieces,
            offsets,
            total: self.total,
        }
    }

    pub fn concat(&self, other: &PiecewisePath) -> Result<PiecewisePath> {
        let scale = 1.0 + self.total + other.total + self.end().norm();
        if self.end().dist(other.start()) > 1e-9 * scale {
            return Err(Error::EndpointMismatch(self.end(), other.start()));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        PiecewisePath::new(pieces)
    }

    /// Sub-path between arc lengths `s0 < s1`.
    pub fn sub_path(&self, s0: f64, s1: f64) -> Result<PiecewisePath> {
        self.check(s0)?;
        self.check(s1)?;
        let (s0, s1) = (s0.clamp(0.0, self.total), s1.clamp(0.0, self.total));
        let mut pieces = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let a = self.offsets[i];
            let b = a + p.length();
            if b <= s0 || a >= s1 {
                continue;
            }
            let lo = (s0 - a).max(0.0);
            let hi = (s1 - a).min(p.length());
            if lo == 0.0 && hi >= p.length() {
                pieces.push(p.clone());
            } else {
                pieces.push(p.sub(lo, hi));
            }
        }
        PiecewisePath::new(pieces)
    }

    /// Polyline approximation as `(arc length, point, piece index)`.
    pub fn flatten(&self, delta: f64) -> Vec<(f64, Point, usize)> {
        let mut out: Vec<(f64, Point, usize)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let off = self.offsets[i];
            for (k, (s, q)) in p.flatten(delta).into_iter().enumerate() {
                if k == 0 && !out.is_empty() {
                    continue;
                }
                out.push((off + s, q, i));
            }
        }
        out
    }

    /// Total absolute turning, counting smooth turning and bends.
    pub fn total_turning(&self) -> f64 {
        let smooth: f64 = self.pieces.iter().map(|p| p.turning().abs()).sum();
        let bends: f64 = self
            .pieces
            .windows(2)
            .map(|w| turn_angle(w[0].end_tangent(), w[1].start_tangent()).abs())
            .sum();
        smooth + bends
    }
}

/// Which line of a normal fan to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineSelector {
    /// Perpendicular to the incoming tangent.
    Incoming,
    /// Perpendicular to the outgoing tangent.
    Outgoing,
    /// Perpendicular to the tangent rotated the given fraction of the way from
    /// incoming to outgoing.
    Interior(f64),
}

/// Normal line at a smooth point, or the closed double wedge at a bend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalFan {
    pub at: Point,
    /// Left (incoming) unit tangent.
    pub backward: Point,
    /// Right (outgoing) unit tangent.
    pub forward: Point,
}

impl NormalFan {
    pub fn is_bend(&self) -> bool {
        self.wedge_extent() > BEND_EPS
    }

    /// Angle between the two perpendiculars.
    pub fn wedge_extent(&self) -> f64 {
        turn_angle(self.backward, self.forward).abs()
    }

    /// Tangent whose perpendicular is the selected line.
    pub fn tangent_for(&self, sel: LineSelector) -> Point {
        match sel {
            LineSelector::Incoming => self.backward,
            LineSelector::Outgoing => self.forward,
            LineSelector::Interior(f) => {
                let turn = turn_angle(self.backward, self.forward);
                self.backward.rotated(turn * f.clamp(0.0, 1.0))
            }
        }
    }

    /// Selected line as `(point, unit direction)`.
    pub fn line(&self, sel: LineSelector) -> (Point, Point) {
        (self.at, self.tangent_for(sel).perp())
    }

    /// Directions of the two extreme lines plus `interior` evenly spaced
    /// lines strictly inside the wedge (just one at smooth points).
    pub fn sample_tangents(&self, interior: usize) -> Vec<Point> {
        if !self.is_bend() {
            return vec![self.forward];
        }
        let mut v = vec![self.backward, self.forward];
        for k in 1..=interior {
            v.push(self.tangent_for(LineSelector::Interior(k as f64 / (interior + 1) as f64)));
        }
        v
    }
}

/// Negative and positive closed half-planes of the selected normal line; the
/// positive one contains the tangent the line is perpendicular to.
pub fn half_planes(fan: &NormalFan, sel: LineSelector) -> Result<(HalfPlane, HalfPlane)> {
    let d = fan.tangent_for(sel);
    if !((d.norm() - 1.0).abs() < 1e-6) || fan.wedge_extent() >= PI - 1e-12 {
        return Err(Error::TangentInLine);
    }
    let (p, dir) = fan.line(sel);
    // the line must not contain its own tangent
    if dir.dot(d).abs() > 1e-9 {
        return Err(Error::TangentInLine);
    }
    let pos = HalfPlane::from_inward(p, d);
    Ok((pos.complement(), pos))
}

// ---- serialization ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PieceRepr {
    Segment {
        a: Point,
        b: Point,
    },
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    Traced {
        samples: Vec<[f64; 5]>,
        tolerance: f64,
    },
}

impl From<&CurvePiece> for PieceRepr {
    fn from(p: &CurvePiece) -> Self {
        match p {
            CurvePiece::Segment { a, b } => PieceRepr::Segment { a: *a, b: *b },
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => PieceRepr::Arc {
                center: *center,
                radius: *radius,
                start_angle: *start_angle,
                sweep: *sweep,
            },
            CurvePiece::Traced(t) => PieceRepr::Traced {
                samples: t
                    .samples
                    .iter()
                    .map(|s| [s.arclen, s.point.x, s.point.y, s.tangent.x, s.tangent.y])
                    .collect(),
                tolerance: t.tolerance,
            },
        }
    }
}

impl From<PieceRepr> for CurvePiece {
    fn from(r: PieceRepr) -> Self {
        match r {
            PieceRepr::Segment { a, b } => CurvePiece::Segment { a, b },
            PieceRepr::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            },
            PieceRepr::Traced { samples, tolerance } => CurvePiece::Traced(TracedPiece {
                samples: samples
                    .into_iter()
                    .map(|s| Sample {
                        arclen: s[0],
                        point: Point::new(s[1], s[2]),
                        tangent: Point::new(s[3], s[4]),
                    })
                    .collect(),
                generator: None,
                tolerance,
            }),
        }
    }
}

impl Serialize for CurvePiece {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        PieceRepr::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CurvePiece {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let p = CurvePiece::from(PieceRepr::deserialize(de)?);
        p.validate().map_err(serde::de::Error::custom)?;
        Ok(p)
    }
}

impl Serialize for PiecewisePath {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.pieces.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PiecewisePath {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let pieces = Vec::<CurvePiece>::deserialize(de)?;
        PiecewisePath::new(pieces).map_err(serde::de::Error::custom)
    }
}
