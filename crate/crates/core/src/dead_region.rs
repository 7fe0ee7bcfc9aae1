//! Dead regions: the points from which no self-approaching path reaches an
//! anchor. Boundaries are traced as taut-string curves whose normals touch
//! the geodesic chain toward the anchor.

use geo::{BooleanOps, Coord, LineString, MultiPolygon, Polygon};
use serde::{Deserialize, Serialize};

use crate::curve::RollingCurve;
use crate::error::{Error, Result};
use crate::geodesic::{
    shortest_path_simple, snap, tangent_param, Component, DiscretizedDomain, Tag,
};
use crate::geom::{
    dist_to_ring, locate_in_ring, segment_intersection, turn_angle, Location, Point, SegmentHit,
    SimplePolygon,
};
use crate::path::{CurvePiece, Generator, PiecewisePath, TracedPiece};

/// Maximum involute level produced while unwinding.
pub const MAX_LEVEL: u8 = 8;

/// A dead region attached to the polygon boundary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeadRegion {
    pub anchor: Point,
    /// Reflex vertex whose shadow the region lies in.
    pub window: Point,
    /// Closed boundary: the traced curve followed by the closing chain.
    pub boundary: Vec<CurvePiece>,
    /// Boundary intervals shared with the polygon.
    pub attachment: Vec<[Point; 2]>,
    pub tolerance: f64,
    /// Number of leading boundary pieces that form the traced curve.
    #[serde(default)]
    pub curve_len: usize,
    #[serde(skip)]
    outline: Vec<Point>,
    #[serde(skip)]
    tags: Vec<Tag>,
    #[serde(skip)]
    source_base: usize,
}

impl DeadRegion {
    /// The traced part of the boundary.
    pub fn curve(&self) -> &[CurvePiece] {
        &self.boundary[..self.curve_len.min(self.boundary.len())]
    }

    /// Flattened boundary ring.
    pub fn outline(&self) -> Vec<Point> {
        if !self.outline.is_empty() {
            return self.outline.clone();
        }
        let mut ring: Vec<Point> = Vec::new();
        for piece in &self.boundary {
            for (_, p) in piece.flatten(self.tolerance) {
                if ring.last() != Some(&p) {
                    ring.push(p);
                }
            }
        }
        if ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        ring
    }

    pub fn area(&self) -> f64 {
        0.5 * crate::geom::signed_area2(&self.outline()).abs()
    }
}

/// Touched structure: the chain from the anchor outward, the touch position
/// as arc length from the anchor, and the string length.
#[derive(Clone, Debug)]
pub struct TouchState {
    pub anchor: Point,
    pub chain: Vec<CurvePiece>,
    pub unwind_param: f64,
    pub string_constant: f64,
}

/// When tracing ends.
#[derive(Clone, Copy, Debug)]
pub struct StopConditions<'a> {
    /// Stop where the curve meets this ring.
    pub boundary: Option<&'a [Point]>,
    /// Rotation sense of the string: +1 counter-clockwise, -1 clockwise.
    pub sense: f64,
    /// Stop once the touch point reaches the anchor.
    pub stop_at_anchor: bool,
    /// Largest rotation about the anchor once the string is fully unwound.
    pub max_rotation: f64,
}

/// Output of [`trace_normal_touch_curve`].
#[derive(Clone, Debug)]
pub struct Trace {
    pub pieces: Vec<CurvePiece>,
    pub end: Point,
    /// Ring edge hit, with the hit point.
    pub hit: Option<(usize, Point)>,
    pub state: TouchState,
}

struct Chain<'a> {
    anchor: Point,
    pieces: &'a [CurvePiece],
    tau0: Vec<f64>,
    eps: f64,
}

impl<'a> Chain<'a> {
    fn new(anchor: Point, pieces: &'a [CurvePiece]) -> Self {
        let mut tau0 = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for p in pieces {
            tau0.push(acc);
            acc += p.length();
        }
        let scale = 1.0 + acc + anchor.norm();
        Chain {
            anchor,
            pieces,
            tau0,
            eps: 1e-12 * scale,
        }
    }

    fn total(&self) -> f64 {
        self.pieces
            .last()
            .map(|p| self.tau0[self.tau0.len() - 1] + p.length())
            .unwrap_or(0.0)
    }

    /// Piece containing `tau` from below.
    fn piece_below(&self, tau: f64) -> Option<usize> {
        if tau <= self.eps {
            return None;
        }
        (0..self.pieces.len())
            .rev()
            .find(|&k| self.tau0[k] < tau - self.eps || k == 0)
    }

    fn point(&self, tau: f64) -> Point {
        match self.piece_below(tau) {
            None => self.anchor,
            Some(k) => self.pieces[k].point_at(tau - self.tau0[k]),
        }
    }

    /// Point of the chain with `tau ≤ tau_max` that is most clockwise
    /// (`sense = +1`) or counter-clockwise (`sense = -1`) seen from `from`,
    /// relative to `reference`. Ties go to the smaller `tau`.
    fn extreme(
        &self,
        from: Point,
        reference: Point,
        sense: f64,
        tau_max: f64,
        tol: f64,
    ) -> (f64, Point) {
        let rel = |z: Point| -> f64 {
            let d = z - from;
            sense * reference.cross(d).atan2(reference.dot(d))
        };
        let mut cands: Vec<(f64, Point, Option<(usize, f64)>)> = vec![(0.0, self.anchor, None)];
        for (k, piece) in self.pieces.iter().enumerate() {
            if self.tau0[k] > tau_max {
                break;
            }
            let flat = piece.flatten(tol);
            for (l, p) in flat {
                let tau = self.tau0[k] + l;
                if tau <= tau_max + self.eps {
                    let interior = piece.is_curved() && l > 0.0 && l < piece.length();
                    cands.push((tau, p, if interior { Some((k, l)) } else { None }));
                }
            }
        }
        let near = 1e-9 * (1.0 + from.norm());
        let mut best: Option<(f64, f64, Point, Option<(usize, f64)>)> = None;
        for (tau, p, curved) in cands {
            if p.dist(from) <= near {
                continue;
            }
            let a = rel(p);
            let better = match best {
                None => true,
                Some((ba, bt, _, _)) => a < ba - 1e-13 || (a <= ba + 1e-13 && tau < bt),
            };
            if better {
                best = Some((a, tau, p, curved));
            }
        }
        let Some((_, tau, p, curved)) = best else {
            return (0.0, self.anchor);
        };
        if let Some((k, l)) = curved {
            if let Some(l2) = tangent_param(&self.pieces[k], from, l, 0.0) {
                let q = self.pieces[k].point_at(l2);
                if rel(q) <= rel(p) + 1e-15 {
                    return (self.tau0[k] + l2, q);
                }
            }
        }
        (tau, p)
    }
}

enum Emit {
    Continue,
    Hit(usize, Point),
}

/// First crossing of `piece` with `ring`, ignoring contact at `skip`.
fn first_hit(
    piece: &CurvePiece,
    ring: &[Point],
    skip: Option<Point>,
    tol: f64,
) -> Option<(f64, usize, Point)> {
    let flat = piece.flatten(tol);
    let n = ring.len();
    let near = 1e-9 * (1.0 + ring.iter().map(|p| p.norm()).fold(0.0, f64::max));
    for w in flat.windows(2) {
        let ((l0, a), (l1, b)) = (w[0], w[1]);
        let mut best: Option<(f64, usize, Point)> = None;
        for e in 0..n {
            let (c, d) = (ring[e], ring[(e + 1) % n]);
            let u = match segment_intersection(a, b, c, d) {
                SegmentHit::None => continue,
                SegmentHit::Point(u, _) => u,
                SegmentHit::Overlap(u0, _) => u0,
            };
            let p = a.lerp(b, u);
            if skip.is_some_and(|s| p.dist(s) <= near) {
                continue;
            }
            // refine on the exact curve
            let dir = d - c;
            let f = |l: f64| dir.cross(piece.point_at(l) - c);
            let (mut x0, mut x1) = (l0, l1);
            let mut l = l0 + u * (l1 - l0);
            if f(x0).signum() != f(x1).signum() {
                let f0 = f(x0);
                for _ in 0..100 {
                    let m = 0.5 * (x0 + x1);
                    if f(m).signum() == f0.signum() {
                        x0 = m;
                    } else {
                        x1 = m;
                    }
                }
                l = 0.5 * (x0 + x1);
            }
            if best.is_none_or(|(bl, _, _)| l < bl) {
                best = Some((l, e, piece.point_at(l)));
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Traces the curve whose normal lines touch the chain, unwinding the string
/// toward the anchor; arcs around chain corners and the anchor, involutes
/// along curved chain pieces.
pub fn trace_normal_touch_curve(
    start: Point,
    state: TouchState,
    stop: &StopConditions,
    tol: f64,
) -> Result<Trace> {
    let chain = Chain::new(state.anchor, &state.chain);
    let sigma = stop.sense.signum();
    let mut tau = state.unwind_param.clamp(0.0, chain.total());
    let mut k_str = state.string_constant;
    if k_str + chain.eps < tau {
        return Err(Error::StringExhausted);
    }
    let z = chain.point(tau);
    let mut t_cur = if start.dist(z) > chain.eps {
        (start - z).normalized()
    } else {
        match chain.piece_below(tau) {
            Some(k) => chain.pieces[k].tangent_at(tau - chain.tau0[k]),
            None => return Err(Error::StringExhausted),
        }
    };
    let mut x = start;
    let mut pieces: Vec<CurvePiece> = Vec::new();
    let mut hit: Option<(usize, Point)> = None;

    let emit = |piece: CurvePiece, pieces: &mut Vec<CurvePiece>, x: &mut Point| -> Emit {
        if let Some(ring) = stop.boundary {
            let skip = if pieces.is_empty() { Some(start) } else { None };
            if let Some((l, e, p)) = first_hit(&piece, ring, skip, tol) {
                if l > 0.0 {
                    pieces.push(piece.sub(0.0, l));
                }
                *x = p;
                return Emit::Hit(e, p);
            }
        }
        *x = piece.end();
        pieces.push(piece);
        Emit::Continue
    };

    let mut guard = 0;
    'outer: loop {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::StallDetected(x));
        }
        let Some(k) = chain.piece_below(tau) else {
            // fully unwound: circle about the anchor
            if stop.stop_at_anchor {
                break;
            }
            let rho = k_str;
            if rho <= 0.0 {
                return Err(Error::StringExhausted);
            }
            let arc = CurvePiece::Arc {
                center: chain.anchor,
                radius: rho,
                start_angle: t_cur.angle(),
                sweep: sigma * stop.max_rotation.min(std::f64::consts::TAU * (1.0 - 1e-12)),
            };
            if let Emit::Hit(e, p) = emit(arc, &mut pieces, &mut x) {
                hit = Some((e, p));
            }
            tau = 0.0;
            break;
        };
        let piece = &chain.pieces[k];
        let len = piece.length();
        let mut local = (tau - chain.tau0[k]).min(len);
        if local >= len - chain.eps {
            // corner at the end of piece k
            let t_in = piece.end_tangent();
            let mut delta = sigma * turn_angle(t_cur, t_in);
            if delta.abs() <= 1e-12 {
                delta = 0.0;
            }
            if delta < 0.0 {
                repivot(&chain, x, &mut t_cur, &mut tau, &mut k_str, sigma, tol)?;
                continue;
            }
            if delta > 0.0 {
                let arc = CurvePiece::Arc {
                    center: chain.point(tau),
                    radius: k_str - tau,
                    start_angle: t_cur.angle(),
                    sweep: sigma * delta,
                };
                if arc.length() > 0.0 {
                    if let Emit::Hit(e, p) = emit(arc, &mut pieces, &mut x) {
                        hit = Some((e, p));
                        break 'outer;
                    }
                }
            }
            t_cur = t_in;
            local = len;
        }
        // smooth unwinding along piece k
        match piece {
            CurvePiece::Segment { .. } => {}
            CurvePiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let dir = sweep.signum();
                if -dir != sigma {
                    repivot(&chain, x, &mut t_cur, &mut tau, &mut k_str, sigma, tol)?;
                    continue;
                }
                let phi_local = start_angle + dir * local / radius;
                let base = RollingCurve::circle(*center, *radius).rebased(phi_local);
                let inv = base.involute(dir, *start_angle, chain.tau0[k], k_str);
                let gen = Generator {
                    curve: inv,
                    start: phi_local,
                    end: *start_angle,
                };
                if gen.length() > 0.0 {
                    let traced = CurvePiece::Traced(TracedPiece::from_generator(gen, tol));
                    if let Emit::Hit(e, p) = emit(traced, &mut pieces, &mut x) {
                        hit = Some((e, p));
                        break 'outer;
                    }
                }
            }
            CurvePiece::Traced(t) => {
                let Some(g) = &t.generator else {
                    return Err(Error::InvalidPiece("chain piece lacks a generator".into()));
                };
                if g.curve.level + 1 > MAX_LEVEL {
                    return Err(Error::ToleranceUnachievable(format!(
                        "involute level would exceed {MAX_LEVEL}"
                    )));
                }
                let dir = (g.end - g.start).signum();
                if -dir != sigma {
                    repivot(&chain, x, &mut t_cur, &mut tau, &mut k_str, sigma, tol)?;
                    continue;
                }
                let phi_local = g.param_at(local);
                let (_, q) = g.curve.speed();
                let q_sign = q.eval(0.5 * (g.start + g.end) - g.curve.phi0).signum();
                let base = g.curve.rebased(phi_local);
                let inv = base.involute(q_sign * dir, g.start, chain.tau0[k], k_str);
                let gen = Generator {
                    curve: inv,
                    start: phi_local,
                    end: g.start,
                };
                if gen.length() > 0.0 {
                    let traced = CurvePiece::Traced(TracedPiece::from_generator(gen, tol));
                    if let Emit::Hit(e, p) = emit(traced, &mut pieces, &mut x) {
                        hit = Some((e, p));
                        break 'outer;
                    }
                }
            }
        }
        tau = chain.tau0[k];
        t_cur = piece.start_tangent();
    }
    Ok(Trace {
        pieces,
        end: x,
        hit,
        state: TouchState {
            unwind_param: tau,
            string_constant: k_str,
            ..state
        },
    })
}

/// Moves the touch point past an inflection to the new supporting point
/// seen from the current curve point.
fn repivot(
    chain: &Chain,
    x: Point,
    t_cur: &mut Point,
    tau: &mut f64,
    k_str: &mut f64,
    sigma: f64,
    tol: f64,
) -> Result<()> {
    let (t2, z) = chain.extreme(x, -*t_cur, sigma, *tau - 1e3 * chain.eps, tol);
    if t2 >= *tau - chain.eps || z.dist(x) == 0.0 {
        return Err(Error::StallDetected(x));
    }
    *tau = t2;
    *k_str = t2 + x.dist(z);
    *t_cur = (x - z).normalized();
    Ok(())
}

/// Builds the dead regions of `anchor`, one per reflex window that needs
/// one, in order of geodesic distance from the anchor.
pub fn build_dead_region(poly: &SimplePolygon, anchor: Point, tol: f64) -> Result<Vec<DeadRegion>> {
    if poly.contains(anchor) != Location::Inside {
        return Err(Error::AnchorOutside(anchor));
    }
    let band = poly.boundary_tol();
    let mut ring: Vec<Point> = poly.vertices().to_vec();
    let mut tags: Vec<Tag> = vec![Tag::Fixed; ring.len()];
    let mut sources: Vec<CurvePiece> = Vec::new();
    let mut regions: Vec<DeadRegion> = Vec::new();

    let mut windows: Vec<(f64, usize)> = Vec::new();
    for i in poly.reflex_vertices() {
        let g = shortest_path_simple(poly, anchor, poly.vertex(i))?;
        windows.push((g.length(), i));
    }
    windows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    for (_, vi) in windows {
        let u = poly.vertex(vi);
        let Some(iu) = ring.iter().position(|&p| p == u) else {
            continue;
        };
        let n = ring.len();
        let comp = Component::new(ring.clone(), tags.clone(), band)?;
        let verts = comp.funnel(u, anchor)?;
        let pi_u = snap(&verts, &sources)?;
        let d0 = pi_u.pieces()[0].start_tangent();
        let (prev, next) = (ring[(iu + n - 1) % n], ring[(iu + 1) % n]);
        let (sp, sn) = (d0.cross(prev - u), d0.cross(next - u));
        let left = sp > 0.0 && sn > 0.0;
        if !(left || (sp < 0.0 && sn < 0.0)) {
            continue;
        }
        let approach = if left {
            (u - next).normalized()
        } else {
            (u - prev).normalized()
        };
        let worst = pi_u
            .pieces()
            .iter()
            .map(|p| p.min_dot(approach, 0.0, p.length()).0)
            .fold(f64::INFINITY, f64::min)
            - u.dot(approach);
        if worst >= -tol {
            continue;
        }
        let sigma = if left { -1.0 } else { 1.0 };
        let chain_path = pi_u.reverse();
        let chain = Chain::new(anchor, chain_path.pieces());
        let (tau_star, z_star) = chain.extreme(u, d0, sigma, chain.total(), tol);
        let state = TouchState {
            anchor,
            chain: chain_path.pieces().to_vec(),
            unwind_param: tau_star,
            string_constant: tau_star + u.dist(z_star),
        };
        let stop = StopConditions {
            boundary: Some(&ring),
            sense: sigma,
            stop_at_anchor: false,
            max_rotation: std::f64::consts::TAU,
        };
        let trace = trace_normal_touch_curve(u, state, &stop, tol)?;
        let Some((edge, x_end)) = trace.hit else {
            return Err(Error::StringExhausted);
        };

        let base = sources.len();
        let curve = trace.pieces;
        sources.extend(curve.iter().cloned());
        let mut cut: Vec<(Point, Tag)> = vec![(u, Tag::Fixed)];
        for (k, piece) in curve.iter().enumerate() {
            let flat = piece.flatten(tol);
            let last = flat.len() - 1;
            for (j, (l, p)) in flat.into_iter().enumerate() {
                if j == 0 || (j == last && k + 1 == curve.len()) {
                    continue;
                }
                cut.push((
                    p,
                    Tag::Curve {
                        source: base + k,
                        local: l,
                    },
                ));
            }
        }
        cut.push((x_end, Tag::Fixed));

        // the two rings on either side of the cut
        let mut fwd = cut.clone();
        let mut j = (edge + 1) % n;
        while j != iu {
            fwd.push((ring[j], tags[j]));
            j = (j + 1) % n;
        }
        let mut bwd = cut.clone();
        let mut j = edge;
        while j != iu {
            bwd.push((ring[j], tags[j]));
            j = (j + n - 1) % n;
        }
        for side in [&mut fwd, &mut bwd] {
            side.dedup_by(|b, a| b.0 == a.0);
        }
        let inside = |side: &[(Point, Tag)]| {
            let pts: Vec<Point> = side.iter().map(|v| v.0).collect();
            locate_in_ring(&pts, anchor, band) == Location::Inside
        };
        let (keep, region) = match (inside(&fwd), inside(&bwd)) {
            (true, false) => (fwd, bwd),
            (false, true) => (bwd, fwd),
            _ => {
                return Err(Error::ToleranceUnachievable(
                    "region cut does not separate the anchor".into(),
                ))
            }
        };
        if region.len() < 3 {
            continue;
        }
        ring = keep.iter().map(|v| v.0).collect();
        tags = keep.iter().map(|v| v.1).collect();

        let outline: Vec<Point> = region.iter().map(|v| v.0).collect();
        let otags: Vec<Tag> = region.iter().map(|v| v.1).collect();
        let mut boundary = curve.clone();
        let closing_start = cut.len() - 1;
        let mut attachment = Vec::new();
        for i in closing_start..outline.len() {
            let (a, b) = (outline[i], outline[(i + 1) % outline.len()]);
            if a != b {
                boundary.push(CurvePiece::segment(a, b));
                if !matches!(otags[i], Tag::Curve { .. })
                    || !matches!(otags[(i + 1) % outline.len()], Tag::Curve { .. })
                {
                    attachment.push([a, b]);
                }
            }
        }
        regions.push(DeadRegion {
            anchor,
            window: u,
            curve_len: curve.len(),
            boundary,
            attachment,
            tolerance: tol,
            outline,
            tags: otags,
            source_base: base,
        });
    }
    Ok(regions)
}

/// Point location against a region with boundary band `tolerance`.
pub fn region_contains(region: &DeadRegion, p: Point) -> Location {
    let band = region.tolerance;
    if p == region.anchor {
        return Location::Outside;
    }
    for piece in region.curve() {
        if let CurvePiece::Arc { center, radius, .. } = piece {
            let d = (p.dist(*center) - radius).abs();
            if d <= band {
                let flat = piece.flatten(band);
                let pts: Vec<Point> = flat.iter().map(|q| q.1).collect();
                if dist_polyline(&pts, p) <= 2.0 * band {
                    return Location::Boundary;
                }
            }
        }
    }
    let outline = region.outline();
    if dist_to_ring(&outline, p) <= band {
        return Location::Boundary;
    }
    locate_in_ring(&outline, p, 0.0)
}

fn dist_polyline(pts: &[Point], p: Point) -> f64 {
    pts.windows(2)
        .map(|w| crate::geom::dist_point_segment(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Classification of `p` against a list of regions.
pub fn regions_contain(regions: &[DeadRegion], p: Point) -> Location {
    let mut out = Location::Outside;
    for r in regions {
        match region_contains(r, p) {
            Location::Inside => return Location::Inside,
            Location::Boundary => out = Location::Boundary,
            Location::Outside => {}
        }
    }
    out
}

fn to_geo(ring: &[Point]) -> Polygon<f64> {
    let mut coords: Vec<Coord<f64>> = ring.iter().map(|p| Coord { x: p.x, y: p.y }).collect();
    coords.push(coords[0]);
    Polygon::new(LineString::new(coords), vec![])
}

fn union_of(regions: &[DeadRegion]) -> MultiPolygon<f64> {
    regions
        .iter()
        .map(|r| r.outline())
        .filter(|o| o.len() >= 3)
        .fold(MultiPolygon::new(vec![]), |acc, o| {
            acc.union(&MultiPolygon::new(vec![to_geo(&o)]))
        })
}

/// Area of the symmetric difference of the unions of two region lists.
pub fn symmetric_difference_area(a: &[DeadRegion], b: &[DeadRegion]) -> f64 {
    use geo::Area;
    union_of(a).xor(&union_of(b)).unsigned_area()
}

/// Polygon minus the union of the regions, flattened and tagged with the
/// source curve of every curved boundary vertex.
pub fn subtract_regions(
    poly: &SimplePolygon,
    regions: &[DeadRegion],
    delta: f64,
) -> Result<DiscretizedDomain> {
    if regions.is_empty() {
        return DiscretizedDomain::whole(poly, delta);
    }
    let eps = 1e-7 * poly.diameter();
    let band = poly.boundary_tol();

    // global source numbering, grouped by anchor
    let mut sources: Vec<CurvePiece> = Vec::new();
    let mut candidates: Vec<(Point, Tag)> = Vec::new();
    let mut group_base: Vec<(Point, usize)> = Vec::new();
    for r in regions {
        let base = match group_base.iter().find(|(a, _)| *a == r.anchor) {
            Some(&(_, b)) => b,
            None => {
                let b = sources.len() - r.source_base.min(sources.len());
                group_base.push((r.anchor, b));
                b
            }
        };
        let id = base + r.source_base;
        while sources.len() < id {
            sources.push(CurvePiece::segment(Point::ZERO, Point::new(1.0, 0.0)));
        }
        for (k, piece) in r.curve().iter().enumerate() {
            if sources.len() == id + k {
                sources.push(piece.clone());
            } else {
                sources[id + k] = piece.clone();
            }
        }
        let outline = r.outline();
        for (i, p) in outline.iter().enumerate() {
            let tag = match r.tags.get(i) {
                Some(Tag::Curve { source, local }) => Tag::Curve {
                    source: base + source,
                    local: *local,
                },
                _ => Tag::Fixed,
            };
            candidates.push((*p, tag));
        }
    }

    let p = to_geo(poly.vertices());
    let cut = MultiPolygon::new(
        regions
            .iter()
            .map(|r| to_geo(&cutter(poly, &r.outline(), 0.25 * eps)))
            .collect(),
    );
    let diff = p.difference(&cut);
    let mut components = Vec::new();
    for g in diff.0 {
        if !g.interiors().is_empty() {
            return Err(Error::Triangulation("domain has holes".into()));
        }
        let mut coords: Vec<Point> = g
            .exterior()
            .0
            .iter()
            .map(|c| Point::new(c.x, c.y))
            .collect();
        if coords.len() > 1 && coords.first() == coords.last() {
            coords.pop();
        }
        let mut ring = Vec::with_capacity(coords.len());
        let mut tags = Vec::with_capacity(coords.len());
        for q in coords {
            let (pt, tag) = match_vertex(q, poly, &candidates, eps);
            if ring.last() != Some(&pt) {
                ring.push(pt);
                tags.push(tag);
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
            tags.pop();
        }
        if ring.len() < 3 || crate::geom::signed_area2(&ring).abs() <= eps * eps {
            continue;
        }
        components.push(Component::new(ring, tags, band)?);
    }
    if components.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(DiscretizedDomain {
        polygon: poly.clone(),
        components,
        sources,
        removed: regions.iter().map(|r| r.outline()).collect(),
        delta,
    })
}

/// Region outline with its points on the polygon boundary pushed outward,
/// so that the cut crosses the boundary instead of grazing it.
fn cutter(poly: &SimplePolygon, outline: &[Point], push: f64) -> Vec<Point> {
    let band = 10.0 * poly.boundary_tol();
    outline
        .iter()
        .map(|&p| {
            if poly.vertices().contains(&p) {
                return p;
            }
            let (d, a, b) = poly
                .edges()
                .map(|(a, b)| (crate::geom::dist_point_segment(p, a, b), a, b))
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .expect("polygon has edges");
            if d > band {
                return p;
            }
            let e = (b - a).normalized();
            p + Point::new(e.y, -e.x) * push
        })
        .collect()
}

fn match_vertex(
    q: Point,
    poly: &SimplePolygon,
    candidates: &[(Point, Tag)],
    eps: f64,
) -> (Point, Tag) {
    if let Some(v) = poly.vertices().iter().find(|v| v.dist(q) <= eps) {
        return (*v, Tag::Fixed);
    }
    let mut best: Option<(f64, Point, Tag)> = None;
    for &(p, tag) in candidates {
        let d = p.dist(q);
        if d <= eps && best.is_none_or(|b| d < b.0) {
            best = Some((d, p, tag));
        }
    }
    match best {
        Some((_, p, tag)) => (p, tag),
        None => (q, Tag::Fixed),
    }
}

/// Dead regions of both endpoints and the resulting domain.
pub fn domain_for(
    poly: &SimplePolygon,
    ds: &[DeadRegion],
    dt: &[DeadRegion],
    delta: f64,
) -> Result<DiscretizedDomain> {
    let all: Vec<DeadRegion> = ds.iter().chain(dt.iter()).cloned().collect();
    subtract_regions(poly, &all, delta)
}

/// Chain length helper for tests and diagnostics.
pub fn chain_from_path(path: &PiecewisePath) -> Vec<CurvePiece> {
    path.reverse().pieces().to_vec()
}
