//! Construction-free evidence: randomized path search, local shortening,
//! a closed-form classifier for one-reflex polygons, and grid comparisons
//! against the dead-region construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dead_region::{build_dead_region, region_contains, DeadRegion};
use crate::error::{Error, Result};
use crate::geodesic::shortest_path_simple;
use crate::geom::{dist_to_ring, locate_in_ring, turn_angle, Location, Point, SimplePolygon};
use crate::path::{CurvePiece, PiecewisePath};
use crate::verify::{normal_margins, verify_all, VerifyConfig};

/// Limits and seed of a randomized search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_candidates: usize,
    /// Hill-climbing moves per candidate.
    pub max_refinements: usize,
    pub seed: u64,
    /// Initial perturbation size; 0 picks 5% of the polygon diameter.
    pub step: f64,
    /// Start with a perturbed candidate instead of the plain geodesic.
    #[serde(default)]
    pub exclude_geodesic: bool,
    /// Accept only paths no longer than this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_length: Option<f64>,
}

impl SearchBudget {
    pub const DEFAULT_SEED: u64 = 0x1c_5eed;

    pub fn new(max_candidates: usize, seed: u64) -> Self {
        SearchBudget {
            max_candidates,
            max_refinements: 120,
            seed,
            step: 0.0,
            exclude_geodesic: false,
            max_length: None,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::new(10_000, Self::DEFAULT_SEED)
    }
}

const QUICK_N: usize = 96;

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Control polygon whose interior corners are rounded by circular fillets;
/// `fillet[i]` is the fraction of the available tangent length used at
/// corner `i`.
#[derive(Clone, Debug)]
struct Sketch {
    pts: Vec<Point>,
    fillet: Vec<f64>,
}

impl Sketch {
    fn polyline(pts: Vec<Point>) -> Self {
        let n = pts.len();
        Sketch {
            pts,
            fillet: vec![0.0; n],
        }
    }

    fn build(&self) -> Option<PiecewisePath> {
        let n = self.pts.len();
        let mut pieces = Vec::with_capacity(2 * n);
        let mut cur = self.pts[0];
        for i in 1..n - 1 {
            let (a, c, b) = (self.pts[i - 1], self.pts[i], self.pts[i + 1]);
            let (la, lb) = (a.dist(c), c.dist(b));
            if la == 0.0 || lb == 0.0 {
                return None;
            }
            let shared = |j: usize| j > 0 && j < n - 1 && self.fillet[j] > 0.0;
            let ba = if shared(i - 1) { 0.5 * la } else { la };
            let bb = if shared(i + 1) { 0.5 * lb } else { lb };
            let (d1, d2) = ((c - a) / la, (b - c) / lb);
            let theta = turn_angle(d1, d2);
            let len = self.fillet[i].clamp(0.0, 1.0) * ba.min(bb);
            let r = len / (0.5 * theta.abs()).tan();
            if theta.abs() < 1e-12 || len <= 0.0 || !r.is_finite() || r <= 0.0 {
                pieces.push(CurvePiece::segment(cur, c));
                cur = c;
                continue;
            }
            let entry = c - d1 * len;
            let center = entry + d1.perp() * (r * theta.signum());
            let arc = CurvePiece::arc_from(center, entry, theta);
            pieces.push(CurvePiece::segment(cur, entry));
            cur = arc.end();
            pieces.push(arc);
        }
        pieces.push(CurvePiece::segment(cur, self.pts[n - 1]));
        PiecewisePath::new(pieces).ok()
    }
}

/// Path lies in the closed polygon.
pub fn path_inside(poly: &SimplePolygon, path: &PiecewisePath, delta: f64) -> bool {
    let flat = path.flatten(delta);
    flat.windows(2).all(|w| !poly.segment_clips(w[0].1, w[1].1))
}

/// Oriented circle: travel is counter-clockwise when `rho > 0`, clockwise
/// when `rho < 0`; a point when `rho == 0`.
#[derive(Clone, Copy)]
struct Disk {
    center: Point,
    rho: f64,
}

impl Disk {
    fn touch(&self, u: Point) -> Point {
        self.center - u.perp() * self.rho
    }
}

/// Direction of the directed common tangent from `a` to `b`.
fn bitangent(a: Disk, b: Disk) -> Option<Point> {
    let d = b.center - a.center;
    let len = d.norm();
    let delta = b.rho - a.rho;
    if len == 0.0 || delta.abs() > len {
        return None;
    }
    Some(Point::polar(d.angle() + (-delta / len).asin()))
}

fn arc_between(disk: Disk, from: Point, to: Point) -> Option<CurvePiece> {
    let sense = disk.rho.signum();
    let (a0, a1) = ((from - disk.center).angle(), (to - disk.center).angle());
    let mut sweep = (sense * (a1 - a0)).rem_euclid(std::f64::consts::TAU);
    if sweep > std::f64::consts::TAU - 1e-9 {
        sweep = 0.0;
    }
    (sweep > 0.0).then(|| CurvePiece::arc_from(disk.center, from, sense * sweep))
}

/// Rounding of every geodesic bend by an incoming and an outgoing arc that
/// both pass through the bend vertex; each arc is given by its center.
#[derive(Clone, Debug)]
pub struct Detour {
    pub c_in: Vec<Point>,
    pub c_out: Vec<Point>,
}

impl Detour {
    pub fn build(&self, g: &[Point]) -> Option<PiecewisePath> {
        let mut pieces = Vec::new();
        let mut disk = Disk {
            center: g[0],
            rho: 0.0,
        };
        let mut cur = g[0];
        let enter =
            |pieces: &mut Vec<CurvePiece>, disk: Disk, cur: Point, next: Disk| -> Option<Point> {
                let u = bitangent(disk, next)?;
                let (exit, entry) = (disk.touch(u), next.touch(u));
                if disk.rho != 0.0 {
                    pieces.extend(arc_between(disk, cur, exit));
                }
                pieces.push(CurvePiece::segment(exit, entry));
                Some(entry)
            };
        for i in 0..self.c_in.len() {
            let (prev, v, next) = (g[i], g[i + 1], g[i + 2]);
            let sense = turn_angle(v - prev, next - v).signum();
            let c_in = Disk {
                center: self.c_in[i],
                rho: sense * self.c_in[i].dist(v),
            };
            let c_out = Disk {
                center: self.c_out[i],
                rho: sense * self.c_out[i].dist(v),
            };
            let entry = enter(&mut pieces, disk, cur, c_in)?;
            pieces.extend(arc_between(c_in, entry, v));
            disk = c_out;
            cur = v;
        }
        let t = Disk {
            center: g[g.len() - 1],
            rho: 0.0,
        };
        enter(&mut pieces, disk, cur, t)?;
        PiecewisePath::new(pieces).ok()
    }
}

/// Worst margin and summed squared violation; the sum guides the search.
/// A length cap counts as one more margin.
#[derive(Clone, Copy, Debug)]
struct Fitness {
    worst: f64,
    violation: f64,
}

impl Fitness {
    fn of(path: &PiecewisePath, cap: Option<f64>) -> Self {
        let mut m = normal_margins(path, QUICK_N);
        if let Some(c) = cap {
            m.push(c - path.length());
        }
        Fitness {
            worst: m.iter().copied().fold(f64::INFINITY, f64::min),
            violation: m.iter().map(|&x| x.min(0.0).powi(2)).sum(),
        }
    }

    fn better(&self, o: &Fitness) -> bool {
        self.violation < o.violation || (self.violation == o.violation && self.worst > o.worst)
    }
}

struct Searcher<'a> {
    poly: &'a SimplePolygon,
    geo: Vec<Point>,
    diam: f64,
    tol: f64,
    budget: SearchBudget,
}

impl Searcher<'_> {
    fn score(&self, sk: &Sketch) -> Option<(PiecewisePath, Fitness)> {
        let path = sk.build()?;
        if !path_inside(self.poly, &path, 1e-4 * self.diam) {
            return None;
        }
        let f = Fitness::of(&path, self.budget.max_length);
        Some((path, f))
    }

    fn initial(&self, rng: &mut ChaCha8Rng, kind: usize, step: f64) -> Sketch {
        let g = &self.geo;
        let jitter = |rng: &mut ChaCha8Rng, p: Point, amp: f64| {
            p + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp
        };
        match kind {
            0 => {
                let amp = step * rng.gen::<f64>();
                let mut pts = vec![g[0]];
                for w in g.windows(2) {
                    for _ in 0..rng.gen_range(0..3) {
                        let q = w[0].lerp(w[1], rng.gen());
                        pts.push(jitter(rng, q, amp));
                    }
                    pts.push(w[1]);
                }
                let n = pts.len();
                for p in pts.iter_mut().take(n - 1).skip(1) {
                    *p = jitter(rng, *p, 0.25 * amp);
                }
                Sketch::polyline(pts)
            }
            _ => {
                let mut sk = Sketch::polyline(vec![g[0]]);
                for i in 1..g.len() - 1 {
                    let (prev, v, next) = (g[i - 1], g[i], g[i + 1]);
                    // rounding a bend pushes the path to the outside of the turn
                    let side = -turn_angle(v - prev, next - v).signum();
                    let out_in = (v - prev).normalized().perp() * side;
                    let out_out = (next - v).normalized().perp() * side;
                    let a = v.lerp(prev, rng.gen_range(0.05..0.7))
                        + out_in * (rng.gen_range(0.0..0.4) * v.dist(prev));
                    let b = v.lerp(next, rng.gen_range(0.05..0.7))
                        + out_out * (rng.gen_range(0.0..0.4) * v.dist(next));
                    sk.pts.extend([a, v, b]);
                    let fv = if rng.gen_bool(0.5) {
                        0.0
                    } else {
                        rng.gen_range(0.0..0.3)
                    };
                    sk.fillet
                        .extend([rng.gen_range(0.3..1.0), fv, rng.gen_range(0.3..1.0)]);
                }
                if g.len() == 2 {
                    let mid = g[0].lerp(g[1], rng.gen_range(0.2..0.8));
                    let amp = step * rng.gen::<f64>();
                    sk.pts.push(jitter(rng, mid, amp));
                    sk.fillet.push(rng.gen());
                }
                sk.pts.push(g[g.len() - 1]);
                sk.fillet.push(0.0);
                sk
            }
        }
    }

    /// Random-restart hill climbing on the quick margin.
    fn climb(
        &self,
        rng: &mut ChaCha8Rng,
        mut sk: Sketch,
        step0: f64,
    ) -> Option<(PiecewisePath, Fitness)> {
        let (mut path, mut best) = self.score(&sk)?;
        let mut step = step0;
        let floor = 1e-7 * self.diam;
        let n = sk.pts.len();
        let curved = sk.fillet.iter().any(|&f| f > 0.0);
        for _ in 0..self.budget.max_refinements {
            if best.worst >= 0.0 || n <= 2 {
                break;
            }
            let mut cand = sk.clone();
            let i = rng.gen_range(1..n - 1);
            if curved && rng.gen_bool(0.3) {
                cand.fillet[i] = (cand.fillet[i] + rng.gen_range(-0.3..0.3)).clamp(0.0, 1.0);
            } else {
                cand.pts[i] = cand.pts[i]
                    + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * step;
            }
            match self.score(&cand) {
                Some((p, m)) if m.better(&best) => {
                    sk = cand;
                    path = p;
                    best = m;
                    step *= 1.5;
                }
                _ => step = (step * 0.8).max(floor),
            }
        }
        Some((path, best))
    }

    fn score_detour(&self, d: &Detour) -> Option<(PiecewisePath, Fitness)> {
        let path = d.build(&self.geo)?;
        if !path_inside(self.poly, &path, 1e-4 * self.diam) {
            return None;
        }
        let f = Fitness::of(&path, self.budget.max_length);
        Some((path, f))
    }

    /// Random center near a landmark: a geodesic vertex on the given side of
    /// bend `i`, or anywhere in the bounding box.
    fn center(&self, rng: &mut ChaCha8Rng, i: usize, ahead: bool) -> Point {
        let g = &self.geo;
        let pool: Vec<Point> = if ahead {
            g[i + 2..].to_vec()
        } else {
            g[..=i].to_vec()
        };
        if rng.gen_bool(0.8) {
            let base = pool[rng.gen_range(0..pool.len())];
            let amp = self.diam * 0.3 * rng.gen::<f64>().powi(2);
            base + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp
        } else {
            let (lo, hi) = self.poly.bounds();
            Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y))
        }
    }

    fn climb_detour(&self, rng: &mut ChaCha8Rng) -> Option<(PiecewisePath, Fitness)> {
        let k = self.geo.len() - 2;
        let mut start = None;
        for _ in 0..8 {
            let d = Detour {
                c_in: (0..k).map(|i| self.center(rng, i, true)).collect(),
                c_out: (0..k).map(|i| self.center(rng, i, false)).collect(),
            };
            if let Some(sc) = self.score_detour(&d) {
                start = Some((d, sc));
                break;
            }
        }
        let (mut d, (mut path, mut best)) = start?;
        let mut step = 0.05 * self.diam;
        let floor = 1e-9 * self.diam;
        for _ in 0..5 * self.budget.max_refinements {
            if best.worst >= 0.0 {
                break;
            }
            let mut cand = d.clone();
            let i = rng.gen_range(0..k);
            let x = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * step;
            if rng.gen_bool(0.5) {
                cand.c_in[i] = cand.c_in[i] + x;
            } else {
                cand.c_out[i] = cand.c_out[i] + x;
            }
            match self.score_detour(&cand) {
                Some((p, m)) if m.better(&best) => {
                    d = cand;
                    path = p;
                    best = m;
                    step = (step * 1.5).min(0.2 * self.diam);
                }
                _ => step = (step * 0.9).max(floor),
            }
        }
        Some((path, best))
    }

    fn short_enough(&self, path: &PiecewisePath) -> bool {
        self.budget.max_length.is_none_or(|c| path.length() <= c)
    }

    fn verified(&self, path: &PiecewisePath) -> bool {
        let cfg = VerifyConfig::for_diameter(self.diam);
        matches!(verify_all(path, cfg), Ok(r) if r.iter().all(|x| x.pass))
    }

    fn candidate(&self, index: usize) -> Option<PiecewisePath> {
        if index == 0 && !self.budget.exclude_geodesic {
            let path = PiecewisePath::from_polyline(&self.geo).ok()?;
            return (self.short_enough(&path) && self.verified(&path)).then_some(path);
        }
        let mut rng = rng_for(self.budget.seed, index);
        let step = if self.budget.step > 0.0 {
            self.budget.step
        } else {
            0.05 * self.diam
        };
        let kind = index % 6;
        let bends = self.geo.len() > 2;
        let (path, m) = match kind {
            0 | 2 | 4 if bends => self.climb_detour(&mut rng)?,
            5 => self.score(&chaikin(&self.initial(&mut rng, 1, step), &mut rng, step))?,
            1 => {
                let sk = self.initial(&mut rng, 0, step);
                self.climb(&mut rng, sk, 0.2 * step)?
            }
            _ => {
                let sk = self.initial(&mut rng, 1, step);
                self.climb(&mut rng, sk, 0.2 * step)?
            }
        };
        if m.worst < -self.tol || !self.short_enough(&path) {
            return None;
        }
        self.verified(&path).then_some(path)
    }
}

/// Corner-cut refinement of a jittered control polygon.
fn chaikin(sk: &Sketch, rng: &mut ChaCha8Rng, step: f64) -> Sketch {
    let n = sk.pts.len();
    let mut pts: Vec<Point> = sk
        .pts
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if i == 0 || i == n - 1 {
                p
            } else {
                p + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (0.2 * step)
            }
        })
        .collect();
    for _ in 0..4 {
        let mut next = vec![pts[0]];
        for w in pts.windows(2) {
            next.push(w[0].lerp(w[1], 0.25));
            next.push(w[0].lerp(w[1], 0.75));
        }
        next.push(pts[pts.len() - 1]);
        next.dedup();
        pts = next;
    }
    Sketch::polyline(pts)
}

/// First verified increasing-chords path among randomized candidates, or
/// `None` within the budget.
pub fn falsification_search(
    poly: &SimplePolygon,
    s: Point,
    t: Point,
    budget: SearchBudget,
) -> Option<PiecewisePath> {
    falsification_search_indexed(poly, s, t, budget).map(|(_, p)| p)
}

/// [`falsification_search`] with the index of the successful candidate.
pub fn falsification_search_indexed(
    poly: &SimplePolygon,
    s: Point,
    t: Point,
    budget: SearchBudget,
) -> Option<(usize, PiecewisePath)> {
    if s == t || poly.contains(s) == Location::Outside || poly.contains(t) == Location::Outside {
        return None;
    }
    let geo = shortest_path_simple(poly, s, t).ok()?;
    // nothing in the polygon is shorter than the geodesic
    if budget.max_length.is_some_and(|c| c < geo.length()) {
        return None;
    }
    let mut pts: Vec<Point> = geo.pieces().iter().map(|p| p.start()).collect();
    pts.push(geo.end());
    let diam = poly.diameter();
    let searcher = Searcher {
        poly,
        geo: pts,
        diam,
        tol: VerifyConfig::REL_TOL * diam,
        budget,
    };
    (0..budget.max_candidates).find_map(|i| searcher.candidate(i).map(|p| (i, p)))
}

/// Point lies in the closed domain: inside the polygon and not strictly
/// inside a region beyond its band.
fn in_domain(
    poly: &SimplePolygon,
    regions: &[DeadRegion],
    outlines: &[Vec<Point>],
    p: Point,
) -> bool {
    if poly.contains(p) == Location::Outside {
        return false;
    }
    regions.iter().zip(outlines).all(|(r, o)| {
        locate_in_ring(o, p, 0.0) != Location::Inside || dist_to_ring(o, p) <= r.tolerance
    })
}

fn segment_in_domain(
    poly: &SimplePolygon,
    regions: &[DeadRegion],
    outlines: &[Vec<Point>],
    a: Point,
    b: Point,
) -> bool {
    if poly.segment_clips(a, b) {
        return false;
    }
    let steps = ((a.dist(b) / (1e-3 * poly.diameter())).ceil() as usize).clamp(1, 4000);
    (0..=steps).all(|k| in_domain(poly, regions, outlines, a.lerp(b, k as f64 / steps as f64)))
}

/// Chord shortcuts and corner slides that keep the path verified and
/// inside the domain; the length never increases.
pub fn local_shortening(
    path: &PiecewisePath,
    poly: &SimplePolygon,
    regions: &[DeadRegion],
    budget: SearchBudget,
) -> PiecewisePath {
    let outlines: Vec<Vec<Point>> = regions.iter().map(|r| r.outline()).collect();
    let diam = poly.diameter();
    let cfg = VerifyConfig {
        n: 4000,
        tol: VerifyConfig::REL_TOL * diam,
    };
    let ok = |p: &PiecewisePath| matches!(verify_all(p, cfg), Ok(r) if r.iter().all(|x| x.pass));
    let mut rng = rng_for(budget.seed, usize::MAX);
    let mut best = path.clone();
    let mut step = if budget.step > 0.0 {
        budget.step
    } else {
        0.05 * diam
    };
    for _ in 0..budget.max_refinements {
        let joints = best.joints();
        let mut params: Vec<f64> = vec![0.0];
        params.extend(joints.iter().copied());
        params.push(best.length());
        let cand = if rng.gen_bool(0.5) || params.len() < 3 {
            // chord shortcut between two random parameters
            let (mut a, mut b) = (
                rng.gen_range(0.0..=best.length()),
                rng.gen_range(0.0..=best.length()),
            );
            if rng.gen_bool(0.5) {
                a = params[rng.gen_range(0..params.len())];
                b = params[rng.gen_range(0..params.len())];
            }
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let (pa, pb) = (best.point_at_unchecked(a), best.point_at_unchecked(b));
            if b - a <= 1e-12 * diam || !segment_in_domain(poly, regions, &outlines, pa, pb) {
                step *= 0.9;
                continue;
            }
            splice(&best, a, b, &[pa, pb])
        } else {
            // slide a corner between two segments
            let k = rng.gen_range(1..params.len() - 1);
            let s0 = params[k];
            let (i, _) = best.locate(s0);
            if i == 0 {
                continue;
            }
            let (before, after) = (&best.pieces()[i - 1], &best.pieces()[i]);
            let (CurvePiece::Segment { a: pa, .. }, CurvePiece::Segment { b: pb, .. }) =
                (before, after)
            else {
                continue;
            };
            let c = before.end()
                + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * step;
            if !segment_in_domain(poly, regions, &outlines, *pa, c)
                || !segment_in_domain(poly, regions, &outlines, c, *pb)
            {
                step = (step * 0.8).max(1e-12 * diam);
                continue;
            }
            splice(&best, params[k - 1], params[k + 1], &[*pa, c, *pb])
        };
        match cand {
            Some(c) if c.length() < best.length() && ok(&c) => {
                best = c;
                step *= 1.2;
            }
            _ => step = (step * 0.8).max(1e-12 * diam),
        }
    }
    best
}

/// Replaces the part of `path` between parameters `a` and `b` by a
/// polyline.
fn splice(path: &PiecewisePath, a: f64, b: f64, poly: &[Point]) -> Option<PiecewisePath> {
    let mut pieces = Vec::new();
    if a > 0.0 {
        pieces.extend(path.sub_path(0.0, a).ok()?.pieces().iter().cloned());
    }
    for w in poly.windows(2) {
        pieces.push(CurvePiece::segment(w[0], w[1]));
    }
    if b < path.length() {
        pieces.extend(
            path.sub_path(b, path.length())
                .ok()?
                .pieces()
                .iter()
                .cloned(),
        );
    }
    PiecewisePath::new(pieces).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Dead,
    Alive,
}

fn sees(poly: &SimplePolygon, a: Point, b: Point) -> bool {
    !poly.segment_clips(a, b)
}

/// Closed-form classification in a polygon with one reflex vertex: alive
/// iff an increasing-chords path joins `p` and `anchor`.
pub fn single_reflex_membership(
    poly: &SimplePolygon,
    anchor: Point,
    p: Point,
) -> Result<Membership> {
    let reflex = poly.reflex_vertices();
    if reflex.len() != 1 {
        return Err(Error::NotSingleReflexInstance(format!(
            "{} reflex vertices",
            reflex.len()
        )));
    }
    for q in [anchor, p] {
        if poly.contains(q) != Location::Inside {
            return Err(Error::NotSingleReflexInstance(format!(
                "{q} is not interior"
            )));
        }
    }
    if p == anchor || sees(poly, p, anchor) {
        return Ok(Membership::Alive);
    }
    let v = poly.vertex(reflex[0]);
    if !(sees(poly, p, v) && sees(poly, v, anchor)) {
        return Err(Error::NotSingleReflexInstance(
            "geodesic does not bend at the reflex vertex alone".into(),
        ));
    }
    if behind_circle(poly, anchor, v, p) || behind_circle(poly, p, v, anchor) {
        Ok(Membership::Dead)
    } else {
        Ok(Membership::Alive)
    }
}

/// `q` is cut off from `a` by the circle about `a` through `v`, swept from
/// `v` into the shadow until it meets the boundary.
fn behind_circle(poly: &SimplePolygon, a: Point, v: Point, q: Point) -> bool {
    let r = a.dist(v);
    if a.dist(q) >= r {
        return false;
    }
    let sigma = (v - a).cross(q - a).signum();
    if sigma == 0.0 {
        return false;
    }
    let th0 = (v - a).angle();
    let at = |phi: f64| a + Point::polar(th0 + sigma * phi) * r;
    if poly.contains(at(1e-6)) == Location::Outside {
        return false;
    }
    // first boundary crossing of the circle after v
    let n = poly.len();
    let mut hit: Option<(f64, usize)> = None;
    for e in 0..n {
        let (c, d) = (poly.vertex(e), poly.vertex((e + 1) % n));
        let dir = d - c;
        let f = c - a;
        let (qa, qb, qc) = (dir.dot(dir), 2.0 * f.dot(dir), f.dot(f) - r * r);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            continue;
        }
        for sgn in [-1.0, 1.0] {
            let u = (-qb + sgn * disc.sqrt()) / (2.0 * qa);
            if !(0.0..=1.0).contains(&u) {
                continue;
            }
            let x = c + dir * u;
            let phi = (sigma * ((x - a).angle() - th0)).rem_euclid(std::f64::consts::TAU);
            if phi > 1e-9 && hit.is_none_or(|h| phi < h.0) {
                hit = Some((phi, e));
            }
        }
    }
    let Some((phi_end, e)) = hit else {
        return true;
    };
    let steps = 512;
    let arc: Vec<Point> = (0..=steps)
        .map(|k| at(phi_end * k as f64 / steps as f64))
        .collect();
    let iv = (0..n).find(|&i| poly.vertex(i) == v).unwrap_or(0);
    let mut fwd = arc.clone();
    let mut j = (e + 1) % n;
    while j != iv {
        fwd.push(poly.vertex(j));
        j = (j + 1) % n;
    }
    let mut bwd = arc;
    let mut j = e;
    while j != iv {
        bwd.push(poly.vertex(j));
        j = (j + n - 1) % n;
    }
    let ring = if locate_in_ring(&fwd, a, 0.0) == Location::Inside {
        bwd
    } else {
        fwd
    };
    locate_in_ring(&ring, q, 0.0) == Location::Inside
}

/// Per-cell comparison of construction and search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridCell {
    pub point: Point,
    pub construction: Membership,
    pub oracle: Membership,
    /// Distance to the nearest region boundary involved; absent when no
    /// region is involved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_distance: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridReport {
    pub anchor: Point,
    pub grid: usize,
    pub cells: Vec<GridCell>,
    /// Rows: construction alive/dead; columns: oracle alive/dead.
    pub matrix: [[usize; 2]; 2],
    pub agreement: f64,
    pub disagreements: Vec<Point>,
    pub band: f64,
    /// Every disagreement lies within `band` of a region boundary.
    pub disagreements_in_band: bool,
}

fn idx(m: Membership) -> usize {
    match m {
        Membership::Alive => 0,
        Membership::Dead => 1,
    }
}

/// Classifies the centers of a `grid`×`grid` lattice over the polygon
/// bounds: construction says dead when the cell lies in a region of the
/// anchor or the anchor lies in a region of the cell; the oracle says alive
/// when the search finds a verified path.
pub fn grid_comparison(
    poly: &SimplePolygon,
    anchor: Point,
    grid: usize,
    budget: SearchBudget,
    tol: f64,
) -> Result<GridReport> {
    let da = build_dead_region(poly, anchor, tol)?;
    let (lo, hi) = poly.bounds();
    let band = tol;
    let cells_in: Vec<Point> = (0..grid * grid)
        .map(|k| {
            let (i, j) = (k % grid, k / grid);
            Point::new(
                lo.x + (i as f64 + 0.5) * (hi.x - lo.x) / grid as f64,
                lo.y + (j as f64 + 0.5) * (hi.y - lo.y) / grid as f64,
            )
        })
        .filter(|&p| poly.contains(p) == Location::Inside && p.dist(anchor) > band)
        .collect();
    let cells: Vec<GridCell> = cells_in
        .par_iter()
        .map(|&p| -> Result<GridCell> {
            let dp = build_dead_region(poly, p, tol)?;
            let dead = da
                .iter()
                .any(|r| region_contains(r, p) != Location::Outside)
                || dp
                    .iter()
                    .any(|r| region_contains(r, anchor) != Location::Outside);
            let boundary_distance = da
                .iter()
                .map(|r| dist_to_ring(&r.outline(), p))
                .chain(dp.iter().map(|r| dist_to_ring(&r.outline(), anchor)))
                .reduce(f64::min);
            let found = falsification_search(poly, p, anchor, budget).is_some();
            Ok(GridCell {
                point: p,
                construction: if dead {
                    Membership::Dead
                } else {
                    Membership::Alive
                },
                oracle: if found {
                    Membership::Alive
                } else {
                    Membership::Dead
                },
                boundary_distance,
            })
        })
        .collect::<Result<_>>()?;
    let mut matrix = [[0usize; 2]; 2];
    let mut disagreements = Vec::new();
    let mut in_band = true;
    for c in &cells {
        matrix[idx(c.construction)][idx(c.oracle)] += 1;
        if c.construction != c.oracle {
            disagreements.push(c.point);
            in_band &= c.boundary_distance.is_some_and(|d| d <= band);
        }
    }
    let total = cells.len().max(1);
    Ok(GridReport {
        anchor,
        grid,
        agreement: (matrix[0][0] + matrix[1][1]) as f64 / total as f64,
        cells,
        matrix,
        disagreements,
        band,
        disagreements_in_band: in_band,
    })
}
