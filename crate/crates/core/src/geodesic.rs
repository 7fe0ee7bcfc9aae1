//! Funnel geodesics in triangulated rings, and constrained geodesics in
//! discretized domains whose curved boundary runs are snapped back onto the
//! exact source curves.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geom::{
    dist_point_segment, dist_to_ring, locate_in_ring, orient, segment_intersection, signed_area2,
    Location, Point, SegmentHit, SimplePolygon,
};
use crate::path::{CurvePiece, PiecewisePath};
use crate::triangulate::triangulate;

/// Origin of a discretized boundary vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tag {
    /// Polygon vertex or other fixed corner.
    Fixed,
    /// Sample of source curve `source` at local arc length `local`.
    Curve { source: usize, local: f64 },
}

/// Triangulated simple ring with per-vertex tags.
#[derive(Clone, Debug)]
pub struct Component {
    pub ring: Vec<Point>,
    pub tags: Vec<Tag>,
    triangles: Vec<[usize; 3]>,
    adjacency: Vec<Vec<usize>>,
    band: f64,
}

impl Component {
    pub fn new(ring: Vec<Point>, tags: Vec<Tag>, band: f64) -> Result<Self> {
        let (ring, tags) = if signed_area2(&ring) < 0.0 {
            (
                ring.into_iter().rev().collect(),
                tags.into_iter().rev().collect(),
            )
        } else {
            (ring, tags)
        };
        let triangles = triangulate(&ring)?;
        let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, t) in triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                edges.entry((a.min(b), a.max(b))).or_default().push(k);
            }
        }
        let mut adjacency = vec![Vec::new(); triangles.len()];
        let mut keys: Vec<_> = edges.into_iter().collect();
        keys.sort_by_key(|(k, _)| *k);
        for (_, ts) in keys {
            if ts.len() == 2 {
                adjacency[ts[0]].push(ts[1]);
                adjacency[ts[1]].push(ts[0]);
            }
        }
        Ok(Component {
            ring,
            tags,
            triangles,
            adjacency,
            band,
        })
    }

    /// Curve source of the edge from vertex `i` to `i + 1`, if both ends lie
    /// on the same source.
    pub fn edge_source(&self, i: usize) -> Option<usize> {
        let j = (i + 1) % self.ring.len();
        match (self.tags[i], self.tags[j]) {
            (Tag::Curve { source: a, .. }, Tag::Curve { source: b, .. }) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn locate(&self, p: Point) -> Location {
        locate_in_ring(&self.ring, p, self.band)
    }

    fn triangles_containing(&self, p: Point) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, t) in self.triangles.iter().enumerate() {
            let (a, b, c) = (self.ring[t[0]], self.ring[t[1]], self.ring[t[2]]);
            let inside = (orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0)
                || dist_point_segment(p, a, b) <= self.band
                || dist_point_segment(p, b, c) <= self.band
                || dist_point_segment(p, c, a) <= self.band;
            if inside {
                out.push(k);
            }
        }
        out
    }

    /// Funnel geodesic from `s` to `t`; returns vertices with tags.
    pub fn funnel(&self, s: Point, t: Point) -> Result<Vec<(Point, Tag)>> {
        let from = self.triangles_containing(s);
        let to = self.triangles_containing(t);
        if from.is_empty() {
            return Err(Error::PointOutside(s));
        }
        if to.is_empty() {
            return Err(Error::PointOutside(t));
        }
        if from.iter().any(|k| to.contains(k)) {
            return Ok(vec![(s, Tag::Fixed), (t, Tag::Fixed)]);
        }
        // multi-source breadth-first search over the dual tree
        let mut parent = vec![usize::MAX; self.triangles.len()];
        let mut queue = VecDeque::new();
        for &k in &from {
            parent[k] = k;
            queue.push_back(k);
        }
        let mut goal = None;
        while let Some(k) = queue.pop_front() {
            if to.contains(&k) {
                goal = Some(k);
                break;
            }
            for &m in &self.adjacency[k] {
                if parent[m] == usize::MAX {
                    parent[m] = k;
                    queue.push_back(m);
                }
            }
        }
        let goal = goal.ok_or(Error::DisconnectedEndpoints)?;
        let mut chain = vec![goal];
        while parent[*chain.last().unwrap()] != *chain.last().unwrap() {
            let k = *chain.last().unwrap();
            chain.push(parent[k]);
        }
        chain.reverse();

        // portals as (left, right) vertex indices
        let mut portals: Vec<(usize, usize)> = Vec::new();
        for w in chain.windows(2) {
            let ta = self.triangles[w[0]];
            let tb = self.triangles[w[1]];
            for e in 0..3 {
                let (x, y) = (ta[e], ta[(e + 1) % 3]);
                if tb.contains(&x) && tb.contains(&y) {
                    portals.push((y, x));
                    break;
                }
            }
        }
        let on = |p: Point, (l, r): (usize, usize)| {
            dist_point_segment(p, self.ring[l], self.ring[r]) <= self.band
        };
        while portals.first().is_some_and(|&q| on(s, q)) {
            portals.remove(0);
        }
        while portals.last().is_some_and(|&q| on(t, q)) {
            portals.pop();
        }

        const S: usize = usize::MAX - 1;
        const T: usize = usize::MAX;
        let mut nodes: Vec<(usize, usize)> = vec![(S, S)];
        nodes.extend(portals);
        nodes.push((T, T));
        let pt = |id: usize| match id {
            S => s,
            T => t,
            i => self.ring[i],
        };

        let mut out: Vec<usize> = vec![S];
        let (mut apex, mut left, mut right) = (S, S, S);
        let (mut left_i, mut right_i) = (0usize, 0usize);
        let mut i = 1;
        while i < nodes.len() {
            let (pl, pr) = nodes[i];
            let a = pt(apex);
            // right side
            if orient(a, pt(right), pt(pr)) >= 0 {
                if pt(apex) == pt(right) || orient(a, pt(left), pt(pr)) < 0 {
                    right = pr;
                    right_i = i;
                } else {
                    apex = left;
                    out.push(apex);
                    right = apex;
                    right_i = left_i;
                    i = left_i + 1;
                    continue;
                }
            }
            // left side
            if orient(a, pt(left), pt(pl)) <= 0 {
                if pt(apex) == pt(left) || orient(a, pt(right), pt(pl)) > 0 {
                    left = pl;
                    left_i = i;
                } else {
                    apex = right;
                    out.push(apex);
                    left = apex;
                    left_i = right_i;
                    i = right_i + 1;
                    continue;
                }
            }
            i += 1;
        }
        if *out.last().unwrap() != T {
            out.push(T);
        }
        let mut verts: Vec<(Point, Tag)> = Vec::with_capacity(out.len());
        for id in out {
            let v = match id {
                S => (s, Tag::Fixed),
                T => (t, Tag::Fixed),
                i => (self.ring[i], self.tags[i]),
            };
            if verts.last().map(|w| w.0) != Some(v.0) {
                verts.push(v);
            }
        }
        Ok(drop_collinear(verts))
    }
}

/// Removes interior vertices where the path continues straight.
fn drop_collinear(verts: Vec<(Point, Tag)>) -> Vec<(Point, Tag)> {
    let mut out: Vec<(Point, Tag)> = Vec::with_capacity(verts.len());
    for v in verts {
        while out.len() >= 2 {
            let a = out[out.len() - 2].0;
            let b = out[out.len() - 1].0;
            if orient(a, b, v.0) == 0 && (b - a).dot(v.0 - b) > 0.0 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(v);
    }
    out
}

/// Geodesic between two points of a simple polygon.
pub fn shortest_path_simple(poly: &SimplePolygon, s: Point, t: Point) -> Result<PiecewisePath> {
    for p in [s, t] {
        if poly.contains(p) == Location::Outside {
            return Err(Error::PointOutside(p));
        }
    }
    if s == t {
        return Err(Error::DegenerateEndpoints);
    }
    if !poly.segment_clips(s, t) {
        return PiecewisePath::new(vec![CurvePiece::segment(s, t)]);
    }
    let comp = Component::new(
        poly.vertices().to_vec(),
        vec![Tag::Fixed; poly.len()],
        poly.boundary_tol(),
    )?;
    let verts = comp.funnel(s, t)?;
    let pts: Vec<Point> = verts.iter().map(|v| v.0).collect();
    PiecewisePath::from_polyline(&pts)
}

/// Polygon with dead regions removed, flattened to tagged rings.
#[derive(Clone, Debug)]
pub struct DiscretizedDomain {
    pub polygon: SimplePolygon,
    pub components: Vec<Component>,
    /// Curves referenced by [`Tag::Curve`].
    pub sources: Vec<CurvePiece>,
    /// Flattened outlines of the removed regions.
    pub removed: Vec<Vec<Point>>,
    pub delta: f64,
}

impl DiscretizedDomain {
    /// The polygon itself as a single component.
    pub fn whole(poly: &SimplePolygon, delta: f64) -> Result<Self> {
        let comp = Component::new(
            poly.vertices().to_vec(),
            vec![Tag::Fixed; poly.len()],
            poly.boundary_tol(),
        )?;
        Ok(DiscretizedDomain {
            polygon: poly.clone(),
            components: vec![comp],
            sources: Vec::new(),
            removed: Vec::new(),
            delta,
        })
    }

    /// Index of the component containing `p`.
    pub fn component_of(&self, p: Point) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.locate(p) != Location::Outside)
    }

    /// True when `p` lies strictly inside a removed region.
    pub fn in_removed(&self, p: Point) -> bool {
        let band = self.polygon.boundary_tol();
        self.removed
            .iter()
            .any(|r| locate_in_ring(r, p, band) == Location::Inside)
    }
}

/// Geodesic in a discretized domain with curved runs snapped to their
/// sources.
pub fn shortest_path_domain(
    domain: &DiscretizedDomain,
    s: Point,
    t: Point,
) -> Result<PiecewisePath> {
    if s == t {
        return Err(Error::DegenerateEndpoints);
    }
    let mut comps = [0usize; 2];
    for (k, p) in [s, t].into_iter().enumerate() {
        match domain.component_of(p) {
            Some(c) => comps[k] = c,
            None => {
                if domain.polygon.contains(p) == Location::Outside {
                    return Err(Error::PointOutside(p));
                }
                return Err(Error::PointInDeadRegion(p));
            }
        }
    }
    if comps[0] != comps[1] {
        return Err(Error::DisconnectedEndpoints);
    }
    let comp = &domain.components[comps[0]];
    let verts = comp.funnel(s, t)?;
    snap(&verts, &domain.sources)
}

struct Run {
    first: usize,
    last: usize,
    source: usize,
    entry: f64,
    exit: f64,
}

/// Replaces runs of path vertices lying on one curve by the exact sub-curve
/// between the tangency points of the adjacent straight pieces.
pub fn snap(verts: &[(Point, Tag)], sources: &[CurvePiece]) -> Result<PiecewisePath> {
    let n = verts.len();
    let mut runs: Vec<Run> = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if let Tag::Curve { source, local } = verts[i].1 {
            let mut j = i;
            let mut exit = local;
            while j + 2 < n {
                match verts[j + 1].1 {
                    Tag::Curve {
                        source: s2,
                        local: l2,
                    } if s2 == source => {
                        exit = l2;
                        j += 1;
                    }
                    _ => break,
                }
            }
            if sources[source].is_curved() {
                runs.push(Run {
                    first: i,
                    last: j,
                    source,
                    entry: local,
                    exit,
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    let scale = verts.iter().map(|v| v.0.norm()).fold(1.0f64, f64::max);
    let on_curve = 1e-9 * scale;
    let mut ok = vec![true; runs.len()];
    for _ in 0..40 {
        let mut moved = 0.0f64;
        for r in 0..runs.len() {
            if !ok[r] {
                continue;
            }
            let prev_pt = if r > 0 && ok[r - 1] && runs[r - 1].last + 1 == runs[r].first {
                sources[runs[r - 1].source].point_at(runs[r - 1].exit)
            } else {
                verts[runs[r].first - 1].0
            };
            let next_pt =
                if r + 1 < runs.len() && ok[r + 1] && runs[r].last + 1 == runs[r + 1].first {
                    sources[runs[r + 1].source].point_at(runs[r + 1].entry)
                } else {
                    verts[runs[r].last + 1].0
                };
            let piece = &sources[runs[r].source];
            let (e0, x0) = (runs[r].entry, runs[r].exit);
            let entry = tangent_param(piece, prev_pt, e0, on_curve);
            let exit = tangent_param(piece, next_pt, x0, on_curve);
            match (entry, exit) {
                (Some(a), Some(b)) => {
                    moved = moved.max((a - e0).abs()).max((b - x0).abs());
                    runs[r].entry = a;
                    runs[r].exit = b;
                }
                _ => ok[r] = false,
            }
        }
        if moved < 1e-14 * scale {
            break;
        }
    }

    let mut pieces: Vec<CurvePiece> = Vec::new();
    let mut cur = verts[0].0;
    let push_seg = |pieces: &mut Vec<CurvePiece>, cur: &mut Point, p: Point| {
        if *cur != p {
            pieces.push(CurvePiece::segment(*cur, p));
            *cur = p;
        }
    };
    let mut k = 1;
    let mut r = 0;
    while k < n {
        while r < runs.len() && runs[r].first < k {
            r += 1;
        }
        if r < runs.len() && runs[r].first == k && ok[r] {
            let run = &runs[r];
            let piece = &sources[run.source];
            let a = piece.point_at(run.entry);
            push_seg(&mut pieces, &mut cur, a);
            if (run.exit - run.entry).abs() > 0.0 {
                let sub = piece.sub(run.entry, run.exit);
                let end = sub.end();
                if sub.length() > 1e-14 * scale {
                    pieces.push(sub);
                    cur = end;
                }
            }
            k = run.last + 1;
        } else {
            push_seg(&mut pieces, &mut cur, verts[k].0);
            k += 1;
        }
    }
    PiecewisePath::new(pieces)
}

/// Local parameter on `piece` where the tangent line passes through `q`,
/// nearest to `guess`; the projection of `q` when it lies on the curve.
pub fn tangent_param(piece: &CurvePiece, q: Point, guess: f64, on_curve: f64) -> Option<f64> {
    let len = piece.length();
    if let CurvePiece::Arc {
        center,
        radius,
        start_angle,
        sweep,
    } = piece
    {
        let d = q.dist(*center);
        let base = (q - *center).angle();
        let cands: Vec<f64> = if (d - radius).abs() <= on_curve {
            vec![base]
        } else if d < *radius {
            return None;
        } else {
            let a = (radius / d).acos();
            vec![base + a, base - a]
        };
        let dir = sweep.signum();
        let mut best: Option<f64> = None;
        for th in cands {
            let mut u = ((th - start_angle) * dir).rem_euclid(std::f64::consts::TAU);
            // allow slight overshoot past either end
            if u > sweep.abs() + 1e-9 && u > std::f64::consts::TAU - 1e-9 {
                u -= std::f64::consts::TAU;
            }
            let s = (u * radius).clamp(0.0, len);
            if (u * radius - s).abs() > 1e-7 * (1.0 + len) {
                continue;
            }
            if best.is_none_or(|b| (s - guess).abs() < (b - guess).abs()) {
                best = Some(s);
            }
        }
        return best;
    }
    let f = |u: f64| {
        let p = piece.point_at(u);
        if p.dist(q) <= on_curve {
            return 0.0;
        }
        piece.tangent_at(u).cross(p - q)
    };
    let g = guess.clamp(0.0, len);
    if piece.point_at(g).dist(q) <= on_curve {
        return Some(g);
    }
    let f0 = f(g);
    if f0 == 0.0 {
        return Some(g);
    }
    let mut h = (len * 1e-4).max(1e-12);
    let mut bracket = None;
    while bracket.is_none() {
        let lo = (g - h).max(0.0);
        let hi = (g + h).min(len);
        let (flo, fhi) = (f(lo), f(hi));
        if fhi.signum() != f0.signum() {
            bracket = Some((g, hi));
        } else if flo.signum() != f0.signum() {
            bracket = Some((lo, g));
        } else if lo == 0.0 && hi == len {
            return None;
        }
        h *= 2.0;
    }
    let (mut a, mut b) = bracket.unwrap();
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a) < 1e-15 * (1.0 + len) {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Geodesic inside the closed region bounded by two paths with shared
/// endpoints, lobe by lobe where the paths meet.
pub fn geodesic_in_hourglass(
    p1: &PiecewisePath,
    p2: &PiecewisePath,
    delta: f64,
) -> Result<PiecewisePath> {
    let scale = 1.0 + p1.length() + p2.length() + p1.start().norm();
    let eps = 1e-9 * scale;
    if p1.start().dist(p2.start()) > eps || p1.end().dist(p2.end()) > eps {
        return Err(Error::EndpointMismatch(p1.end(), p2.end()));
    }
    let (sources, f1) = tagged_flatten(p1, delta, Vec::new());
    let (sources, f2) = tagged_flatten(p2, delta, sources);

    // meeting points, ordered along p1 and required to be ordered along p2
    let mut meets: Vec<(f64, f64, Point)> = vec![(0.0, 0.0, p1.start())];
    for i in 0..f1.len() - 1 {
        for j in 0..f2.len() - 1 {
            let (a, b) = (f1[i].1, f1[i + 1].1);
            let (c, d) = (f2[j].1, f2[j + 1].1);
            match segment_intersection(a, b, c, d) {
                SegmentHit::None => {}
                SegmentHit::Point(u, v) => {
                    let s1 = f1[i].0 + u * (f1[i + 1].0 - f1[i].0);
                    let s2 = f2[j].0 + v * (f2[j + 1].0 - f2[j].0);
                    meets.push((s1, s2, a.lerp(b, u)));
                }
                SegmentHit::Overlap(u0, u1) => {
                    for u in [u0, u1] {
                        let p = a.lerp(b, u);
                        let (q, v) = crate::geom::project_on_segment(p, c, d);
                        let _ = q;
                        let s1 = f1[i].0 + u * (f1[i + 1].0 - f1[i].0);
                        let s2 = f2[j].0 + v * (f2[j + 1].0 - f2[j].0);
                        meets.push((s1, s2, p));
                    }
                }
            }
        }
    }
    meets.push((p1.length(), p2.length(), p1.end()));
    meets.sort_by(|x, y| x.0.total_cmp(&y.0));
    meets.dedup_by(|b, a| (b.0 - a.0).abs() <= eps && (b.1 - a.1).abs() <= eps);
    for w in meets.windows(2) {
        if w[1].1 + eps < w[0].1 {
            return Err(Error::RegionDegenerate(
                "paths meet in inconsistent order".into(),
            ));
        }
    }

    let mut verts: Vec<(Point, Tag)> = vec![(p1.start(), Tag::Fixed)];
    for w in meets.windows(2) {
        let (a1, a2, pa) = w[0];
        let (b1, b2, pb) = w[1];
        if pa.dist(pb) <= eps {
            continue;
        }
        let side1 = slice(&f1, a1, b1);
        let side2 = slice(&f2, a2, b2);
        let mut ring: Vec<Point> = vec![pa];
        let mut tags: Vec<Tag> = vec![Tag::Fixed];
        for &(_, p, tag) in side1.iter().skip(1).take(side1.len().saturating_sub(2)) {
            ring.push(p);
            tags.push(tag);
        }
        ring.push(pb);
        tags.push(Tag::Fixed);
        for &(_, p, tag) in side2
            .iter()
            .rev()
            .skip(1)
            .take(side2.len().saturating_sub(2))
        {
            ring.push(p);
            tags.push(tag);
        }
        let area = 0.5 * signed_area2(&ring).abs();
        let lobe: Vec<(Point, Tag)> = if area <= eps * scale || ring.len() < 3 {
            side1.iter().map(|&(_, p, tag)| (p, tag)).collect()
        } else {
            let comp = Component::new(ring, tags, eps)
                .map_err(|e| Error::RegionDegenerate(e.to_string()))?;
            comp.funnel(pa, pb)?
        };
        for v in lobe.into_iter().skip(1) {
            verts.push(v);
        }
    }
    snap(&verts, &sources)
}

/// Flattened path as `(arc length, point, tag)`, registering curved pieces in
/// `sources`.
fn tagged_flatten(
    path: &PiecewisePath,
    delta: f64,
    mut sources: Vec<CurvePiece>,
) -> (Vec<CurvePiece>, Vec<(f64, Point, Tag)>) {
    let mut out: Vec<(f64, Point, Tag)> = Vec::new();
    for (i, piece) in path.pieces().iter().enumerate() {
        let off = path.offsets()[i];
        let src = if piece.is_curved() {
            sources.push(piece.clone());
            Some(sources.len() - 1)
        } else {
            None
        };
        let flat = piece.flatten(delta);
        let last = flat.len() - 1;
        for (k, (s, p)) in flat.into_iter().enumerate() {
            if k == 0 && !out.is_empty() {
                continue;
            }
            let tag = match src {
                Some(source) if k > 0 && k < last => Tag::Curve { source, local: s },
                _ => Tag::Fixed,
            };
            out.push((off + s, p, tag));
        }
    }
    (sources, out)
}

/// Portion of a flattened path between arc lengths, with interpolated ends.
fn slice(f: &[(f64, Point, Tag)], a: f64, b: f64) -> Vec<(f64, Point, Tag)> {
    let at = |s: f64| -> Point {
        let k = f.partition_point(|q| q.0 <= s).clamp(1, f.len() - 1);
        let (s0, p0) = (f[k - 1].0, f[k - 1].1);
        let (s1, p1) = (f[k].0, f[k].1);
        if s1 > s0 {
            p0.lerp(p1, ((s - s0) / (s1 - s0)).clamp(0.0, 1.0))
        } else {
            p0
        }
    };
    let mut out = vec![(a, at(a), Tag::Fixed)];
    for &q in f {
        if q.0 > a && q.0 < b {
            out.push(q);
        }
    }
    out.push((b, at(b), Tag::Fixed));
    out
}

/// Distance from `p` to the nearest removed-region outline.
pub fn dist_to_removed(domain: &DiscretizedDomain, p: Point) -> f64 {
    domain
        .removed
        .iter()
        .map(|r| dist_to_ring(r, p))
        .fold(f64::INFINITY, f64::min)
}
