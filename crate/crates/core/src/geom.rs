//! Planar primitives: points, the robust orientation predicate, validated
//! simple polygons, point location and half-planes.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// A point (or free vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for Point {
    fn from(p: (f64, f64)) -> Self {
        Point::new(p.0, p.1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const ZERO: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    pub fn rotated(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, k: f64) -> Point {
        Point::new(self.x / k, self.y / k)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Signed angle turning from direction `a` to direction `b`, in (-π, π].
pub fn turn_angle(a: Point, b: Point) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// Sign of twice the signed area of triangle `abc`: +1 for a left turn,
/// -1 for a right turn, 0 when collinear. Evaluated with adaptive precision.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let det = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    }
}

/// Closest point to `p` on segment `ab`, with its parameter in [0, 1].
pub fn project_on_segment(p: Point, a: Point, b: Point) -> (Point, f64) {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    (a + d * t, t)
}

pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    project_on_segment(p, a, b).0.dist(p)
}

/// Intersection of segments `ab` and `cd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentHit {
    None,
    /// Single point with parameters along `ab` and `cd`.
    Point(f64, f64),
    /// Collinear overlap, parameter interval along `ab`.
    Overlap(f64, f64),
}

pub fn segment_intersection(a: Point, b: Point, c: Point, d: Point) -> SegmentHit {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let r = b - a;
    let s = d - c;
    if o1 == 0 && o2 == 0 {
        // collinear
        let rr = r.norm2();
        if rr == 0.0 {
            if o3 == 0 && on_segment_collinear(a, c, d) {
                return SegmentHit::Point(0.0, param_on(a, c, d));
            }
            return SegmentHit::None;
        }
        let t0 = (c - a).dot(r) / rr;
        let t1 = (d - a).dot(r) / rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        if lo > hi {
            return SegmentHit::None;
        }
        if lo == hi {
            let p = a + r * lo;
            return SegmentHit::Point(lo, param_on(p, c, d));
        }
        return SegmentHit::Overlap(lo, hi);
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return SegmentHit::None;
    }
    let denom = r.cross(s);
    if denom == 0.0 {
        return SegmentHit::None;
    }
    let t = ((c - a).cross(s) / denom).clamp(0.0, 1.0);
    let u = ((c - a).cross(r) / denom).clamp(0.0, 1.0);
    SegmentHit::Point(t, u)
}

fn on_segment_collinear(p: Point, a: Point, b: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn param_on(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(d) / l2).clamp(0.0, 1.0)
    }
}

/// Twice the signed area of a closed vertex ring.
pub fn signed_area2(vs: &[Point]) -> f64 {
    let n = vs.len();
    (0..n).map(|i| vs[i].cross(vs[(i + 1) % n])).sum()
}

/// Result of a point-location query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Point location against a closed ring, with an absolute boundary band.
pub fn locate_in_ring(ring: &[Point], p: Point, band: f64) -> Location {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if dist_point_segment(p, a, b) <= band {
            return Location::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Distance from `p` to a closed ring's boundary.
pub fn dist_to_ring(ring: &[Point], p: Point) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| dist_point_segment(p, ring[i], ring[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// A validated simple polygon with counter-clockwise vertex order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    diameter: f64,
}

/// Relative boundary band used by [`SimplePolygon::contains`].
pub const BOUNDARY_REL_TOL: f64 = 1e-9;

impl SimplePolygon {
    /// Validates and normalizes a vertex list: merges collinear runs, orients
    /// the ring counter-clockwise and starts it at the lexicographically
    /// smallest vertex.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        validate_polygon(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area2(&self.vertices) / 2.0
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn boundary_tol(&self) -> f64 {
        BOUNDARY_REL_TOL * self.diameter
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        bounds_of(&self.vertices)
    }

    /// True when the interior angle at vertex `i` exceeds π.
    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.len();
        let prev = self.vertices[(i + n - 1) % n];
        let next = self.vertices[(i + 1) % n];
        orient(prev, self.vertices[i], next) < 0
    }

    pub fn reflex_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_reflex(i)).collect()
    }

    pub fn contains(&self, p: Point) -> Location {
        locate_in_ring(&self.vertices, p, self.boundary_tol())
    }

    pub fn dist_to_boundary(&self, p: Point) -> f64 {
        dist_to_ring(&self.vertices, p)
    }

    /// True iff the open segment `ab` leaves the closed polygon.
    pub fn segment_clips(&self, a: Point, b: Point) -> bool {
        segment_clips_polygon(a, b, self)
    }
}

pub fn bounds_of(vs: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vs {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    (lo, hi)
}

fn diameter_of(vs: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

/// Validates a user-supplied vertex list; see [`SimplePolygon::new`].
pub fn validate_polygon(vertices: Vec<Point>) -> Result<SimplePolygon, GeomError> {
    if vertices.len() < 3 {
        return Err(GeomError::Degenerate("fewer than three vertices".into()));
    }
    if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite(*p));
    }
    for (i, a) in vertices.iter().enumerate() {
        if vertices[i + 1..].iter().any(|b| b == a) {
            return Err(GeomError::Degenerate(format!("repeated vertex {a}")));
        }
    }
    if (2..vertices.len()).all(|i| orient(vertices[0], vertices[1], vertices[i]) == 0) {
        return Err(GeomError::Degenerate("all vertices collinear".into()));
    }
    // merge collinear consecutive vertices; a collinear fold-back is a spike
    let mut vs = vertices;
    loop {
        let n = vs.len();
        if n < 3 {
            return Err(GeomError::Degenerate("all vertices collinear".into()));
        }
        let mut removed = false;
        for i in 0..n {
            let a = vs[(i + n - 1) % n];
            let b = vs[i];
            let c = vs[(i + 1) % n];
            if orient(a, b, c) == 0 {
                if (b - a).dot(c - b) < 0.0 {
                    return Err(GeomError::NotSimple(format!("boundary folds back at {b}")));
                }
                vs.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    let n = vs.len();
    // pairwise edge test
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (vs[j], vs[(j + 1) % n]);
            match segment_intersection(a, b, c, d) {
                SegmentHit::None => {}
                SegmentHit::Overlap(..) => {
                    return Err(GeomError::NotSimple(format!("edges {i} and {j} overlap")));
                }
                SegmentHit::Point(..) if adjacent => {
                    // adjacent edges share exactly their common vertex; anything
                    // else would have been caught as a fold-back above
                }
                SegmentHit::Point(..) => {
                    return Err(GeomError::NotSimple(format!("edges {i} and {j} intersect")));
                }
            }
        }
    }
    let area2 = signed_area2(&vs);
    if area2 == 0.0 {
        return Err(GeomError::Degenerate("zero area".into()));
    }
    if area2 < 0.0 {
        vs.reverse();
    }
    let start = (0..vs.len())
        .min_by(|&i, &j| {
            vs[i]
                .x
                .total_cmp(&vs[j].x)
                .then(vs[i].y.total_cmp(&vs[j].y))
        })
        .unwrap_or(0);
    vs.rotate_left(start);
    let diameter = diameter_of(&vs);
    Ok(SimplePolygon {
        vertices: vs,
        diameter,
    })
}

/// Point location with boundary band `1e-9 · diameter`.
pub fn contains(poly: &SimplePolygon, p: Point) -> Location {
    poly.contains(p)
}

/// True iff the open segment `ab` exits the closed polygon. The endpoints are
/// expected inside or on the boundary.
pub fn segment_clips_polygon(a: Point, b: Point, poly: &SimplePolygon) -> bool {
    ring_segment_clips(poly.vertices(), a, b, poly.boundary_tol())
}

/// [`segment_clips_polygon`] for a raw ring with an explicit band.
pub fn ring_segment_clips(ring: &[Point], a: Point, b: Point, band: f64) -> bool {
    let n = ring.len();
    let mut ts = vec![0.0, 1.0];
    for i in 0..n {
        match segment_intersection(a, b, ring[i], ring[(i + 1) % n]) {
            SegmentHit::None => {}
            SegmentHit::Point(t, _) => ts.push(t),
            SegmentHit::Overlap(t0, t1) => {
                ts.push(t0);
                ts.push(t1);
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.windows(2).any(|w| {
        let m = a.lerp(b, 0.5 * (w[0] + w[1]));
        locate_in_ring(ring, m, band) == Location::Outside
    })
}

/// Which closed side of a directed line a half-plane selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Closed half-plane bounded by the line through `point` with unit `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub point: Point,
    pub direction: Point,
    pub side: Side,
}

impl HalfPlane {
    pub fn new(point: Point, direction: Point, side: Side) -> Self {
        HalfPlane {
            point,
            direction: direction.normalized(),
            side,
        }
    }

    /// Closed half-plane `{z : (z - point) · inward >= 0}`.
    pub fn from_inward(point: Point, inward: Point) -> Self {
        // inward = direction rotated left for the left side
        HalfPlane::new(point, -inward.perp(), Side::Left)
    }

    /// Unit normal pointing into the half-plane.
    pub fn inward(&self) -> Point {
        match self.side {
            Side::Left => self.direction.perp(),
            Side::Right => -self.direction.perp(),
        }
    }

    /// Signed distance, positive inside.
    pub fn signed_distance(&self, z: Point) -> f64 {
        (z - self.point).dot(self.inward())
    }

    pub fn contains(&self, z: Point, tol: f64) -> bool {
        self.signed_distance(z) >= -tol
    }

    pub fn complement(&self) -> HalfPlane {
        HalfPlane {
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            ..*self
        }
    }
}
