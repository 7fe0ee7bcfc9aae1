//! Named instances and seeded families of random pockets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Location, Point, SimplePolygon};
use crate::io::Instance;

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&q| q.into()).collect()
}

pub fn square() -> Instance {
    Instance::new(
        "square",
        pts(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]),
        Point::new(2., 2.),
        Point::new(8., 8.),
    )
}

pub fn dart() -> Instance {
    Instance::new(
        "dart",
        pts(&[(0., 0.), (10., 0.), (10., 10.), (5., 5.), (0., 10.)]),
        Point::new(1., 7.),
        Point::new(9., 7.),
    )
}

pub fn hook() -> Instance {
    Instance::new(
        "hook",
        pts(&[
            (0., 0.),
            (12., 0.),
            (12., 10.),
            (6.5, 4.),
            (6., 10.),
            (0., 10.),
        ]),
        Point::new(3., 9.),
        Point::new(10.5, 8.),
    )
}

/// The hook with `s` deep in the pocket next to the tip.
pub fn hook_dead() -> Instance {
    let mut h = hook();
    h.name = "hook-dead".into();
    h.s = Point::new(5.5, 8.);
    h
}

fn map(inst: &Instance, name: &str, f: impl Fn(Point) -> Point, flip: bool) -> Instance {
    let mut polygon: Vec<Point> = inst.polygon.iter().map(|&p| f(p)).collect();
    if flip {
        polygon.reverse();
    }
    Instance::new(name, polygon, f(inst.s), f(inst.t))
}

/// Rigid copies of the hook.
pub fn hook_transforms() -> Vec<Instance> {
    let h = hook();
    vec![
        map(&h, "hook-mirror", |p| Point::new(-p.x, p.y), true),
        map(&h, "hook-rot90", |p| Point::new(-p.y, p.x), false),
        map(&h, "hook-rot180", |p| Point::new(-p.x, -p.y), false),
        map(
            &h,
            "hook-rot30",
            |p| p.rotated(std::f64::consts::PI / 6.0) + Point::new(3., -2.),
            false,
        ),
    ]
}

fn interior_point(
    rng: &mut ChaCha8Rng,
    poly: &SimplePolygon,
    lo: Point,
    hi: Point,
    clearance: f64,
) -> Point {
    loop {
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if poly.contains(p) == Location::Inside && poly.dist_to_boundary(p) >= clearance {
            return p;
        }
    }
}

/// A box with one triangular notch hanging from the top edge.
pub fn single_spike(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(10.0..14.0);
    let h = rng.gen_range(8.0..12.0);
    let xl = rng.gen_range(0.3 * w..0.5 * w);
    let xr = rng.gen_range(xl + 1.5..w);
    let tip = Point::new(xl + rng.gen_range(-1.0..1.5), h * rng.gen_range(0.25..0.55));
    let polygon = pts(&[(0., 0.), (w, 0.), (w, h), (xr, h)])
        .into_iter()
        .chain([tip, Point::new(xl, h), Point::new(0., h)])
        .collect::<Vec<_>>();
    let poly = SimplePolygon::new(polygon.clone()).expect("spike polygon is simple");
    let c = 0.03 * poly.diameter();
    let s = interior_point(&mut rng, &poly, Point::new(0., tip.y), Point::new(xl, h), c);
    let t = interior_point(
        &mut rng,
        &poly,
        Point::new(tip.x.max(xl), tip.y),
        Point::new(w, h),
        c,
    );
    Instance::new(format!("spike-{seed}"), polygon, s, t)
}

/// A box with a notch from the top and a notch from the bottom.
pub fn double_spike(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(14.0..18.0);
    let h = rng.gen_range(8.0..12.0);
    let a = rng.gen_range(0.2 * w..0.35 * w);
    let top = Point::new(a + rng.gen_range(0.0..1.0), h * rng.gen_range(0.3..0.55));
    let b = rng.gen_range(0.55 * w..0.7 * w);
    let bottom = Point::new(b + rng.gen_range(0.0..1.0), h * rng.gen_range(0.45..0.7));
    let polygon = vec![
        Point::new(0., 0.),
        Point::new(b - 1.0, 0.),
        bottom,
        Point::new(b + 2.0, 0.),
        Point::new(w, 0.),
        Point::new(w, h),
        Point::new(a + 2.0, h),
        top,
        Point::new(a, h),
        Point::new(0., h),
    ];
    let poly = SimplePolygon::new(polygon.clone()).expect("double spike polygon is simple");
    let c = 0.03 * poly.diameter();
    let s = interior_point(&mut rng, &poly, Point::new(0., 0.), Point::new(a, h), c);
    let t = interior_point(
        &mut rng,
        &poly,
        Point::new(b + 2.0, 0.),
        Point::new(w, h),
        c,
    );
    Instance::new(format!("double-{seed}"), polygon, s, t)
}

/// An L with one reflex corner.
pub fn l_shape(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(8.0..14.0);
    let h = rng.gen_range(8.0..14.0);
    let cx = rng.gen_range(0.3 * w..0.7 * w);
    let cy = rng.gen_range(0.3 * h..0.7 * h);
    let polygon = pts(&[(0., 0.), (w, 0.), (w, cy), (cx, cy), (cx, h), (0., h)]);
    let poly = SimplePolygon::new(polygon.clone()).expect("L polygon is simple");
    let c = 0.03 * poly.diameter();
    let s = interior_point(&mut rng, &poly, Point::new(0., cy), Point::new(cx, h), c);
    let t = interior_point(&mut rng, &poly, Point::new(cx, 0.), Point::new(w, cy), c);
    Instance::new(format!("l-{seed}"), polygon, s, t)
}

/// Random convex polygon: sorted angles on an ellipse with jittered radii.
pub fn random_convex(rng: &mut impl Rng) -> Vec<Point> {
    let n = rng.gen_range(3..12);
    let scale = 10f64.powf(rng.gen_range(-2.0..3.0));
    let (ax, ay) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut out: Vec<Point> = angles
        .into_iter()
        .map(|a| Point::new(ax * a.cos(), ay * a.sin()) * scale)
        .collect();
    if out.len() < 3 {
        out = vec![
            Point::new(0., 0.),
            Point::new(scale, 0.),
            Point::new(0., scale),
        ];
    }
    out
}

/// The fixed corpus: named instances first, then the seeded families.
pub fn corpus() -> Vec<Instance> {
    let mut v = vec![square(), dart(), hook()];
    v.extend(hook_transforms());
    v.extend((1..=10).map(single_spike));
    v.extend((1..=8).map(double_spike));
    v.extend((1..=6).map(l_shape));
    v
}

/// Pockets used for the grid agreement check.
pub fn grid_pockets() -> Vec<Instance> {
    (1..=10).map(single_spike).collect()
}
