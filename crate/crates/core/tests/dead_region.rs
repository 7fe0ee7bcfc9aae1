use ic_paths::dead_region::*;
use ic_paths::geodesic::Tag;
use ic_paths::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn free(sense: f64, rot: f64) -> StopConditions<'static> {
    StopConditions {
        boundary: None,
        sense,
        stop_at_anchor: false,
        max_rotation: rot,
    }
}

#[test]
fn point_chain_gives_circle() {
    let state = TouchState {
        anchor: Point::ZERO,
        chain: vec![],
        unwind_param: 0.0,
        string_constant: 1.0,
    };
    let tr = trace_normal_touch_curve(p(1., 0.), state, &free(1.0, 2.0), 1e-9).unwrap();
    match &tr.pieces[0] {
        CurvePiece::Arc {
            center,
            radius,
            start_angle,
            sweep,
        } => {
            assert_eq!(*center, Point::ZERO);
            assert_eq!(*radius, 1.0);
            assert_eq!(*start_angle, 0.0);
            assert_eq!(*sweep, 2.0);
        }
        other => panic!("expected arc, got {other:?}"),
    }
}

#[test]
fn circle_chain_gives_involute() {
    let state = TouchState {
        anchor: p(-1., 0.),
        chain: vec![CurvePiece::Arc {
            center: Point::ZERO,
            radius: 1.0,
            start_angle: PI,
            sweep: -PI,
        }],
        unwind_param: PI,
        string_constant: PI,
    };
    let stop = StopConditions {
        stop_at_anchor: true,
        ..free(1.0, 0.0)
    };
    let tr = trace_normal_touch_curve(p(1., 0.), state, &stop, 1e-9).unwrap();
    assert_eq!(tr.pieces.len(), 1);
    let piece = &tr.pieces[0];
    // unwind angle u has arc length u²/2
    let q = piece.point_at(FRAC_PI_2 * FRAC_PI_2 / 2.0);
    assert!((q - p(FRAC_PI_2, 1.0)).norm() < 1e-9, "{q}");
}

#[test]
fn segment_chain_pivots_then_circles_anchor() {
    let state = TouchState {
        anchor: Point::ZERO,
        chain: vec![CurvePiece::segment(Point::ZERO, p(2., 0.))],
        unwind_param: 2.0,
        string_constant: 3.0,
    };
    let tr = trace_normal_touch_curve(p(2., 1.), state, &free(-1.0, 1.0), 1e-9).unwrap();
    assert_eq!(tr.pieces.len(), 2);
    match (&tr.pieces[0], &tr.pieces[1]) {
        (
            CurvePiece::Arc {
                center: c0,
                radius: r0,
                sweep: w0,
                ..
            },
            CurvePiece::Arc {
                center: c1,
                radius: r1,
                ..
            },
        ) => {
            assert_eq!(*c0, p(2., 0.));
            assert!((r0 - 1.0).abs() < 1e-15);
            assert!((w0 + FRAC_PI_2).abs() < 1e-12);
            assert_eq!(*c1, Point::ZERO);
            assert!((r1 - 3.0).abs() < 1e-15);
        }
        other => panic!("{other:?}"),
    }
    assert!((tr.pieces[0].end() - p(3., 0.)).norm() < 1e-12);
}

const TOL: f64 = 1.6e-6;

fn hook() -> SimplePolygon {
    let v: Vec<Point> = [
        (0., 0.),
        (12., 0.),
        (12., 10.),
        (6.5, 4.),
        (6., 10.),
        (0., 10.),
    ]
    .iter()
    .map(|&q| q.into())
    .collect();
    SimplePolygon::new(v).unwrap()
}

#[test]
fn hook_region_of_t_is_an_arc_about_t() {
    let regions = build_dead_region(&hook(), p(10.5, 8.), TOL).unwrap();
    assert_eq!(regions.len(), 1);
    let r = &regions[0];
    assert_eq!(r.window, p(6.5, 4.));
    assert_eq!(r.curve().len(), 1);
    match &r.curve()[0] {
        CurvePiece::Arc { center, radius, .. } => {
            assert_eq!(*center, p(10.5, 8.));
            assert!((radius - 32f64.sqrt()).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    let end = r.curve()[0].end();
    assert!((end.y - 10.0).abs() < 1e-9, "{end}");
    let x = 10.5 - (32.0f64 - 4.0).sqrt();
    assert!((end.x - x).abs() < 1e-9, "{end}");
    assert_eq!(region_contains(r, p(5.5, 8.)), Location::Inside);
    assert_eq!(region_contains(r, p(7.0, 6.)), Location::Outside);
}

#[test]
fn hook_region_of_s_is_an_arc_about_s() {
    let regions = build_dead_region(&hook(), p(3., 9.), TOL).unwrap();
    assert_eq!(regions.len(), 1);
    let r = &regions[0];
    match &r.curve()[0] {
        CurvePiece::Arc { center, radius, .. } => {
            assert_eq!(*center, p(3., 9.));
            assert!((radius - 3.5f64.hypot(5.0)).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    let end = r.curve()[0].end();
    // on the edge (6.5,4)-(12,10)
    let d = p(12., 10.) - p(6.5, 4.);
    assert!(d.cross(end - p(6.5, 4.)).abs() < 1e-9, "{end}");
    assert!((end.x - 8.28).abs() < 0.01, "{end}");
}

#[test]
fn convex_polygon_has_no_regions() {
    let sq = SimplePolygon::new(vec![p(0., 0.), p(4., 0.), p(4., 4.), p(0., 4.)]).unwrap();
    assert!(build_dead_region(&sq, p(1., 1.), TOL).unwrap().is_empty());
    assert!(matches!(
        build_dead_region(&sq, p(5., 1.), TOL),
        Err(Error::AnchorOutside(_))
    ));
}

#[test]
fn subtracting_hook_regions_keeps_tags() {
    let h = hook();
    let ds = build_dead_region(&h, p(3., 9.), TOL).unwrap();
    let dt = build_dead_region(&h, p(10.5, 8.), TOL).unwrap();
    let dom = domain_for(&h, &ds, &dt, TOL).unwrap();
    assert_eq!(dom.components.len(), 1);
    assert_eq!(dom.sources.len(), 2);
    let c = &dom.components[0];
    assert!(c
        .tags
        .iter()
        .any(|t| matches!(t, Tag::Curve { source: 0, .. })));
    assert!(c
        .tags
        .iter()
        .any(|t| matches!(t, Tag::Curve { source: 1, .. })));
}
