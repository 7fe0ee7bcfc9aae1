use ic_paths::dead_region::*;
use ic_paths::fixtures;
use ic_paths::geodesic::{shortest_path_domain, shortest_path_simple};
use ic_paths::ic::{feasibility, shortest_increasing_chords_path, Status, Tolerances};
use ic_paths::oracle::Detour;
use ic_paths::verify::{check_increasing_chords, geodesic_between_check, verify_all, VerifyConfig};
use ic_paths::{CurvePiece, Error, Location, Point, SimplePolygon};

fn poly(v: &[(f64, f64)]) -> SimplePolygon {
    SimplePolygon::new(v.iter().map(|&q| q.into()).collect()).unwrap()
}

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

#[test]
fn square_gives_segment() {
    let sq = poly(&[(0., 0.), (10., 0.), (10., 10.), (0., 10.)]);
    let r =
        shortest_increasing_chords_path(&sq, p(2., 2.), p(8., 8.), Tolerances::for_polygon(&sq))
            .unwrap();
    assert_eq!(r.status, Status::Path);
    let path = r.path.unwrap();
    assert_eq!(path.pieces().len(), 1);
    assert!((path.length() - 72f64.sqrt()).abs() < 1e-12);
}

#[test]
fn dart_gives_geodesic() {
    let dart = poly(&[(0., 0.), (10., 0.), (10., 10.), (5., 5.), (0., 10.)]);
    let r = shortest_increasing_chords_path(
        &dart,
        p(1., 7.),
        p(9., 7.),
        Tolerances::for_polygon(&dart),
    )
    .unwrap();
    assert_eq!(r.status, Status::Path);
    let path = r.path.unwrap();
    assert_eq!(path.pieces().len(), 2);
    assert!((path.length() - 80f64.sqrt()).abs() < 1e-9);
}

#[test]
fn hook_path_bends_around_the_tip() {
    let hook = poly(&[
        (0., 0.),
        (12., 0.),
        (12., 10.),
        (6.5, 4.),
        (6., 10.),
        (0., 10.),
    ]);
    let (s, t) = (p(3., 9.), p(10.5, 8.));
    let r = shortest_increasing_chords_path(&hook, s, t, Tolerances::for_polygon(&hook));
    let r = match r {
        Ok(r) => r,
        Err(ic_paths::Error::VerificationFailed(reps)) => panic!("{reps:#?}"),
        Err(e) => panic!("{e}"),
    };
    assert_eq!(r.status, Status::Path);
    let path = r.path.unwrap();
    let geo = shortest_path_simple(&hook, s, t).unwrap();
    assert!(
        path.length() > geo.length() + 1e-3,
        "{} vs {}",
        path.length(),
        geo.length()
    );
    assert!(path.pieces().iter().any(CurvePiece::is_curved));
}

fn tol_for(poly: &SimplePolygon) -> Tolerances {
    Tolerances::for_polygon(poly)
}

#[test]
fn dart_regions_leave_s_alive() {
    let inst = fixtures::dart();
    let poly = inst.simple_polygon().unwrap();
    let rs = build_dead_region(&poly, inst.t, tol_for(&poly).tol).unwrap();
    assert_eq!(regions_contain(&rs, inst.s), Location::Outside);
}

#[test]
fn region_contains_examples() {
    let inst = fixtures::hook();
    let poly = inst.simple_polygon().unwrap();
    let rs = build_dead_region(&poly, inst.t, tol_for(&poly).tol).unwrap();
    let r = &rs[0];
    assert_eq!(region_contains(r, inst.t), Location::Outside);
    let on = r.curve()[0].point_at(0.5 * r.curve()[0].length());
    assert_eq!(region_contains(r, on), Location::Boundary);
    assert_eq!(region_contains(r, p(0.5, 0.5)), Location::Outside);
}

#[test]
fn hook_domain_is_one_component() {
    let inst = fixtures::hook();
    let poly = inst.simple_polygon().unwrap();
    let r = shortest_increasing_chords_path(&poly, inst.s, inst.t, tol_for(&poly)).unwrap();
    let all: Vec<DeadRegion> = r.regions.s.iter().chain(&r.regions.t).cloned().collect();
    let dom = subtract_regions(&poly, &all, tol_for(&poly).delta).unwrap();
    assert_eq!(dom.components.len(), 1);
    assert_eq!(dom.component_of(inst.s), Some(0));
    assert_eq!(dom.component_of(inst.t), Some(0));
    assert!(matches!(
        shortest_path_domain(&dom, p(5.5, 8.), inst.t),
        Err(Error::PointInDeadRegion(_))
    ));
}

#[test]
fn square_domain_is_the_square() {
    let inst = fixtures::square();
    let poly = inst.simple_polygon().unwrap();
    let dom = subtract_regions(&poly, &[], 1e-6).unwrap();
    assert_eq!(dom.components.len(), 1);
    assert_eq!(dom.components[0].ring.len(), 4);
}

#[test]
fn strip_region_splits_the_square() {
    let inst = fixtures::square();
    let poly = inst.simple_polygon().unwrap();
    let strip: DeadRegion = serde_json::from_value(serde_json::json!({
        "anchor": [2.0, 2.0],
        "window": [4.0, 0.0],
        "boundary": [
            {"kind": "segment", "a": [4.0, 0.0], "b": [6.0, 0.0]},
            {"kind": "segment", "a": [6.0, 0.0], "b": [6.0, 10.0]},
            {"kind": "segment", "a": [6.0, 10.0], "b": [4.0, 10.0]},
            {"kind": "segment", "a": [4.0, 10.0], "b": [4.0, 0.0]}
        ],
        "attachment": [[[4.0, 0.0], [6.0, 0.0]], [[6.0, 10.0], [4.0, 10.0]]],
        "tolerance": 1e-6
    }))
    .unwrap();
    let dom = subtract_regions(&poly, &[strip], 1e-6).unwrap();
    assert_eq!(dom.components.len(), 2);
    assert!(matches!(
        shortest_path_domain(&dom, inst.s, inst.t),
        Err(Error::DisconnectedEndpoints)
    ));
}

#[test]
fn feasibility_examples() {
    let inst = fixtures::square();
    let poly = inst.simple_polygon().unwrap();
    assert_eq!(
        feasibility(&poly, inst.s, inst.t, tol_for(&poly))
            .unwrap()
            .status,
        Status::Path
    );

    let inst = fixtures::hook_dead();
    let poly = inst.simple_polygon().unwrap();
    let f = feasibility(&poly, inst.s, inst.t, tol_for(&poly)).unwrap();
    assert_eq!(f.status, Status::InfeasibleSDead);
    assert_eq!(f.witnesses[0].anchor, inst.t);
    let f = feasibility(&poly, inst.t, inst.s, tol_for(&poly)).unwrap();
    assert_eq!(f.status, Status::InfeasibleTDead);
    let r = shortest_increasing_chords_path(&poly, inst.s, inst.t, tol_for(&poly)).unwrap();
    assert_eq!(r.status, Status::InfeasibleSDead);
    assert!(r.path.is_none());
}

#[test]
fn endpoint_errors() {
    let inst = fixtures::square();
    let poly = inst.simple_polygon().unwrap();
    let tol = tol_for(&poly);
    assert!(matches!(
        shortest_increasing_chords_path(&poly, inst.s, inst.s, tol),
        Err(Error::DegenerateEndpoints)
    ));
    assert!(matches!(
        shortest_increasing_chords_path(&poly, inst.s, p(11., 1.), tol),
        Err(Error::PointOutside(_))
    ));
}

#[test]
fn hook_result_is_symmetric_and_bounded() {
    let inst = fixtures::hook();
    let poly = inst.simple_polygon().unwrap();
    let tol = tol_for(&poly);
    let a = shortest_increasing_chords_path(&poly, inst.s, inst.t, tol)
        .unwrap()
        .path
        .unwrap();
    let b = shortest_increasing_chords_path(&poly, inst.t, inst.s, tol)
        .unwrap()
        .path
        .unwrap();
    assert!((a.length() - b.length()).abs() <= 1e-6 * a.length());
    let geo = shortest_path_simple(&poly, inst.s, inst.t)
        .unwrap()
        .length();
    let st = inst.s.dist(inst.t);
    assert!(a.length() >= geo - 1e-9);
    assert!(a.length() <= 2.0 * std::f64::consts::PI / 3.0 * st + tol.tol);
}

#[test]
fn hook_plain_geodesic_fails_with_witness() {
    let inst = fixtures::hook();
    let poly = inst.simple_polygon().unwrap();
    let geo = shortest_path_simple(&poly, inst.s, inst.t).unwrap();
    let r = check_increasing_chords(&geo, 20_000, 1e-7 * poly.diameter());
    assert!(!r.pass);
    assert_eq!(r.witness.unwrap().len(), 4);
}

#[test]
fn hourglass_of_two_hook_paths_is_ic() {
    let inst = fixtures::hook();
    let poly = inst.simple_polygon().unwrap();
    let v = p(6.5, 4.);
    let make = |c: Point| {
        Detour {
            c_in: vec![inst.t],
            c_out: vec![c],
        }
        .build(&[inst.s, v, inst.t])
        .unwrap()
    };
    let cfg = VerifyConfig::for_diameter(poly.diameter());
    let (a, b) = (make(p(4.35, 9.875)), make(p(4.0, 9.0)));
    for path in [&a, &b] {
        assert!(verify_all(path, cfg).unwrap().iter().all(|r| r.pass));
    }
    assert!(a.length() != b.length());
    let r = geodesic_between_check(&a, &b, 20_000, cfg.tol).unwrap();
    assert!(r.pass, "{r:?}");
}
