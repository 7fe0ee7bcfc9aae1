use ic_paths::oracle::*;
use ic_paths::verify::verify_all;
use ic_paths::*;

#[test]
fn detour_family_contains_the_two_arc_path() {
    let hook = SimplePolygon::new(
        [
            (0., 0.),
            (12., 0.),
            (12., 10.),
            (6.5, 4.),
            (6., 10.),
            (0., 10.),
        ]
        .iter()
        .map(|&q| q.into())
        .collect(),
    )
    .unwrap();
    let (p, v, t) = (
        Point::new(4.35, 9.875),
        Point::new(6.5, 4.),
        Point::new(10.5, 8.),
    );
    let d = Detour {
        c_in: vec![t],
        c_out: vec![p],
    };
    let path = d.build(&[p, v, t]).unwrap();
    let diam = hook.diameter();
    let reports = verify_all(&path, VerifyConfig::for_diameter(diam)).unwrap();
    assert!(path_inside(&hook, &path, 1e-4 * diam));
    assert!(reports.iter().all(|r| r.pass), "{reports:?}");
}
