use ic_paths::fixtures;
use ic_paths::ic::{shortest_increasing_chords_path, IcResult, Tolerances};
use ic_paths::io::{to_json, write_atomic, Instance};
use ic_paths::svg::render;

fn compute(inst: &Instance) -> IcResult {
    let poly = inst.simple_polygon().unwrap();
    shortest_increasing_chords_path(&poly, inst.s, inst.t, Tolerances::for_polygon(&poly)).unwrap()
}

#[test]
fn instance_schema_round_trips() {
    let text = r#"{"name": "dart", "polygon": [[0,0],[10,0],[10,10],[5,5],[0,10]], "s": [1,7], "t": [9,7]}"#;
    let inst: Instance = serde_json::from_str(text).unwrap();
    assert_eq!(inst, fixtures::dart());
    let back: Instance = serde_json::from_str(&to_json(&inst)).unwrap();
    assert_eq!(back, inst);
}

#[test]
fn bowtie_is_rejected() {
    let text =
        r#"{"name": "bowtie", "polygon": [[0,0],[2,2],[2,0],[0,2]], "s": [1,0.5], "t": [1,1.5]}"#;
    let inst: Instance = serde_json::from_str(text).unwrap();
    assert!(matches!(
        inst.simple_polygon(),
        Err(ic_paths::Error::Geom(ic_paths::GeomError::NotSimple(_)))
    ));
}

#[test]
fn atomic_write_replaces_the_file() {
    let dir = std::env::temp_dir().join(format!("ic-paths-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("out.json");
    write_atomic(&f, b"one").unwrap();
    write_atomic(&f, b"two").unwrap();
    assert_eq!(std::fs::read(&f).unwrap(), b"two");
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn convex_svg_has_one_polyline_and_no_regions() {
    let inst = fixtures::square();
    let r = compute(&inst);
    let svg = render(&inst.polygon, inst.s, inst.t, Some(&r));
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(!svg.contains("regions-"));
    assert!(svg.contains(r#"viewBox="0 0 1000 1000""#));
}

#[test]
fn hook_svg_has_two_region_groups_and_one_path_group() {
    let inst = fixtures::hook();
    let r = compute(&inst);
    let svg = render(&inst.polygon, inst.s, inst.t, Some(&r));
    assert_eq!(svg.matches(r#"<g class="regions-"#).count(), 2);
    assert_eq!(svg.matches(r#"<g class="path""#).count(), 1);
    assert!(svg.contains("#1f5fd6") && svg.contains("#d62728") && svg.contains("#8e24aa"));
}

#[test]
fn output_is_byte_stable() {
    let inst = fixtures::hook();
    let (a, b) = (compute(&inst), compute(&inst));
    assert_eq!(to_json(&a), to_json(&b));
    assert_eq!(
        render(&inst.polygon, inst.s, inst.t, Some(&a)),
        render(&inst.polygon, inst.s, inst.t, Some(&b))
    );
}

#[test]
fn result_json_round_trips() {
    let inst = fixtures::hook();
    let r = compute(&inst);
    let text = to_json(&r);
    let back: IcResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back.status, r.status);
    assert_eq!(back.path, r.path);
    assert_eq!(to_json(&back), text);
}

#[test]
fn svg_of_a_reloaded_result_matches() {
    let inst = fixtures::hook();
    let r = compute(&inst);
    let back: IcResult = serde_json::from_str(&to_json(&r)).unwrap();
    assert_eq!(
        render(&inst.polygon, inst.s, inst.t, Some(&r)),
        render(&inst.polygon, inst.s, inst.t, Some(&back))
    );
}
