use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ic_paths::fixtures::{dart, hook, square};
use ic_paths::io::{to_json, Instance};
use ic_paths::oracle::GridReport;
use ic_paths::{PiecewisePath, Point};
use ic_paths_cli::{ResultFile, VerifyOutput, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, EXIT_VERIFY};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ic-paths"));
    c.env_remove("IC_PATHS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn put_instance(dir: &TempDir, inst: &Instance) -> PathBuf {
    put(dir, &format!("{}.json", inst.name), &to_json(inst))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn compute(dir: &TempDir, inst: &Instance) -> (i32, PathBuf) {
    let input = put_instance(dir, inst);
    let out = dir.path().join(format!("{}.result.json", inst.name));
    let o = run(&["compute", s(&input), "--out", s(&out)]);
    (code(&o), out)
}

fn read_result(p: &Path) -> ResultFile {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn compute_convex() {
    let dir = TempDir::new().unwrap();
    let (c, out) = compute(&dir, &square());
    assert_eq!(c, EXIT_OK);
    let len = read_result(&out).result.path.unwrap().length();
    assert!((len - 8.4853).abs() < 1e-4 && (len - 72f64.sqrt()).abs() < 1e-6);
}

#[test]
fn compute_hook() {
    let dir = TempDir::new().unwrap();
    let (c, out) = compute(&dir, &hook());
    assert_eq!(c, EXIT_OK);
    let rf = read_result(&out);
    assert!(rf.result.path.unwrap().length() > 11.7602);
    assert_eq!(rf.instance, hook());
}

#[test]
fn compute_bowtie_is_error() {
    let dir = TempDir::new().unwrap();
    let input = put(
        &dir,
        "bowtie.json",
        r#"{"name":"bowtie","polygon":[[0,0],[2,2],[2,0],[0,2]],"s":[0.5,0.2],"t":[1.5,0.2]}"#,
    );
    let o = run(&["compute", s(&input)]);
    assert_eq!(code(&o), EXIT_ERROR);
    assert!(String::from_utf8_lossy(&o.stderr).contains("simple"));
}

#[test]
fn compute_infeasible() {
    let dir = TempDir::new().unwrap();
    let (c, out) = compute(&dir, &ic_paths::fixtures::hook_dead());
    assert_eq!(c, EXIT_INFEASIBLE);
    assert!(read_result(&out).result.path.is_none());
}

#[test]
fn malformed_input_is_error() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "bad.json", r#"{"name":"x","polygon":[[0,0]]}"#);
    assert_eq!(code(&run(&["compute", s(&input)])), EXIT_ERROR);
    assert_eq!(
        code(&run(&["compute", "/nonexistent/instance.json"])),
        EXIT_ERROR
    );
    assert_eq!(
        code(&run(&["compute", s(&input), "--tol", "abc"])),
        EXIT_ERROR
    );
    assert_eq!(code(&run(&["frobnicate"])), EXIT_ERROR);
    assert_eq!(code(&run(&["--help"])), EXIT_OK);
}

fn verify_path(
    dir: &TempDir,
    inst: &Instance,
    path: &PiecewisePath,
) -> (i32, Option<VerifyOutput>) {
    let ip = put_instance(dir, inst);
    let pp = put(dir, "path.json", &to_json(path));
    let out = dir.path().join("report.json");
    let _ = fs::remove_file(&out);
    let o = run(&["verify", s(&pp), s(&ip), "--out", s(&out)]);
    let report = fs::read_to_string(&out)
        .ok()
        .map(|t| serde_json::from_str(&t).unwrap());
    (code(&o), report)
}

#[test]
fn verify_segment_in_square() {
    let dir = TempDir::new().unwrap();
    let inst = square();
    let path = PiecewisePath::from_polyline(&[inst.s, inst.t]).unwrap();
    let (c, r) = verify_path(&dir, &inst, &path);
    assert_eq!(c, EXIT_OK);
    assert!(r.unwrap().pass);
}

#[test]
fn verify_bent_path_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let corner = Point::new(4., 2.);
    let end = corner + Point::new(-1., 3f64.sqrt()) * 2.;
    let inst = Instance::new("bend", square().polygon, Point::new(2., 2.), end);
    let path = PiecewisePath::from_polyline(&[inst.s, corner, end]).unwrap();
    let (c, r) = verify_path(&dir, &inst, &path);
    assert_eq!(c, EXIT_VERIFY);
    let r = r.unwrap();
    assert!(!r.pass);
    let chords = r
        .reports
        .iter()
        .find(|x| x.property.name() == "increasing_chords")
        .unwrap();
    assert!(!chords.pass && chords.witness.is_some());
}

#[test]
fn verify_dart_geodesic() {
    let dir = TempDir::new().unwrap();
    let inst = dart();
    let path =
        ic_paths::geodesic::shortest_path_simple(&inst.simple_polygon().unwrap(), inst.s, inst.t)
            .unwrap();
    assert_eq!(verify_path(&dir, &inst, &path).0, EXIT_OK);
}

#[test]
fn verify_schema_mismatch() {
    let dir = TempDir::new().unwrap();
    let ip = put_instance(&dir, &square());
    let pp = put(&dir, "junk.json", r#"{"pieces": 3}"#);
    assert_eq!(code(&run(&["verify", s(&pp), s(&ip)])), EXIT_ERROR);
    let other = PiecewisePath::from_polyline(&[Point::new(1., 1.), Point::new(9., 9.)]).unwrap();
    let pp = put(&dir, "other.json", &to_json(&other));
    assert_eq!(code(&run(&["verify", s(&pp), s(&ip)])), EXIT_ERROR);
}

#[test]
fn compute_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    for inst in [square(), dart(), hook()] {
        let (c, out) = compute(&dir, &inst);
        assert_eq!(c, EXIT_OK);
        let ip = put_instance(&dir, &inst);
        assert_eq!(
            code(&run(&["verify", s(&out), s(&ip)])),
            EXIT_OK,
            "{}",
            inst.name
        );
    }
}

fn render(dir: &TempDir, inst: &Instance) -> String {
    let (_, out) = compute(dir, inst);
    let svg = dir.path().join(format!("{}.svg", inst.name));
    assert_eq!(code(&run(&["render", s(&out), "--svg", s(&svg)])), EXIT_OK);
    fs::read_to_string(svg).unwrap()
}

#[test]
fn render_convex() {
    let dir = TempDir::new().unwrap();
    let svg = render(&dir, &square());
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(!svg.contains("regions-"));
}

#[test]
fn render_hook() {
    let dir = TempDir::new().unwrap();
    let svg = render(&dir, &hook());
    assert_eq!(svg.matches("<g class=\"regions-").count(), 2);
    assert_eq!(svg.matches("<g class=\"path\"").count(), 1);
}

#[test]
fn compute_svg_matches_render() {
    let dir = TempDir::new().unwrap();
    let input = put_instance(&dir, &hook());
    let (out, svg) = (dir.path().join("r.json"), dir.path().join("a.svg"));
    let o = run(&["compute", s(&input), "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(code(&o), EXIT_OK);
    let again = run(&["render", s(&out)]);
    assert_eq!(fs::read(&svg).unwrap(), again.stdout);
}

fn oracle(dir: &TempDir, inst: &Instance, grid: usize, extra: &[&str]) -> GridReport {
    let input = put_instance(dir, inst);
    let out = dir.path().join(format!("{}.grid.json", inst.name));
    let g = grid.to_string();
    let mut args = vec!["oracle", s(&input), "--grid", &g, "--out", s(&out)];
    args.extend(extra);
    assert_eq!(code(&run(&args)), EXIT_OK);
    serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn oracle_convex() {
    let dir = TempDir::new().unwrap();
    let r = oracle(&dir, &square(), 20, &[]);
    assert_eq!(r.agreement, 1.0);
    assert_eq!(r.matrix[1], [0, 0]);
    assert_eq!(r.matrix[0][1], 0);
}

#[test]
fn oracle_dart() {
    let dir = TempDir::new().unwrap();
    let r = oracle(&dir, &dart(), 40, &[]);
    assert_eq!(r.agreement, 1.0);
    assert_eq!(r.matrix[0][0], r.cells.len());
}

#[test]
fn oracle_hook() {
    let dir = TempDir::new().unwrap();
    let r = oracle(&dir, &hook(), 40, &[]);
    assert!(r.agreement >= 0.97, "agreement {}", r.agreement);
    assert!(r.disagreements_in_band);
    assert!(r.matrix[1][1] > 0);
}

#[test]
fn seed_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let input = put_instance(&dir, &square());
    let grid = |args: &[&str], env: Option<&str>| {
        let mut c = bin();
        c.args(["oracle", s(&input), "--grid", "4"]).args(args);
        if let Some(v) = env {
            c.env("IC_PATHS_SEED", v);
        }
        let o = c.output().unwrap();
        (code(&o), o.stdout)
    };
    let (c, base) = grid(&[], None);
    assert_eq!(c, EXIT_OK);
    assert_eq!(grid(&[], Some("7")).0, EXIT_OK);
    assert_eq!(grid(&["--seed", "7"], Some("not-a-number")).0, EXIT_OK);
    assert_eq!(grid(&[], Some("not-a-number")).0, EXIT_ERROR);
    assert_eq!(grid(&[], None).1, base);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = put_instance(&dir, &hook());
    let mut files = Vec::new();
    for k in 0..2 {
        let (out, svg) = (
            dir.path().join(format!("r{k}.json")),
            dir.path().join(format!("r{k}.svg")),
        );
        assert_eq!(
            code(&run(&[
                "compute",
                s(&input),
                "--out",
                s(&out),
                "--svg",
                s(&svg)
            ])),
            EXIT_OK
        );
        files.push((fs::read(out).unwrap(), fs::read(svg).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}
