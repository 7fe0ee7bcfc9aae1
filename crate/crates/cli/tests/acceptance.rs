//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs every criterion by default; numeric arguments select a subset, as in
//! `cargo test --release --test acceptance -- 3 7`.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ic_paths::dead_region::{symmetric_difference_area, DeadRegion};
use ic_paths::fixtures::{corpus, dart, grid_pockets, hook, random_convex};
use ic_paths::geodesic::shortest_path_simple;
use ic_paths::ic::{shortest_increasing_chords_path, IcResult, Status, Tolerances};
use ic_paths::io::{to_json, Instance};
use ic_paths::oracle::{falsification_search, grid_comparison, local_shortening, SearchBudget};
use ic_paths::verify::{
    check_increasing_chords, geodesic_between_check, verify_all, Property, VerifyConfig,
};
use ic_paths::{CurvePiece, Point, SimplePolygon};
use ic_paths_cli::{ResultFile, EXIT_OK};

const CONVEX_COUNT: usize = 1000;
const CONVEX_REL: f64 = 1e-9;
const CONVEX_SECONDS: f64 = 10.0;
const BOUND_ABS_REL: f64 = 1e-6;
const CORPUS_MIN: usize = 30;
const VERIFY_N: usize = 20_000;
const VERIFY_REL: f64 = 1e-7;
const VERIFY_SECONDS: f64 = 30.0;
const PAIRS: usize = 50;
const PAIR_BUDGET: usize = 2000;
const SHORTER_BY_DELTAS: f64 = 10.0;
const SEARCH_BUDGET: usize = 10_000;
const SEARCH_REFINEMENTS: usize = 40;
const GRID: usize = 40;
const GRID_BUDGET: usize = 48;
const GRID_AGREEMENT: f64 = 0.97;
const GRID_SECONDS: f64 = 300.0;
const REFINE_LEVELS: usize = 3;
const REFINE_DELTAS: f64 = 4.0;
const SYMMETRY_REL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn tol_for(poly: &SimplePolygon) -> Tolerances {
    Tolerances::for_polygon(poly)
}

fn solve(inst: &Instance) -> (SimplePolygon, IcResult) {
    let poly = inst.simple_polygon().expect("fixture polygon");
    let r = shortest_increasing_chords_path(&poly, inst.s, inst.t, tol_for(&poly))
        .expect("pipeline runs");
    (poly, r)
}

fn all_regions(r: &IcResult) -> Vec<DeadRegion> {
    r.regions.s.iter().chain(&r.regions.t).cloned().collect()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn convex_segments() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let start = Instant::now();
    for k in 0..CONVEX_COUNT {
        let polygon = random_convex(&mut rng);
        let c = polygon.iter().fold(Point::ZERO, |a, &b| a + b) / polygon.len() as f64;
        let s = c.lerp(polygon[0], rng.gen_range(0.0..0.9));
        let t = c.lerp(polygon[1], rng.gen_range(0.0..0.9));
        let inst = Instance::new(format!("convex-{k}"), polygon, s, t);
        let input = dir.path().join("in.json");
        let out = dir.path().join("out.json");
        fs::write(&input, to_json(&inst)).unwrap();
        let code = ic_paths_cli::run([
            "ic-paths",
            "compute",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        let rf: Option<ResultFile> = fs::read_to_string(&out)
            .ok()
            .and_then(|t| serde_json::from_str(&t).ok());
        let segment =
            rf.as_ref()
                .and_then(|rf| match rf.result.path.as_ref().map(|p| p.pieces()) {
                    Some([CurvePiece::Segment { a, b }]) => Some((*a, *b)),
                    _ => None,
                });
        match segment {
            Some((a, b)) if code == EXIT_OK && a == s && b == t => {
                let len = rf.unwrap().result.path.unwrap().length();
                worst = worst.max((len - s.dist(t)).abs() / s.dist(t));
            }
            _ => bad.push(k),
        }
    }
    let elapsed = secs(start.elapsed());
    outcome(
        bad.is_empty() && worst <= CONVEX_REL && elapsed < CONVEX_SECONDS,
        format!(
            "{CONVEX_COUNT} polygons, {} not a single segment, worst relative length error {worst:.1e}, {elapsed:.2} s",
            bad.len()
        ),
    )
}

fn length_bound(fixtures: &[(Instance, SimplePolygon, IcResult)]) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut paths = 0;
    let mut violations = Vec::new();
    for (inst, poly, r) in fixtures {
        let Some(path) = &r.path else { continue };
        paths += 1;
        let bound = 2.0 * PI / 3.0 * inst.s.dist(inst.t) + BOUND_ABS_REL * poly.diameter();
        let ratio = path.length() / inst.s.dist(inst.t);
        worst = worst.max(ratio);
        if path.length() > bound {
            violations.push(inst.name.clone());
        }
    }
    outcome(
        fixtures.len() >= CORPUS_MIN && violations.is_empty(),
        format!(
            "{} fixtures, {paths} paths, worst length/|st| {worst:.4} (limit {:.4}), violations {violations:?}",
            fixtures.len(),
            2.0 * PI / 3.0
        ),
    )
}

fn certification() -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    for inst in corpus() {
        let start = Instant::now();
        let (poly, r) = solve(&inst);
        let Some(path) = &r.path else { continue };
        let tol = VERIFY_REL * poly.diameter();
        let reports = verify_all(path, VerifyConfig { n: VERIFY_N, tol }).expect("verifier runs");
        slowest = slowest.max(secs(start.elapsed()));
        for rep in reports.iter().filter(|x| {
            matches!(
                x.property,
                Property::IncreasingChords | Property::NormalProperty | Property::HalfPlane
            )
        }) {
            worst_margin = worst_margin.min(rep.worst_margin / poly.diameter());
            if !rep.pass {
                failures.push(format!("{}:{}", inst.name, rep.property.name()));
            }
        }
    }
    let h = hook();
    let poly = h.simple_polygon().unwrap();
    let geo = shortest_path_simple(&poly, h.s, h.t).unwrap();
    let rep = check_increasing_chords(&geo, VERIFY_N, VERIFY_REL * poly.diameter());
    let geodesic_rejected = !rep.pass && rep.witness.is_some();
    outcome(
        failures.is_empty() && geodesic_rejected && slowest < VERIFY_SECONDS,
        format!(
            "failures {failures:?}, worst margin {worst_margin:.1e}·diam, slowest {slowest:.2} s; hook geodesic (length {:.4}) rejected: {geodesic_rejected}, witness {:?}",
            geo.length(),
            rep.witness
        ),
    )
}

fn geodesic_between_pairs() -> Outcome {
    let fixtures = corpus();
    let mut checked = 0;
    let mut missing = Vec::new();
    let mut failures = Vec::new();
    for k in 0..PAIRS {
        let inst = &fixtures[k % fixtures.len()];
        let poly = inst.simple_polygon().unwrap();
        let tol = VERIFY_REL * poly.diameter();
        let mut budget = SearchBudget::new(PAIR_BUDGET, 1000 + 2 * k as u64);
        budget.exclude_geodesic = true;
        let p1 = falsification_search(&poly, inst.s, inst.t, budget);
        budget.seed += 1;
        let p2 = falsification_search(&poly, inst.s, inst.t, budget);
        let (Some(p1), Some(p2)) = (p1, p2) else {
            missing.push(inst.name.clone());
            continue;
        };
        checked += 1;
        match geodesic_between_check(&p1, &p2, VERIFY_N, tol) {
            Ok(r) if r.pass => {}
            Ok(r) => failures.push(format!("{} margin {:.1e}", inst.name, r.worst_margin)),
            Err(e) => failures.push(format!("{}: {e}", inst.name)),
        }
    }
    outcome(
        checked == PAIRS && failures.is_empty(),
        format!("{checked}/{PAIRS} pairs checked, pair not found for {missing:?}, failures {failures:?}"),
    )
}

fn uniqueness(fixtures: &[(Instance, SimplePolygon, IcResult)]) -> Outcome {
    let mut worst_gain = 0.0f64;
    let mut shorter = Vec::new();
    let mut searched = 0;
    let start = Instant::now();
    for (inst, poly, r) in fixtures {
        let Some(path) = &r.path else { continue };
        let limit = SHORTER_BY_DELTAS * r.tolerances.delta;
        let out = local_shortening(
            path,
            poly,
            &all_regions(r),
            SearchBudget::new(1, SearchBudget::DEFAULT_SEED),
        );
        let gain = path.length() - out.length();
        worst_gain = worst_gain.max(gain / r.tolerances.delta);
        if gain >= limit {
            shorter.push(format!("{} shortened by {gain:.2e}", inst.name));
        }
        let mut budget = SearchBudget::new(SEARCH_BUDGET, SearchBudget::DEFAULT_SEED);
        budget.max_refinements = SEARCH_REFINEMENTS;
        budget.max_length = Some(path.length() - limit);
        searched += 1;
        if let Some(p) = falsification_search(poly, inst.s, inst.t, budget) {
            shorter.push(format!(
                "{} search found {:.9} < {:.9}",
                inst.name,
                p.length(),
                path.length()
            ));
        }
    }
    outcome(
        shorter.is_empty(),
        format!(
            "{searched} fixtures, worst local gain {worst_gain:.2}·delta, shorter paths {shorter:?}, {:.0} s",
            secs(start.elapsed())
        ),
    )
}

fn grid_agreement() -> Outcome {
    let mut instances = vec![dart(), hook()];
    instances.extend(grid_pockets());
    let mut pass = true;
    let mut parts = Vec::new();
    for inst in &instances {
        let poly = inst.simple_polygon().unwrap();
        let start = Instant::now();
        let budget = SearchBudget::new(GRID_BUDGET, SearchBudget::DEFAULT_SEED);
        let r =
            grid_comparison(&poly, inst.t, GRID, budget, tol_for(&poly).tol).expect("grid runs");
        let elapsed = secs(start.elapsed());
        let ok = r.agreement >= GRID_AGREEMENT && r.disagreements_in_band && elapsed < GRID_SECONDS;
        pass &= ok;
        parts.push(format!(
            "{} {:.1}% of {} ({} dead, {} off, {elapsed:.0} s){}",
            inst.name,
            100.0 * r.agreement,
            r.cells.len(),
            r.matrix[1][1],
            r.disagreements.len(),
            if ok { "" } else { " FAIL" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn refinement() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_change = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for inst in corpus() {
        let poly = inst.simple_polygon().unwrap();
        let base = tol_for(&poly);
        let levels: Vec<(f64, f64, Vec<DeadRegion>)> = (0..REFINE_LEVELS)
            .map(|k| {
                let f = 0.5f64.powi(k as i32);
                let tol = Tolerances {
                    tol: base.tol * f,
                    delta: base.delta * f,
                };
                let r = shortest_increasing_chords_path(&poly, inst.s, inst.t, tol)
                    .expect("pipeline runs");
                let len = r.path.as_ref().map_or(f64::NAN, |p| p.length());
                (tol.delta, len, all_regions(&r))
            })
            .collect();
        let mut areas = Vec::new();
        for w in levels.windows(2) {
            let change = (w[0].1 - w[1].1).abs();
            worst_change = worst_change.max(change / w[0].0);
            if !(change <= REFINE_DELTAS * w[0].0) {
                bad.push(format!("{} length change {change:.2e}", inst.name));
            }
            areas.push(symmetric_difference_area(&w[0].2, &w[1].2));
        }
        for w in areas.windows(2) {
            if w[0] > 0.0 {
                worst_ratio = worst_ratio.max(w[1] / w[0]);
            }
            if w[1] > w[0] {
                bad.push(format!(
                    "{} region difference grew {:.2e} -> {:.2e}",
                    inst.name, w[0], w[1]
                ));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{REFINE_LEVELS} levels, worst length change {worst_change:.2}·delta, worst area ratio {worst_ratio:.3}, issues {bad:?}"
        ),
    )
}

fn direction_symmetry(fixtures: &[(Instance, SimplePolygon, IcResult)]) -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (inst, poly, r) in fixtures {
        let back = shortest_increasing_chords_path(poly, inst.t, inst.s, r.tolerances)
            .expect("pipeline runs");
        match (&r.path, &back.path) {
            (Some(a), Some(b)) => {
                let rel = (a.length() - b.length()).abs() / a.length();
                worst = worst.max(rel);
                if rel > SYMMETRY_REL {
                    bad.push(inst.name.clone());
                }
            }
            (None, None) => {}
            _ => bad.push(inst.name.clone()),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} fixtures, worst relative difference {worst:.1e}, mismatches {bad:?}",
            fixtures.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let mut differing = Vec::new();
    let mut checked = Vec::new();
    let fixtures = corpus();
    let picks = ["hook", "spike-5", "double-8"];
    for inst in fixtures.iter().filter(|i| picks.contains(&i.name.as_str())) {
        let input = dir.path().join(format!("{}.json", inst.name));
        fs::write(&input, to_json(inst)).unwrap();
        let mut runs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{}-{k}.json", inst.name));
            let svg = dir.path().join(format!("{}-{k}.svg", inst.name));
            let status = Command::new(env!("CARGO_BIN_EXE_ic-paths"))
                .args([
                    "compute",
                    input.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap(),
                    "--svg",
                    svg.to_str().unwrap(),
                ])
                .env_remove("IC_PATHS_SEED")
                .status()
                .expect("binary runs");
            runs.push((status.code(), fs::read(out).ok(), fs::read(svg).ok()));
        }
        let ok = runs[0].0 == Some(EXIT_OK)
            && runs[0].1.is_some()
            && runs[0].2.is_some()
            && runs[0] == runs[1];
        if !ok {
            differing.push(inst.name.clone());
        }
        checked.push(inst.name.clone());
    }
    outcome(
        differing.is_empty(),
        format!("compared {checked:?} over two runs, differing {differing:?}"),
    )
}

fn main() {
    let selected: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let wanted = |k: u8| selected.is_empty() || selected.contains(&k);
    let fixtures: Vec<(Instance, SimplePolygon, IcResult)> = if [2, 5, 8].iter().any(|&k| wanted(k))
    {
        corpus()
            .into_iter()
            .map(|inst| {
                let (poly, r) = solve(&inst);
                (inst, poly, r)
            })
            .collect()
    } else {
        Vec::new()
    };
    let paths = fixtures
        .iter()
        .filter(|f| f.2.status == Status::Path)
        .count();
    if !fixtures.is_empty() {
        println!(
            "acceptance: {} fixtures, {paths} with status path",
            fixtures.len()
        );
    }

    type Criterion<'a> = (u8, &'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "convex pairs give the straight segment",
            Box::new(convex_segments),
        ),
        (
            2,
            "length within 2π/3 of |st|",
            Box::new(|| length_bound(&fixtures)),
        ),
        (3, "verifier certification", Box::new(certification)),
        (
            4,
            "geodesic between verified pairs",
            Box::new(geodesic_between_pairs),
        ),
        (
            5,
            "no shorter path found",
            Box::new(|| uniqueness(&fixtures)),
        ),
        (
            6,
            "region and search agreement on grids",
            Box::new(grid_agreement),
        ),
        (7, "refinement stability", Box::new(refinement)),
        (
            8,
            "direction symmetry",
            Box::new(|| direction_symmetry(&fixtures)),
        ),
        (9, "byte-identical outputs", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (k, name, run) in criteria.iter().filter(|c| wanted(c.0)) {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {k} {}: {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            secs(start.elapsed())
        );
        std::io::stdout().flush().ok();
        if !o.pass {
            failed.push(*k);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all selected criteria pass");
}
