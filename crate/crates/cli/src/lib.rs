//! Command implementations behind the `ic-paths` binary.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ic_paths::ic::{shortest_increasing_chords_path_with, IcResult, Status, Tolerances};
use ic_paths::io::{to_json, write_atomic, Instance};
use ic_paths::oracle::{grid_comparison, GridReport, SearchBudget};
use ic_paths::svg::render;
use ic_paths::verify::{verify_all, VerifyConfig, VerifyReport};
use ic_paths::{Error, PiecewisePath, SimplePolygon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const SEED_ENV: &str = "IC_PATHS_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "ic-paths",
    version,
    about = "Shortest increasing-chords paths in simple polygons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the shortest increasing-chords path of an instance.
    Compute(ComputeArgs),
    /// Run the verifier suite on a path or result file.
    Verify(VerifyArgs),
    /// Render a result file as SVG.
    Render(RenderArgs),
    /// Compare dead-region membership with randomized search on a grid.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    pub instance: PathBuf,
    /// Construction tolerance; defaults to 1e-7 times the diameter.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Flattening error; defaults to the tolerance.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Verifier sample count.
    #[arg(long, default_value_t = VerifyConfig::DEFAULT_N)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Path JSON or result JSON.
    pub path: PathBuf,
    pub instance: PathBuf,
    #[arg(long, default_value_t = VerifyConfig::DEFAULT_N)]
    pub n: usize,
    /// Verifier tolerance; defaults to 1e-7 times the diameter.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    pub result: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Candidates per grid cell.
    #[arg(long, default_value_t = 48)]
    pub budget: usize,
    #[arg(long, default_value_t = 40)]
    pub grid: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result file: the instance together with the computed result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultFile {
    pub instance: Instance,
    #[serde(flatten)]
    pub result: IcResult,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub pass: bool,
    pub reports: Vec<VerifyReport>,
}

#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_instance(path: &Path) -> CliResult<(Instance, SimplePolygon)> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let inst: Instance =
        serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let poly = inst.simple_polygon()?;
    Ok((inst, poly))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => Ok(write_atomic(p, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Seed from the flag, else the environment, else the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError(format!("{SEED_ENV}: not an integer: {v}"))),
        Err(_) => Ok(SearchBudget::DEFAULT_SEED),
    }
}

pub fn tolerances(poly: &SimplePolygon, tol: Option<f64>, delta: Option<f64>) -> Tolerances {
    let base = Tolerances::for_polygon(poly);
    let tol = tol.unwrap_or(base.tol);
    Tolerances {
        tol,
        delta: delta.unwrap_or(tol),
    }
}

/// Runs the pipeline; verification failures come back as the failing
/// reports.
pub fn compute(
    inst: &Instance,
    poly: &SimplePolygon,
    tol: Tolerances,
    n: usize,
) -> CliResult<std::result::Result<IcResult, Vec<VerifyReport>>> {
    match shortest_increasing_chords_path_with(poly, inst.s, inst.t, tol, n) {
        Ok(r) => Ok(Ok(r)),
        Err(Error::VerificationFailed(reports)) => Ok(Err(reports)),
        Err(e) => Err(e.into()),
    }
}

fn cmd_compute(a: &ComputeArgs) -> CliResult<i32> {
    let (inst, poly) = read_instance(&a.instance)?;
    let tol = tolerances(&poly, a.tol, a.delta);
    let result = match compute(&inst, &poly, tol, a.n)? {
        Ok(r) => r,
        Err(reports) => {
            let out = VerifyOutput {
                pass: false,
                reports,
            };
            emit(a.out.as_deref(), &to_json(&out))?;
            eprintln!("verification failed");
            return Ok(EXIT_VERIFY);
        }
    };
    if let Some(svg) = &a.svg {
        write_atomic(
            svg,
            render(&inst.polygon, inst.s, inst.t, Some(&result)).as_bytes(),
        )?;
    }
    let code = if result.status == Status::Path {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    };
    emit(
        a.out.as_deref(),
        &to_json(&ResultFile {
            instance: inst,
            result,
        }),
    )?;
    Ok(code)
}

/// Reads either a bare path or the path of a result file.
fn read_path(path: &Path) -> CliResult<Option<PiecewisePath>> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("status").is_some() {
        let rf: ResultFile = serde_json::from_value(value)?;
        return Ok(rf.result.path);
    }
    Ok(Some(serde_json::from_value(value)?))
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<i32> {
    let (inst, poly) = read_instance(&a.instance)?;
    let Some(path) = read_path(&a.path)? else {
        return Err(CliError("result has no path".into()));
    };
    let tol = a.tol.unwrap_or(VerifyConfig::REL_TOL * poly.diameter());
    let slack = 1e-9 * poly.diameter();
    if path.start().dist(inst.s) > slack || path.end().dist(inst.t) > slack {
        return Err(CliError("path endpoints do not match the instance".into()));
    }
    let reports = verify_all(&path, VerifyConfig { n: a.n, tol })?;
    let pass = reports.iter().all(|r| r.pass);
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!(
            "{} fails: margin {:e}, witness {:?}",
            r.property.name(),
            r.worst_margin,
            r.witness
        );
    }
    emit(a.out.as_deref(), &to_json(&VerifyOutput { pass, reports }))?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_render(a: &RenderArgs) -> CliResult<i32> {
    let text = fs::read_to_string(&a.result)
        .map_err(|e| CliError(format!("{}: {e}", a.result.display())))?;
    let rf: ResultFile = serde_json::from_str(&text)?;
    let svg = render(
        &rf.instance.polygon,
        rf.instance.s,
        rf.instance.t,
        Some(&rf.result),
    );
    emit(a.svg.as_deref(), &svg)?;
    Ok(EXIT_OK)
}

/// Grid comparison around `t`.
pub fn oracle_report(
    inst: &Instance,
    poly: &SimplePolygon,
    grid: usize,
    budget: SearchBudget,
    tol: f64,
) -> CliResult<GridReport> {
    Ok(grid_comparison(poly, inst.t, grid, budget, tol)?)
}

fn cmd_oracle(a: &OracleArgs) -> CliResult<i32> {
    let (inst, poly) = read_instance(&a.instance)?;
    let seed = resolve_seed(a.seed)?;
    let tol = a.tol.unwrap_or(Tolerances::for_polygon(&poly).tol);
    let report = oracle_report(&inst, &poly, a.grid, SearchBudget::new(a.budget, seed), tol)?;
    eprintln!(
        "{}: agreement {:.4}, matrix {:?}, disagreements in band: {}",
        inst.name, report.agreement, report.matrix, report.disagreements_in_band
    );
    emit(a.out.as_deref(), &to_json(&report))?;
    Ok(EXIT_OK)
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match out {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}
