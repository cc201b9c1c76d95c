//! Command line front end for the operator laboratory.
//!
//! Builds operator tables from spec files, audits their axioms, convolves
//! fuzzy truth value files, and drives the distributivity suites and the
//! counterexample search. Summaries go to standard output; tables, reports
//! and witnesses go to files, each accompanied by a JSON manifest that
//! records the resolved configuration and input digests.
//!
//! Exit status is the machine contract: 0 on success, 1 on a mathematical
//! failure (axiom violation, failed residual check, failing trials,
//! exhausted search), 2 on usage or configuration errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use t2alg::lab::{
    falsifiability_pair, run_suite, search_counterexample, Comparison, LabError, Sampling, Side,
    Subject, SuiteConfig, TheoremId,
};
use t2alg::ops::{
    load_operator_spec, validate_nullnorm, validate_tconorm, validate_uninorm,
    validate_zk_operator,
};
use t2alg::{
    axiom_report, build_operator, check_conditional_distributivity, convolve, join, meet, CdMode,
    ConvMode, Ftv, Grid,
};

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error(transparent)]
    Op(#[from] t2alg::OpError),
    #[error(transparent)]
    Ftv(#[from] t2alg::FtvError),
    #[error(transparent)]
    Grid(#[from] t2alg::GridError),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("cannot encode manifest: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser)]
#[command(
    name = "t2alg",
    version,
    about = "Aggregation operators on a quantized unit interval: tables, sup-min convolution, distributivity suites"
)]
struct Cli {
    /// Cap the number of worker threads used by suites and searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and audit operator tables.
    #[command(subcommand)]
    Ops(OpsCommand),
    /// Convolve and combine fuzzy truth value files.
    #[command(subcommand)]
    Ftv(FtvCommand),
    /// Run distributivity suites and counterexample searches.
    #[command(subcommand)]
    Dist(DistCommand),
}

#[derive(Subcommand)]
enum OpsCommand {
    /// Build an operator table from a spec file.
    Build(OpsBuild),
    /// Audit an operator against the aggregation axioms.
    Check(OpsCheck),
    /// Measure conditional distributivity of one operator over another.
    CdCheck(OpsCdCheck),
}

#[derive(Args)]
struct OpsBuild {
    /// Operator spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Grid resolution.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Output table CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpClass {
    Tnorm,
    Tconorm,
    Uninorm,
    Nullnorm,
    Zk,
}

#[derive(Args)]
struct OpsCheck {
    /// Operator spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Grid resolution.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Validate against a specific operator class on top of the report.
    #[arg(long, value_enum)]
    class: Option<OpClass>,
}

#[derive(Args)]
struct OpsCdCheck {
    /// Spec file of the distributing (outer) operator.
    #[arg(long)]
    outer: PathBuf,
    /// Spec file of the inner operator.
    #[arg(long)]
    inner: PathBuf,
    /// Grid resolution.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Which side to check: cd, cdl or cdr.
    #[arg(long, value_parser = CdMode::from_str, default_value = "cd")]
    mode: CdMode,
    /// Residual tolerance.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
}

#[derive(Subcommand)]
enum FtvCommand {
    /// Convolve two fuzzy truth values through an operator.
    Conv(FtvConv),
    /// Pointwise combination through the minimum convolution.
    Meet(FtvPair),
    /// Pointwise combination through the maximum convolution.
    Join(FtvPair),
}

#[derive(Args)]
struct FtvConv {
    /// Operator spec file; the table is built at the inputs' resolution.
    #[arg(long)]
    op: PathBuf,
    /// First operand series CSV.
    #[arg(long)]
    f: PathBuf,
    /// Second operand series CSV.
    #[arg(long)]
    g: PathBuf,
    /// Convolution mode: exact or snap.
    #[arg(long, value_parser = ConvMode::from_str, default_value = "exact")]
    mode: ConvMode,
    /// Output series CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FtvPair {
    /// First operand series CSV.
    #[arg(long)]
    f: PathBuf,
    /// Second operand series CSV.
    #[arg(long)]
    g: PathBuf,
    /// Output series CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum DistCommand {
    /// Run a theorem suite of randomized trials.
    Suite(DistSuite),
    /// Search for a counterexample with the convexity hypothesis dropped.
    Search(DistSearch),
}

#[derive(Args)]
struct DistSuite {
    /// Theorem identifier, e.g. T-MIN-MAX-i or T-CD-DISJ.
    #[arg(long, value_parser = TheoremId::from_str)]
    theorem: TheoremId,
    /// Grid resolution.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Number of random trials.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Trial seed; T2ALG_SEED applies when the flag is absent.
    #[arg(long, env = "T2ALG_SEED", default_value_t = 0)]
    seed: u64,
    /// Convolution mode: exact or snap.
    #[arg(long, value_parser = ConvMode::from_str, default_value = "snap")]
    mode: ConvMode,
    /// Comparison rule: strict or dilated.
    #[arg(long, value_parser = Comparison::from_str, default_value = "dilated")]
    comparison: Comparison,
    /// Comparison tolerance.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    /// Override the outer operator fixture with a spec file.
    #[arg(long = "spec-f", alias = "spec-F")]
    spec_f: Option<PathBuf>,
    /// Override the inner operator fixture with a spec file.
    #[arg(long = "spec-u", alias = "spec-U")]
    spec_u: Option<PathBuf>,
    /// Report CSV path; witnesses and the manifest are written alongside.
    #[arg(long, default_value = "suite-report.csv")]
    report: PathBuf,
}

#[derive(Args)]
struct DistSearch {
    /// Override the outer operator fixture with a spec file.
    #[arg(long = "spec-f", alias = "spec-F")]
    spec_f: Option<PathBuf>,
    /// Override the inner operator fixture with a spec file.
    #[arg(long = "spec-u", alias = "spec-U")]
    spec_u: Option<PathBuf>,
    /// Which side of the law to test: left or right.
    #[arg(long, value_parser = Side::from_str, default_value = "left")]
    side: Side,
    /// Which operand to sample outside the convex class: f, g or h.
    #[arg(long, value_parser = Subject::from_str, default_value = "f")]
    subject: Subject,
    /// non-convex, or convex-control for the consistency control.
    #[arg(long, value_parser = Sampling::from_str, default_value = "non-convex")]
    sampling: Sampling,
    /// Grid resolution.
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Trial budget.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Trial seed; T2ALG_SEED applies when the flag is absent.
    #[arg(long, env = "T2ALG_SEED", default_value_t = 0)]
    seed: u64,
    /// Violations must exceed this tolerance.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    /// Convolution mode: exact or snap.
    #[arg(long, value_parser = ConvMode::from_str, default_value = "exact")]
    mode: ConvMode,
    /// Directory for witness files and the manifest.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    config: serde_json::Value,
    inputs: Vec<FileDigest>,
    outputs: Vec<String>,
    exit_status: i32,
    created_unix: u64,
}

fn digest(path: &Path) -> Result<FileDigest, AppError> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in hash {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex,
    })
}

fn write_manifest(
    path: &Path,
    command: &str,
    config: serde_json::Value,
    inputs: &[PathBuf],
    outputs: &[&Path],
    exit_status: i32,
) -> Result<(), AppError> {
    let manifest = Manifest {
        command: command.into(),
        config,
        inputs: inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        exit_status,
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    std::fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

/// `report.csv` -> `report.manifest.json`, next to the file it describes.
fn manifest_sibling(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    base.with_file_name(format!("{stem}{suffix}"))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let jobs = cli.jobs;
    let result = match cli.command {
        Command::Ops(OpsCommand::Build(a)) => ops_build(a),
        Command::Ops(OpsCommand::Check(a)) => ops_check(a),
        Command::Ops(OpsCommand::CdCheck(a)) => ops_cd_check(a),
        Command::Ftv(FtvCommand::Conv(a)) => ftv_conv(a),
        Command::Ftv(FtvCommand::Meet(a)) => ftv_combine(a, "ftv meet"),
        Command::Ftv(FtvCommand::Join(a)) => ftv_combine(a, "ftv join"),
        Command::Dist(DistCommand::Suite(a)) => dist_suite(a, jobs),
        Command::Dist(DistCommand::Search(a)) => dist_search(a, jobs),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn ops_build(a: OpsBuild) -> Result<ExitCode, AppError> {
    let (spec, sources) = load_operator_spec(&a.spec)?;
    let grid = Grid::new(a.n)?;
    let op = build_operator(&grid, &spec)?;
    std::fs::write(&a.out, op.to_csv())?;
    println!("{}", axiom_report(&op));
    println!("table: {}", a.out.display());
    write_manifest(
        &manifest_sibling(&a.out),
        "ops build",
        serde_json::json!({
            "spec": path_str(&a.spec),
            "n": a.n,
            "out": path_str(&a.out),
            "jobs": serde_json::Value::Null,
        }),
        &sources,
        &[&a.out],
        0,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn ops_check(a: OpsCheck) -> Result<ExitCode, AppError> {
    let (spec, _) = load_operator_spec(&a.spec)?;
    let grid = Grid::new(a.n)?;
    let op = build_operator(&grid, &spec)?;
    let report = axiom_report(&op);
    println!("{report}");
    let Some(class) = a.class else {
        return Ok(ExitCode::SUCCESS);
    };
    let verdict = match class {
        OpClass::Tnorm => {
            if report.commutative
                && report.monotone
                && report.associative
                && report.neutral_elements.contains(&a.n)
            {
                Ok("t-norm: neutral element 1".to_string())
            } else {
                Err(t2alg::OpError::Validation(
                    "operator is not a t-norm (commutative, associative, monotone, neutral 1)"
                        .into(),
                ))
            }
        }
        OpClass::Tconorm => validate_tconorm(&op).map(|()| "t-conorm: neutral element 0".into()),
        OpClass::Uninorm => validate_uninorm(&op)
            .map(|p| format!("{} uninorm with neutral element {}", p.class, p.e)),
        OpClass::Nullnorm => {
            validate_nullnorm(&op).map(|p| format!("nullnorm with absorbing element {}", p.k))
        }
        OpClass::Zk => validate_zk_operator(&op)
            .map(|p| format!("relaxed operator with absorbing element {}", p.k)),
    };
    match verdict {
        Ok(msg) => {
            println!("class check: {msg}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("class check failed: {e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn ops_cd_check(a: OpsCdCheck) -> Result<ExitCode, AppError> {
    let (outer_spec, _) = load_operator_spec(&a.outer)?;
    let (inner_spec, _) = load_operator_spec(&a.inner)?;
    let grid = Grid::new(a.n)?;
    let outer = build_operator(&grid, &outer_spec)?;
    let inner = build_operator(&grid, &inner_spec)?;
    let report = check_conditional_distributivity(&outer, &inner, a.mode, a.tol)?;
    println!("{report}");
    if !report.pass {
        if let Some([x, y, z]) = report.witness {
            println!(
                "worst triple: x={}, y={}, z={}",
                grid.point(x),
                grid.point(y),
                grid.point(z)
            );
        }
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn ftv_conv(a: FtvConv) -> Result<ExitCode, AppError> {
    let f = Ftv::load(&a.f)?;
    let g = Ftv::load(&a.g)?;
    let (spec, mut sources) = load_operator_spec(&a.op)?;
    let op = build_operator(f.grid(), &spec)?;
    let result = convolve(&op, &f, &g, a.mode)?;
    result.save(&a.out)?;
    println!(
        "wrote {} (max grade {:.6}, convex: {})",
        a.out.display(),
        result.max_grade(),
        if result.is_convex() { "yes" } else { "no" }
    );
    sources.extend([a.f.clone(), a.g.clone()]);
    write_manifest(
        &manifest_sibling(&a.out),
        "ftv conv",
        serde_json::json!({
            "op": path_str(&a.op),
            "f": path_str(&a.f),
            "g": path_str(&a.g),
            "mode": a.mode.to_string(),
            "out": path_str(&a.out),
        }),
        &sources,
        &[&a.out],
        0,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn ftv_combine(a: FtvPair, command: &str) -> Result<ExitCode, AppError> {
    let f = Ftv::load(&a.f)?;
    let g = Ftv::load(&a.g)?;
    let result = if command.ends_with("meet") {
        meet(&f, &g)?
    } else {
        join(&f, &g)?
    };
    result.save(&a.out)?;
    println!(
        "wrote {} (max grade {:.6}, convex: {})",
        a.out.display(),
        result.max_grade(),
        if result.is_convex() { "yes" } else { "no" }
    );
    write_manifest(
        &manifest_sibling(&a.out),
        command,
        serde_json::json!({
            "f": path_str(&a.f),
            "g": path_str(&a.g),
            "out": path_str(&a.out),
        }),
        &[a.f.clone(), a.g.clone()],
        &[&a.out],
        0,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn dist_suite(a: DistSuite, jobs: Option<usize>) -> Result<ExitCode, AppError> {
    let mut config = SuiteConfig::with_defaults(a.theorem, a.n)?;
    config.trials = a.trials;
    config.seed = a.seed;
    config.mode = a.mode;
    config.comparison = a.comparison;
    config.tol = a.tol;
    let mut inputs = Vec::new();
    if let Some(p) = &a.spec_f {
        let (spec, sources) = load_operator_spec(p)?;
        config.spec_f = spec;
        inputs.extend(sources);
    }
    if let Some(p) = &a.spec_u {
        let (spec, sources) = load_operator_spec(p)?;
        config.spec_v = spec;
        inputs.extend(sources);
    }
    let report = run_suite(&config)?;
    println!("{report}");

    let mut witness_col = String::from("-");
    let mut outputs = vec![a.report.clone()];
    if !report.all_pass() {
        if let Some(w) = &report.worst {
            let wf = with_suffix(&a.report, "-witness-f.csv");
            let wg = with_suffix(&a.report, "-witness-g.csv");
            let wh = with_suffix(&a.report, "-witness-h.csv");
            w.f.save(&wf)?;
            w.g.save(&wg)?;
            w.h.save(&wh)?;
            witness_col = format!("{};{};{}", wf.display(), wg.display(), wh.display());
            outputs.extend([wf, wg, wh]);
        }
    }
    std::fs::write(&a.report, report.to_csv(&witness_col))?;
    println!("report: {}", a.report.display());

    let exit = if report.all_pass() { 0 } else { 1 };
    let output_refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    write_manifest(
        &manifest_sibling(&a.report),
        "dist suite",
        serde_json::json!({
            "theorem": a.theorem.to_string(),
            "n": a.n,
            "trials": a.trials,
            "seed": a.seed,
            "mode": a.mode.to_string(),
            "comparison": a.comparison.to_string(),
            "tol": a.tol,
            "spec_f": a.spec_f.as_deref().map(path_str),
            "spec_u": a.spec_u.as_deref().map(path_str),
            "report": path_str(&a.report),
            "jobs": jobs,
        }),
        &inputs,
        &output_refs,
        exit,
    )?;
    Ok(ExitCode::from(exit as u8))
}

fn dist_search(a: DistSearch, jobs: Option<usize>) -> Result<ExitCode, AppError> {
    let grid = Grid::new(a.n)?;
    let (mut spec_f, mut spec_u) = falsifiability_pair(&grid);
    let mut inputs = Vec::new();
    if let Some(p) = &a.spec_f {
        let (spec, sources) = load_operator_spec(p)?;
        spec_f = spec;
        inputs.extend(sources);
    }
    if let Some(p) = &a.spec_u {
        let (spec, sources) = load_operator_spec(p)?;
        spec_u = spec;
        inputs.extend(sources);
    }
    let f_op = build_operator(&grid, &spec_f)?;
    let v_op = build_operator(&grid, &spec_u)?;
    let witness = search_counterexample(
        &f_op, &v_op, a.side, a.subject, a.trials, a.seed, a.tol, a.mode, a.sampling,
    )?;
    std::fs::create_dir_all(&a.out_dir)?;
    let config = serde_json::json!({
        "spec_f": a.spec_f.as_deref().map(path_str),
        "spec_u": a.spec_u.as_deref().map(path_str),
        "side": a.side.to_string(),
        "subject": a.subject.to_string(),
        "sampling": a.sampling.to_string(),
        "n": a.n,
        "trials": a.trials,
        "seed": a.seed,
        "tol": a.tol,
        "mode": a.mode.to_string(),
        "out_dir": path_str(&a.out_dir),
        "jobs": jobs,
    });
    let manifest_path = a.out_dir.join("search-manifest.json");
    match witness {
        Some(w) => {
            let wf = a.out_dir.join("search-witness-f.csv");
            let wg = a.out_dir.join("search-witness-g.csv");
            let wh = a.out_dir.join("search-witness-h.csv");
            w.f.save(&wf)?;
            w.g.save(&wg)?;
            w.h.save(&wh)?;
            println!(
                "witness: trial {}, z index {}, deviation {:.3e}",
                w.trial, w.z, w.deviation
            );
            println!("witnesses: {}", a.out_dir.join("search-witness-*.csv").display());
            write_manifest(
                &manifest_path,
                "dist search",
                config,
                &inputs,
                &[&wf, &wg, &wh],
                0,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("no counterexample within {} trials", a.trials);
            write_manifest(&manifest_path, "dist search", config, &inputs, &[], 1)?;
            Ok(ExitCode::FAILURE)
        }
    }
}
