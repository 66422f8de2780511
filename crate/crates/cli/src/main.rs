//! `subspace`: load matrices, run analyses and sweeps, emit JSON or CSV.
//!
//! Exit codes: 0 ok, 1 input error, 2 a required hypothesis does not hold
//! (the report is still written), 3 a verification suite failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use subspace_core::bounds::analyze;
use subspace_core::numrange::{numrange_boundary, sector_bound};
use subspace_core::rotation::{acute_case, direct_rotation, projection_gap};
use subspace_core::scenarios::{gen_ksharp, gen_random, gen_tsharp, KsharpGrid, RandomSpec, TsharpParams};
use subspace_core::sweep::{run_sweep, SweepConfig, SweepScenario};
use subspace_core::verify::{run_verify, Injection, Suite, VerifyConfig};
use subspace_core::{Disposition, Hermitian, Inv, Mat, MatrixJson, SplitJson, Tolerances};

#[derive(Parser)]
#[command(name = "subspace", version, about = "Rotation bounds for off-diagonally perturbed spectral subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze `L = A + V` against a spectral split and print the bound report.
    Bounds(BoundsArgs),
    /// Acute-case test and direct rotation between two involutions.
    Rotation(RotationArgs),
    /// Numerical-range boundary of a square matrix as CSV.
    Numrange(NumrangeArgs),
    /// Parameter sweep as CSV.
    Sweep(SweepArgs),
    /// Run the invariant suites on seeded random instances.
    Verify(VerifyArgs),
    /// Generate an instance and dump `a.json`, `v.json`, `split.json`.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Hermitian `A` in matrix JSON.
    #[arg(long)]
    matrix_a: PathBuf,
    /// Off-diagonal perturbation `V` in matrix JSON.
    #[arg(long)]
    matrix_v: PathBuf,
    /// Split JSON: disposition plus `sigma_minus` / `sigma_plus` intervals.
    #[arg(long)]
    split: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RotationArgs {
    /// Involution `J` in matrix JSON.
    #[arg(long)]
    j: PathBuf,
    /// Involution `J′` in matrix JSON.
    #[arg(long)]
    j_prime: PathBuf,
    /// Include `U` in the output.
    #[arg(long)]
    emit_u: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NumrangeArgs {
    #[arg(long, visible_alias = "matrix-a")]
    matrix: PathBuf,
    /// Number of support directions.
    #[arg(long, default_value_t = 360)]
    m: usize,
    /// Print the sector bound as JSON instead of the boundary.
    #[arg(long)]
    sector: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioParams {
    /// tsharp inner level; ksharp first node.
    #[arg(long)]
    a: Option<f64>,
    /// tsharp outer level; ksharp last node.
    #[arg(long)]
    b: Option<f64>,
    /// tsharp coupling entries.
    #[arg(long)]
    v1: Option<f64>,
    #[arg(long)]
    v2: Option<f64>,
    /// ksharp coupling `κ`.
    #[arg(long)]
    coupling: Option<f64>,
    /// Spectral separation `d` of random instances.
    #[arg(long)]
    d: Option<f64>,
    /// Annular gap length.
    #[arg(long)]
    gap: Option<f64>,
    /// Dimension of random instances, node count for ksharp.
    #[arg(long)]
    n: Option<usize>,
    /// Width of the band each part of a random spectrum may spread over.
    #[arg(long)]
    spread: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// tsharp, ksharp, random-subordinated or random-annular.
    #[arg(long)]
    scenario: String,
    /// Number of swept values: `‖V‖`, or the coupling for ksharp.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Random instances per step.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    v_min: Option<f64>,
    /// Defaults per scenario, inside the admissible range.
    #[arg(long)]
    v_max: Option<f64>,
    #[command(flatten)]
    params: ScenarioParams,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; `--suite` is an equivalent spelling.
    #[arg(value_name = "SUITE", conflicts_with = "suite")]
    positional: Option<String>,
    /// all, rotation, relemma, bounds, numrange or scenarios.
    #[arg(long)]
    suite: Option<String>,
    /// Trials per invariant.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest dimension drawn for random instances.
    #[arg(long, default_value_t = 12)]
    max_dim: usize,
    /// Fault injection for negative controls: `none` or `non-unitary`.
    #[arg(long, default_value = "none")]
    inject: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `‖V‖` for random scenarios.
    #[arg(long)]
    v: Option<f64>,
    #[command(flatten)]
    params: ScenarioParams,
    /// Output directory; the dump goes to stdout as one JSON object otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Condition,
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Tolerances::from_env()
        .map_err(Failure::from)
        .and_then(|tol| match cli.command {
            Command::Bounds(a) => cmd_bounds(a, &tol),
            Command::Rotation(a) => cmd_rotation(a, &tol),
            Command::Numrange(a) => cmd_numrange(a, &tol),
            Command::Sweep(a) => cmd_sweep(a, &tol),
            Command::Verify(a) => cmd_verify(a, &tol),
            Command::Scenario(a) => cmd_scenario(a, &tol),
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Condition) => ExitCode::from(2),
        Err(Failure::Verification) => ExitCode::from(3),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path, flag: &str) -> Result<Mat, Failure> {
    MatrixJson::parse(&read(path)?).map_err(|e| Failure::Input(format!("--{flag}: {e}")))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn cmd_bounds(args: BoundsArgs, tol: &Tolerances) -> Outcome {
    let a = Hermitian::new(read_matrix(&args.matrix_a, "matrix-a")?, tol)
        .map_err(|e| Failure::Input(format!("--matrix-a: {e}")))?;
    let v = Hermitian::new(read_matrix(&args.matrix_v, "matrix-v")?, tol)
        .map_err(|e| Failure::Input(format!("--matrix-v: {e}")))?;
    let split = SplitJson::parse::<f64>(&read(&args.split)?).map_err(|e| Failure::Input(format!("--split: {e}")))?;
    let report = analyze(&a, &v, &split, tol)?;
    emit(&with_newline(report.to_json()), args.out.as_deref())?;
    if report.conditions_met() {
        Ok(())
    } else {
        Err(Failure::Condition)
    }
}

fn cmd_rotation(args: RotationArgs, tol: &Tolerances) -> Outcome {
    let j = Inv::new(read_matrix(&args.j, "j")?, tol).map_err(|e| Failure::Input(format!("--j: {e}")))?;
    let jp = Inv::new(read_matrix(&args.j_prime, "j-prime")?, tol)
        .map_err(|e| Failure::Input(format!("--j-prime: {e}")))?;
    let acute = acute_case(&j, &jp, tol)?;
    let gap = projection_gap(j.p_minus(), jp.p_minus(), tol)?;
    let mut body = json!({ "acute": acute, "projection_gap": gap });
    if acute.acute {
        let rot = direct_rotation(&j, &jp, tol)?;
        let [unitary, intertwining, square, re_negative] = rot.defects(&j, &jp);
        body["theta_U"] = json!(rot.theta);
        body["sin_theta_U"] = json!(rot.theta.sin());
        body["defects"] = json!({
            "unitary": unitary,
            "intertwining": intertwining,
            "square": square,
            "re_negative": re_negative,
        });
        if args.emit_u {
            body["u"] = serde_json::to_value(MatrixJson::from_matrix(&rot.u))?;
        }
    }
    emit(&with_newline(serde_json::to_string_pretty(&body)?), args.out.as_deref())?;
    if acute.acute {
        Ok(())
    } else {
        Err(Failure::Condition)
    }
}

fn cmd_numrange(args: NumrangeArgs, tol: &Tolerances) -> Outcome {
    let t = read_matrix(&args.matrix, "matrix")?;
    let text = if args.sector {
        let s = sector_bound(&t, tol)?;
        let kappa = if s.is_infinite() { json!("inf") } else { json!(s.k) };
        with_newline(serde_json::to_string_pretty(&json!({ "k": kappa }))?)
    } else {
        numrange_boundary(&t, args.m)?.to_csv()
    };
    emit(&text, args.out.as_deref())
}

fn apply_params(cfg: &mut SweepConfig, p: &ScenarioParams) {
    if let Some(a) = p.a {
        cfg.a = a;
    }
    if let Some(b) = p.b {
        cfg.b = b;
    }
    if let Some(d) = p.d {
        cfg.d = d;
    }
    if let Some(n) = p.n {
        cfg.n = n;
    }
    if let Some(s) = p.spread {
        cfg.spread = s;
    }
    cfg.gap = p.gap;
}

fn cmd_sweep(args: SweepArgs, tol: &Tolerances) -> Outcome {
    let scenario: SweepScenario = args.scenario.parse()?;
    let mut cfg = SweepConfig::new(scenario);
    cfg.steps = args.steps;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    apply_params(&mut cfg, &args.params);
    // a single coupling value pins the ksharp sweep
    if let Some(c) = args.params.coupling {
        cfg.v_min = c;
        cfg.v_max = Some(c);
    }
    if let Some(v) = args.v_min {
        cfg.v_min = v;
    }
    if args.v_max.is_some() {
        cfg.v_max = args.v_max;
    }
    let csv = run_sweep(&cfg, tol)?;
    emit(&csv, args.out.as_deref())
}

fn cmd_verify(args: VerifyArgs, tol: &Tolerances) -> Outcome {
    let suite: Suite = args.positional.or(args.suite).as_deref().unwrap_or("all").parse()?;
    let inject: Injection = args.inject.parse()?;
    let cfg = VerifyConfig {
        suite,
        trials: args.trials,
        seed: args.seed,
        max_dim: args.max_dim,
        inject,
    };
    let summary = run_verify(&cfg, tol)?;
    emit(&summary.to_text(), args.out.as_deref())?;
    if summary.all_passed() {
        Ok(())
    } else {
        for name in summary.failing() {
            eprintln!("failing invariant: {name}");
        }
        Err(Failure::Verification)
    }
}

fn cmd_scenario(args: ScenarioArgs, tol: &Tolerances) -> Outcome {
    let p = &args.params;
    let dump = match args.scenario.as_str() {
        "tsharp" => {
            let params = TsharpParams {
                a: p.a.unwrap_or(0.0),
                b: p.b.unwrap_or(1.0),
                v1: p.v1.unwrap_or(0.25),
                v2: p.v2.unwrap_or(0.25),
            };
            gen_tsharp::<f64>(&params, tol)?.instance.dump()
        }
        "ksharp" => {
            let a = p.a.unwrap_or(1.0);
            let grid = KsharpGrid {
                a,
                coupling: p.coupling.unwrap_or(1.0),
                n: p.n.unwrap_or(8),
                t_max: p.b.unwrap_or(a + 1.0),
            };
            gen_ksharp::<f64>(&grid, tol)?.instance.dump()
        }
        name @ ("random-subordinated" | "random-annular") => {
            let annular = name == "random-annular";
            let n = p.n.unwrap_or(8);
            let d = p.d.unwrap_or(1.0);
            let spec = RandomSpec {
                n_minus: n / 2,
                n_plus: n - n / 2,
                disposition: if annular { Disposition::Annular } else { Disposition::Subordinated },
                d,
                gap_len: annular.then(|| p.gap.unwrap_or(3.0 * d)),
                spread: p.spread.unwrap_or(1.0),
                v_norm: args.v.unwrap_or(0.5 * d),
                seed: args.seed,
            };
            gen_random::<f64>(&spec)?.dump()
        }
        other => return Err(Failure::Input(format!("--scenario: unknown scenario `{other}`"))),
    };
    match args.out {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
            for (file, value) in [
                ("a.json", serde_json::to_string_pretty(&dump.a)?),
                ("v.json", serde_json::to_string_pretty(&dump.v)?),
                ("split.json", serde_json::to_string_pretty(&dump.split)?),
            ] {
                emit(&with_newline(value), Some(&dir.join(file)))?;
            }
            Ok(())
        }
        None => emit(&with_newline(serde_json::to_string_pretty(&dump)?), None),
    }
}
