//! End-to-end acceptance run: ten criteria, one PASS/FAIL line each.
//!
//! Random criteria run the library's invariant checks (the same code as
//! `subspace verify`) at the stated trial counts; the grid criteria are
//! evaluated here directly. Each criterion also has a wall-clock budget.

use std::process::Command;
use std::time::{Duration, Instant};

use subspace_core::bounds::{kappa_mu, kappa_piecewise, varkappa_grid_min};
use subspace_core::rotation::direct_rotation;
use subspace_core::scenarios::{gen_ksharp, tsharp_max_theta, KsharpGrid};
use subspace_core::sweep::{run_sweep, SweepConfig, SweepScenario, SweepTable};
use subspace_core::verify::run_invariant;
use subspace_core::Tolerances;

const SEED: u64 = 20240607;

struct Verdict {
    ok: bool,
    detail: String,
}

fn invariants(names: &[&str], trials: usize, max_dim: usize) -> Verdict {
    let tol = Tolerances::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        let out = run_invariant(name, trials, SEED, max_dim, &tol).unwrap_or_else(|| panic!("unknown invariant {name}"));
        ok &= out.passed == out.trials;
        let mut part = format!("{name} {}/{} worst margin {:.2e}", out.passed, out.trials, out.worst_margin);
        if let Some(f) = &out.first_failure {
            part.push_str(&format!(" [{f}]"));
        }
        parts.push(part);
    }
    Verdict {
        ok,
        detail: parts.join("; "),
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    Verdict {
        ok: a.ok && b.ok,
        detail: format!("{}; {}", a.detail, b.detail),
    }
}

fn tsharp_sweep_attains_bound() -> Verdict {
    let mut cfg = SweepConfig::new(SweepScenario::Tsharp);
    cfg.a = 0.0;
    cfg.b = 1.0;
    cfg.steps = 100;
    let csv = run_sweep(&cfg, &Tolerances::default()).expect("tsharp sweep");
    let table = SweepTable::parse(&csv).expect("sweep csv parses");
    let max_ratio = table.column_max("ratio").expect("ratio column");
    Verdict {
        ok: max_ratio >= 1.0 - 1e-6,
        detail: format!("tsharp sweep max ratio {max_ratio:.12}"),
    }
}

// a ∈ {0, .2, .4, .6, .8}, ‖V‖ at four fractions of √(b² − a²), b = 1
fn tsharp_grid() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for i in 0..5 {
        let a = 0.2 * i as f64;
        for f in [0.2, 0.45, 0.7, 0.95] {
            pts.push((a, f * (1.0 - a * a).sqrt()));
        }
    }
    pts
}

fn tsharp_grid_identities() -> Verdict {
    let mut worst_theta = 0.0f64;
    let mut worst_kappa = 0.0f64;
    for (a, v) in tsharp_grid() {
        let exact_kappa = kappa_piecewise(v, 1.0 - a, 2.0).expect("kappa");
        let theta = tsharp_max_theta(a, 1.0, v, 200).expect("max theta");
        worst_theta = worst_theta.max((theta - 0.5 * exact_kappa.atan()).abs());
        let (_, grid_min) = varkappa_grid_min(a, 1.0, v, 10_000).expect("grid min");
        worst_kappa = worst_kappa.max((grid_min - exact_kappa).abs());
    }
    Verdict {
        ok: worst_theta <= 1e-6 && worst_kappa <= 1e-6,
        detail: format!("20-point grid: max theta error {worst_theta:.2e}, max kappa error {worst_kappa:.2e}"),
    }
}

fn ksharp_exactness() -> Verdict {
    let tol = Tolerances::default();
    let (mut spec_err, mut theta_err, mut kappa_err) = (0.0f64, 0.0f64, 0.0f64);
    for coupling in [0.1, 0.5, 1.0, 2.0, 4.0] {
        for n in [1, 8, 64] {
            let grid = KsharpGrid {
                a: 1.0,
                coupling,
                n,
                t_max: 3.0,
            };
            let k = gen_ksharp::<f64>(&grid, &tol).expect("ksharp instance");
            spec_err = spec_err.max(k.spectrum_error);
            let rot = direct_rotation(&k.instance.j, &k.jp, &tol).expect("acute pair");
            theta_err = theta_err.max((rot.theta - 0.5 * coupling.atan()).abs());
            let k0 = kappa_mu(&k.instance.a, &k.instance.v, &k.instance.j, 0.0, &tol).expect("kappa at 0");
            kappa_err = kappa_err.max((k0 - coupling).abs());
        }
    }
    Verdict {
        ok: spec_err <= 1e-12 && theta_err <= 1e-12 && kappa_err <= 1e-10,
        detail: format!("spectrum error {spec_err:.2e}, theta error {theta_err:.2e}, kappa(0) error {kappa_err:.2e}"),
    }
}

fn run_bin(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_subspace")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code())
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 3] = [
        &["sweep", "--scenario", "random-annular", "--steps", "20", "--trials", "3", "--seed", "7"],
        &["sweep", "--scenario", "tsharp", "--steps", "50"],
        &["verify", "all", "--trials", "5", "--seed", "42"],
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for args in runs {
        let (first, c1) = run_bin(args);
        let (second, c2) = run_bin(args);
        let same = first == second && c1 == c2 && c1 == Some(0) && !first.is_empty();
        ok &= same;
        notes.push(format!("`{}`: {}", args.join(" "), if same { "identical" } else { "DIFFERENT" }));
    }
    Verdict {
        ok,
        detail: notes.join(", "),
    }
}

type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Verdict>);

#[test]
fn acceptance_criteria() {
    let criteria: Vec<Criterion> = vec![
        (1, "direct rotation contract", 30, Box::new(|| invariants(&["direct_rotation_relations", "gap_identity"], 200, 64))),
        (2, "norm identity and angle subadditivity", 10, Box::new(|| invariants(&["norm_angle_identity", "angle_subadditivity"], 200, 64))),
        (3, "accretivity transfer", 20, Box::new(|| invariants(&["accretive_transfer"], 200, 64))),
        (4, "subordinated dominance", 60, Box::new(|| invariants(&["dominance_subordinated"], 500, 32))),
        (5, "annular dominance and sharpness", 60, Box::new(|| both(invariants(&["dominance_annular_tan"], 500, 32), tsharp_sweep_attains_bound()))),
        (6, "trio bound and kappa identities", 90, Box::new(|| both(invariants(&["dominance_annular_trio"], 500, 32), tsharp_grid_identities()))),
        (7, "pairwise model exactness", 10, Box::new(ksharp_exactness)),
        (8, "eigenvalue enclosures", 30, Box::new(|| invariants(&["enclosure"], 500, 64))),
        (9, "kappa against sampling oracle", 60, Box::new(|| invariants(&["kappa_sampling_oracle"], 100, 2))),
        (10, "determinism", 30, Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = verdict.ok && in_time;
        println!(
            "criterion {id:>2} {}: {title} ({:.1}s of {budget}s) {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            verdict.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
