//! Parameter sweeps emitting CSV: one row per instance, header first.
//!
//! Empty cells mark quantities that do not apply (a bound whose hypothesis
//! fails, or a gap that was not computed). Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{analyze, bound_apriori_tan, kappa_mu, BoundReport};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::rotation::direct_rotation;
use crate::scenarios::{gen_ksharp, gen_random_indexed, gen_tsharp, tsharp_max_theta, KsharpGrid, RandomSpec, TsharpParams};
use crate::split::Disposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepScenario {
    Tsharp,
    Ksharp,
    RandomSubordinated,
    RandomAnnular,
}

impl SweepScenario {
    pub fn name(self) -> &'static str {
        match self {
            SweepScenario::Tsharp => "tsharp",
            SweepScenario::Ksharp => "ksharp",
            SweepScenario::RandomSubordinated => "random-subordinated",
            SweepScenario::RandomAnnular => "random-annular",
        }
    }
}

impl FromStr for SweepScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tsharp" => SweepScenario::Tsharp,
            "ksharp" => SweepScenario::Ksharp,
            "random-subordinated" => SweepScenario::RandomSubordinated,
            "random-annular" => SweepScenario::RandomAnnular,
            other => return Err(Error::format("scenario", format!("unknown scenario `{other}`"))),
        })
    }
}

/// Sweep parameters. The swept variable runs over `steps` equally spaced
/// values in `[v_min, v_max]`: `‖V‖` for every scenario except `ksharp`,
/// where it is the coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub scenario: SweepScenario,
    pub steps: usize,
    /// Random instances per step (random scenarios only).
    pub trials: usize,
    pub seed: u64,
    pub v_min: f64,
    /// Defaults per scenario when absent.
    pub v_max: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// `|Δ|` for random annular instances; defaults to `3d`.
    pub gap: Option<f64>,
    /// Matrix dimension for random scenarios, nodes per half-line for `ksharp`.
    pub n: usize,
    pub spread: f64,
}

impl SweepConfig {
    pub fn new(scenario: SweepScenario) -> Self {
        Self {
            scenario,
            steps: 100,
            trials: 1,
            seed: 0,
            v_min: 0.0,
            v_max: None,
            a: 0.0,
            b: 1.0,
            d: 1.0,
            gap: None,
            n: 8,
            spread: 1.0,
        }
    }

    fn default_v_max(&self) -> f64 {
        match self.scenario {
            SweepScenario::Tsharp => 0.99 * (self.b * self.b - self.a * self.a).sqrt(),
            SweepScenario::Ksharp => 4.0,
            SweepScenario::RandomSubordinated => 2.0 * self.d,
            SweepScenario::RandomAnnular => 0.99 * self.d,
        }
    }

    fn values(&self) -> Vec<f64> {
        let hi = self.v_max.unwrap_or_else(|| self.default_v_max());
        (0..self.steps)
            .map(|i| self.v_min + (hi - self.v_min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// `{:.16e}` for finite values, `inf`/`-inf`/`nan` otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// `num/den` with `0/0 = 0`; `None` when either side is missing.
fn ratio(num: Option<f64>, den: Option<f64>) -> Option<f64> {
    let (n, d) = (num?, den?);
    Some(if d > 0.0 {
        n / d
    } else if n == 0.0 {
        0.0
    } else {
        f64::INFINITY
    })
}

struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        Self {
            out: format!("{}\n", header.join(",")),
            width: header.len(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.width);
        let _ = writeln!(self.out, "{}", cells.join(","));
    }
}

pub fn run_sweep(cfg: &SweepConfig, tol: &Tolerances) -> Result<String> {
    if cfg.steps < 2 {
        return Err(Error::format("steps", "at least 2 steps are required"));
    }
    if cfg.trials == 0 {
        return Err(Error::format("trials", "must be at least 1"));
    }
    let hi = cfg.v_max.unwrap_or_else(|| cfg.default_v_max());
    if !(cfg.v_min >= 0.0) || !(hi >= cfg.v_min) || !hi.is_finite() {
        return Err(Error::format("v_max", format!("need 0 <= v_min <= v_max, got [{}, {hi}]", cfg.v_min)));
    }
    match cfg.scenario {
        SweepScenario::Tsharp => sweep_tsharp(cfg, tol),
        SweepScenario::Ksharp => sweep_ksharp(cfg, tol),
        SweepScenario::RandomSubordinated | SweepScenario::RandomAnnular => sweep_random(cfg, tol),
    }
}

/// `v₁ = v₂ = v/2`, plus the maximum over `v₁ − v₂` at the same `‖V‖`.
fn sweep_tsharp(cfg: &SweepConfig, tol: &Tolerances) -> Result<String> {
    let mut csv = Csv::new(&[
        "v", "v1", "v2", "theta_closed_form", "theta_U", "actual_gap", "bound_apriori", "ratio", "theta_max",
        "theta_bound_trio", "ratio_trio",
    ]);
    for v in cfg.values() {
        let p = TsharpParams {
            a: cfg.a,
            b: cfg.b,
            v1: v / 2.0,
            v2: v / 2.0,
        };
        let inst = gen_tsharp::<f64>(&p, tol)?;
        let r = analyze(&inst.instance.a, &inst.instance.v, &inst.instance.split, tol)?;
        let theta_max = tsharp_max_theta(cfg.a, cfg.b, v, 200)?;
        let theta_bound = r.kappa_trio.map(|k| 0.5 * k.atan());
        csv.row(vec![
            fmt_f64(v),
            fmt_f64(p.v1),
            fmt_f64(p.v2),
            fmt_f64(inst.theta_closed_form),
            cell(r.theta_u),
            cell(r.actual_gap),
            cell(r.bound_apriori),
            cell(ratio(r.actual_gap, r.bound_apriori)),
            fmt_f64(theta_max),
            cell(theta_bound),
            cell(ratio(Some(theta_max), theta_bound)),
        ]);
    }
    Ok(csv.out)
}

fn sweep_ksharp(cfg: &SweepConfig, tol: &Tolerances) -> Result<String> {
    let mut csv = Csv::new(&[
        "coupling", "theta_exact", "theta_U", "kappa_mu0", "kappa_inf", "actual_gap", "bound_estin", "ratio",
        "spectrum_error",
    ]);
    for coupling in cfg.values() {
        let g = KsharpGrid {
            a: cfg.a,
            coupling,
            n: cfg.n,
            t_max: cfg.b.max(cfg.a + 1.0),
        };
        let k = gen_ksharp::<f64>(&g, tol)?;
        let inst = &k.instance;
        let rot = direct_rotation(&inst.j, &k.jp, tol)?;
        let kappa0 = kappa_mu(&inst.a, &inst.v, &inst.j, 0.0, tol)?;
        let r = analyze(&inst.a, &inst.v, &inst.split, tol)?;
        csv.row(vec![
            fmt_f64(coupling),
            fmt_f64(k.theta_exact),
            fmt_f64(rot.theta),
            fmt_f64(kappa0),
            cell(r.kappa_inf),
            cell(r.actual_gap),
            cell(r.bound_estin),
            cell(ratio(r.actual_gap, r.bound_estin)),
            fmt_f64(k.spectrum_error),
        ]);
    }
    Ok(csv.out)
}

fn sweep_random(cfg: &SweepConfig, tol: &Tolerances) -> Result<String> {
    let annular = cfg.scenario == SweepScenario::RandomAnnular;
    let n = cfg.n;
    if n < 3 {
        return Err(Error::InfeasibleSpec("random sweeps need n >= 3".into()));
    }
    let n_minus = n / 2;
    let mut spec = RandomSpec {
        n_minus,
        n_plus: n - n_minus,
        disposition: if annular {
            Disposition::Annular
        } else {
            Disposition::Subordinated
        },
        d: cfg.d,
        gap_len: annular.then(|| cfg.gap.unwrap_or(3.0 * cfg.d)),
        spread: cfg.spread,
        v_norm: 0.0,
        seed: cfg.seed,
    };
    let mut csv = if annular {
        Csv::new(&[
            "step", "trial", "v", "d", "gap_len", "actual_gap", "theta_U", "bound_apriori", "ratio", "bound_trio",
            "theta_bound_trio", "ratio_trio", "conjecture_region", "apriori_formula_ratio",
        ])
    } else {
        Csv::new(&[
            "step", "trial", "v", "d", "actual_gap", "kappa_inf", "bound_estin", "bound_dk", "bound_apriori",
            "ratio", "ratio_dk",
        ])
    };
    for (step, v) in cfg.values().into_iter().enumerate() {
        spec.v_norm = v;
        for trial in 0..cfg.trials {
            let index = (step * cfg.trials + trial) as u64;
            let inst = gen_random_indexed::<f64>(&spec, index)?;
            let r: BoundReport = analyze(&inst.a, &inst.v, &inst.split, tol)?;
            let mut cells = vec![step.to_string(), trial.to_string(), fmt_f64(v), fmt_f64(cfg.d)];
            if annular {
                let theta_bound = r.kappa_trio.map(|k| 0.5 * k.atan());
                let conjecture = v >= cfg.d && v * v < 2.0 * cfg.d * cfg.d;
                let formula = if cfg.d > 0.0 { Some(v / cfg.d.hypot(v)) } else { None };
                cells.extend([
                    cell(r.gap_len),
                    cell(r.actual_gap),
                    cell(r.theta_u),
                    cell(r.bound_apriori),
                    cell(ratio(r.actual_gap, r.bound_apriori)),
                    cell(r.bound_trio),
                    cell(theta_bound),
                    cell(ratio(r.theta_u, theta_bound)),
                    conjecture.to_string(),
                    cell(ratio(r.actual_gap, formula)),
                ]);
            } else {
                let apriori = if v < cfg.d { Some(bound_apriori_tan(v, cfg.d)?) } else { None };
                cells.extend([
                    cell(r.actual_gap),
                    cell(r.kappa_inf),
                    cell(r.bound_estin),
                    cell(r.bound_dk),
                    cell(apriori),
                    cell(ratio(r.actual_gap, r.bound_estin)),
                    cell(ratio(r.actual_gap, r.bound_dk)),
                ]);
            }
            csv.row(cells);
        }
    }
    Ok(csv.out)
}

/// Parsed CSV: header plus rows of optional numbers (empty cells are `None`,
/// `true`/`false` map to 1/0).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::format("csv", "missing header"))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::format(format!("row {}", i + 1), "wrong number of cells"));
            }
            let row = cells
                .iter()
                .zip(&header)
                .map(|(c, name)| match *c {
                    "" => Ok(None),
                    "true" => Ok(Some(1.0)),
                    "false" => Ok(Some(0.0)),
                    s => s
                        .parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::format(format!("row {} column {name}", i + 1), "not a number")),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Largest present value of a column.
    pub fn column_max(&self, name: &str) -> Option<f64> {
        self.column(name)?.into_iter().flatten().fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }
}
