//! Randomized invariant suites.
//!
//! Each invariant runs `trials` seeded instances and records a margin per
//! instance: the slack left before the invariant would be violated. A trial
//! passes when its margin is nonnegative. Output is deterministic in
//! `(suite, trials, seed, max_dim)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{Complex, ComplexField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{analyze, kappa_inf, kappa_mu, kappa_piecewise, varkappa_grid_min, BoundReport};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{from_real_diagonal, identity, singular_values, spectral_norm, ComplexMatrix, ComplexVector};
use crate::numrange::{compressed_operator, numrange_boundary, pair_compression, sector_bound, support_point};
use crate::rotation::{acute_case, direct_rotation, projection_gap, spectral_angle};
use crate::scalar::principal_arg;
use crate::scenarios::{
    gen_ksharp, gen_random, gen_relemma_instance, gen_tsharp, ginibre, random_acute_pair, random_hermitian,
    random_involution, random_phase_unitary, random_unitary, relemma_transfer_margins, stream, tsharp_max_theta,
    KsharpGrid, RandomSpec, TsharpParams,
};
use crate::spectral::{
    accretivity_margin, anticommutes, eigh, involution_from_split, polar_decompose, sign_involution,
    spectral_projection, Interval, Involution,
};
use crate::split::Disposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Rotation,
    Relemma,
    Bounds,
    Numrange,
    Scenarios,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Rotation => "rotation",
            Suite::Relemma => "relemma",
            Suite::Bounds => "bounds",
            Suite::Numrange => "numrange",
            Suite::Scenarios => "scenarios",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "rotation" => Suite::Rotation,
            "relemma" => Suite::Relemma,
            "bounds" => Suite::Bounds,
            "numrange" => Suite::Numrange,
            "scenarios" => Suite::Scenarios,
            other => return Err(Error::format("suite", format!("unknown suite `{other}`"))),
        })
    }
}

/// Deliberate corruption used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injection {
    None,
    /// Scales the first unitary of the rotation suite by 1.5.
    NonUnitary,
}

impl FromStr for Injection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Injection::None),
            "non-unitary" => Ok(Injection::NonUnitary),
            other => Err(Error::format("inject", format!("unknown injection `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    /// Largest matrix dimension drawn for random instances.
    pub max_dim: usize,
    pub inject: Injection,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            trials: 50,
            seed: 0,
            max_dim: 12,
            inject: Injection::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// Smallest margin seen; negative means violated.
    pub worst_margin: f64,
    pub first_failure: Option<String>,
}

impl InvariantOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub outcomes: Vec<InvariantOutcome>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(InvariantOutcome::ok)
    }

    pub fn failing(&self) -> Vec<String> {
        self.outcomes
            .iter()
            .filter(|o| !o.ok())
            .map(|o| format!("{}/{}", o.suite, o.name))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:<32} {:>13} {:>13}", "suite", "invariant", "passed", "worst_margin");
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "{:<10} {:<32} {:>13} {:>13.4e}",
                o.suite,
                o.name,
                format!("{}/{}", o.passed, o.trials),
                o.worst_margin
            );
        }
        for o in self.outcomes.iter().filter(|o| !o.ok()) {
            let _ = writeln!(
                out,
                "FAIL {}/{}: {}",
                o.suite,
                o.name,
                o.first_failure.as_deref().unwrap_or("margin below zero")
            );
        }
        let failing = self.outcomes.iter().filter(|o| !o.ok()).count();
        let _ = writeln!(out, "{} invariants, {} failing", self.outcomes.len(), failing);
        out
    }
}

type Check = fn(&mut Trial<'_>) -> Result<f64>;

/// Per-trial context handed to each check.
pub struct Trial<'a> {
    pub rng: ChaCha8Rng,
    pub index: usize,
    pub max_dim: usize,
    pub tol: &'a Tolerances,
    pub inject: Injection,
}

impl Trial<'_> {
    fn dim(&mut self, lo: usize) -> usize {
        let hi = self.max_dim.max(lo);
        self.rng.random_range(lo..=hi)
    }

    fn unif(&mut self, lo: f64, hi: f64) -> f64 {
        if hi > lo {
            self.rng.random_range(lo..hi)
        } else {
            lo
        }
    }
}

struct Invariant {
    suite: Suite,
    name: &'static str,
    check: Check,
}

const fn inv(suite: Suite, name: &'static str, check: Check) -> Invariant {
    Invariant { suite, name, check }
}

const INVARIANTS: &[Invariant] = &[
    inv(Suite::Rotation, "norm_angle_identity", check_norm_angle_identity),
    inv(Suite::Rotation, "angle_subadditivity", check_angle_subadditivity),
    inv(Suite::Rotation, "direct_rotation_relations", check_direct_rotation_relations),
    inv(Suite::Rotation, "gap_identity", check_gap_identity),
    inv(Suite::Rotation, "rotation_uniqueness", check_rotation_uniqueness),
    inv(Suite::Rotation, "rotation_extremality", check_rotation_extremality),
    inv(Suite::Rotation, "acute_criteria_agree", check_acute_criteria_agree),
    inv(Suite::Rotation, "commuting_acute_coincide", check_commuting_acute_coincide),
    inv(Suite::Relemma, "involution_defects", check_involution_defects),
    inv(Suite::Relemma, "polar_factorization", check_polar_factorization),
    inv(Suite::Relemma, "projection_cover", check_projection_cover),
    inv(Suite::Relemma, "accretive_preconditions", check_accretive_preconditions),
    inv(Suite::Relemma, "accretive_transfer", check_accretive_transfer),
    inv(Suite::Bounds, "dominance_subordinated", check_dominance_subordinated),
    inv(Suite::Bounds, "dominance_annular_tan", check_dominance_annular_tan),
    inv(Suite::Bounds, "dominance_annular_trio", check_dominance_annular_trio),
    inv(Suite::Bounds, "enclosure", check_enclosure),
    inv(Suite::Bounds, "kappa_grid_identity", check_kappa_grid_identity),
    inv(Suite::Bounds, "wrong_involution_bound", check_wrong_involution_bound),
    inv(Suite::Bounds, "kappa_sampling_oracle", check_kappa_sampling_oracle),
    inv(Suite::Numrange, "hull_soundness", check_hull_soundness),
    inv(Suite::Numrange, "sector_bound_consistency", check_sector_bound_consistency),
    inv(Suite::Numrange, "compression_inclusion", check_compression_inclusion),
    inv(Suite::Numrange, "acute_numrange_link", check_acute_numrange_link),
    inv(Suite::Scenarios, "tsharp_closed_form", check_tsharp_closed_form),
    inv(Suite::Scenarios, "tsharp_max_theta", check_tsharp_max_theta),
    inv(Suite::Scenarios, "ksharp_exactness", check_ksharp_exactness),
    inv(Suite::Scenarios, "ksharp_kappa_inf", check_ksharp_kappa_inf),
    inv(Suite::Scenarios, "generator_self_check", check_generator_self_check),
];

/// Names of every invariant, in run order.
pub fn invariant_names() -> Vec<&'static str> {
    INVARIANTS.iter().map(|i| i.name).collect()
}

fn run_one(id: usize, inv: &Invariant, trials: usize, seed: u64, max_dim: usize, inject: Injection, tol: &Tolerances) -> InvariantOutcome {
    let mut outcome = InvariantOutcome {
        suite: inv.suite.name(),
        name: inv.name,
        trials,
        passed: 0,
        worst_margin: f64::INFINITY,
        first_failure: None,
    };
    for index in 0..trials {
        let mut trial = Trial {
            rng: stream(seed, ((id as u64) << 32) | index as u64),
            index,
            max_dim,
            tol,
            inject,
        };
        let (margin, message) = match (inv.check)(&mut trial) {
            Ok(m) if m >= 0.0 => (m, None),
            Ok(m) => (m, Some(format!("trial {index}: margin {m:.3e}"))),
            Err(e) => (f64::NEG_INFINITY, Some(format!("trial {index}: {e}"))),
        };
        // NaN margins fail too
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        outcome.worst_margin = outcome.worst_margin.min(margin);
        match message {
            None if margin >= 0.0 => outcome.passed += 1,
            None => {}
            Some(msg) if outcome.first_failure.is_none() => outcome.first_failure = Some(msg),
            Some(_) => {}
        }
    }
    outcome
}

pub fn run_verify(cfg: &VerifyConfig, tol: &Tolerances) -> Result<VerifySummary> {
    if cfg.trials == 0 {
        return Err(Error::format("trials", "must be at least 1"));
    }
    if cfg.max_dim < 2 {
        return Err(Error::format("max_dim", "must be at least 2"));
    }
    let outcomes = INVARIANTS
        .iter()
        .enumerate()
        .filter(|(_, inv)| cfg.suite.includes(inv.suite))
        .map(|(id, inv)| run_one(id, inv, cfg.trials, cfg.seed, cfg.max_dim, cfg.inject, tol))
        .collect();
    Ok(VerifySummary { outcomes })
}

/// Runs a single invariant by name.
pub fn run_invariant(name: &str, trials: usize, seed: u64, max_dim: usize, tol: &Tolerances) -> Option<InvariantOutcome> {
    INVARIANTS
        .iter()
        .enumerate()
        .find(|(_, inv)| inv.name == name)
        .map(|(id, inv)| run_one(id, inv, trials, seed, max_dim, Injection::None, tol))
}

// rotation

fn check_norm_angle_identity(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(1);
    let mut w = random_phase_unitary::<f64, _>(n, PI, &mut t.rng);
    if t.inject == Injection::NonUnitary && t.index == 0 {
        w *= Complex::new(1.5, 0.0);
    }
    let theta = spectral_angle(&w, t.tol)?;
    let lhs = spectral_norm(&(identity::<f64>(n) - &w));
    Ok(1e-9 - (lhs - 2.0 * (theta / 2.0).sin()).abs())
}

fn check_angle_subadditivity(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(1);
    let p1 = t.unif(0.05, FRAC_PI_2);
    let p2 = t.unif(0.05, FRAC_PI_2);
    let w1 = random_phase_unitary::<f64, _>(n, p1, &mut t.rng);
    let w2 = random_phase_unitary::<f64, _>(n, p2, &mut t.rng);
    let a1 = spectral_angle(&w1, t.tol)?;
    let a2 = spectral_angle(&w2, t.tol)?;
    let a12 = spectral_angle(&(&w2 * &w1), t.tol)?;
    let upper = a1 + a2 - a12;
    let lower = a12 - (a1 - a2).abs();
    Ok(1e-9 + upper.min(lower))
}

fn acute_pair(t: &mut Trial<'_>) -> (Involution<f64>, Involution<f64>) {
    let n = t.dim(2);
    let phase = t.unif(0.05, 1.5);
    random_acute_pair::<f64, _>(n, phase, &mut t.rng)
}

fn check_direct_rotation_relations(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = acute_pair(t);
    let rot = direct_rotation(&j, &jp, t.tol)?;
    let worst = rot.defects(&j, &jp).iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(1e-9 - worst)
}

fn check_gap_identity(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = acute_pair(t);
    let rot = direct_rotation(&j, &jp, t.tol)?;
    let gap = projection_gap(j.p_minus(), jp.p_minus(), t.tol)?;
    Ok(1e-9 - (gap - rot.theta.sin()).abs())
}

fn check_rotation_uniqueness(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = acute_pair(t);
    let rot = direct_rotation(&j, &jp, t.tol)?;
    let other = jp.matrix() * j.matrix() * rot.u.adjoint();
    Ok(1e-9 - spectral_norm(&(&rot.u - other)))
}

// spot check only: W = U·X with X a Cayley unitary commuting with J,
// so J′W = WJ, and U should be no farther from I than any such W
fn check_rotation_extremality(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = acute_pair(t);
    let rot = direct_rotation(&j, &jp, t.tol)?;
    let n = j.matrix().nrows();
    let scale = t.unif(0.0, 3.0);
    let g = random_hermitian::<f64, _>(n, &mut t.rng).matrix() * Complex::new(scale, 0.0);
    let h = j.p_minus() * &g * j.p_minus() + j.p_plus() * &g * j.p_plus();
    let ih = h * Complex::new(0.0, 1.0);
    let id = identity::<f64>(n);
    let inv = (&id + &ih)
        .try_inverse()
        .ok_or_else(|| Error::ConstructionFailed("Cayley transform is singular".into()))?;
    let w = &rot.u * ((&id - &ih) * inv);
    let intertwining = spectral_norm(&(jp.matrix() * &w - &w * j.matrix()));
    let gain = spectral_norm(&(&id - &w)) - spectral_norm(&(&id - &rot.u));
    Ok((1e-9 + gain).min(1e-9 - intertwining))
}

fn check_acute_criteria_agree(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = if t.rng.random_bool(0.5) {
        acute_pair(t)
    } else {
        let n = t.dim(2);
        let k = t.rng.random_range(1..n);
        let kp = t.rng.random_range(1..n);
        (
            random_involution::<f64, _>(n, k, &mut t.rng),
            random_involution::<f64, _>(n, kp, &mut t.rng),
        )
    };
    let report = acute_case(&j, &jp, t.tol)?;
    Ok(1e-9 - report.consistency_defect())
}

fn check_commuting_acute_coincide(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(2);
    let q = random_unitary::<f64, _>(n, &mut t.rng);
    let s: Vec<f64> = (0..n).map(|_| if t.rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let flip = t.rng.random_bool(0.5);
    let sp: Vec<f64> = s
        .iter()
        .map(|&x| if flip && t.rng.random_bool(0.3) { -x } else { x })
        .collect();
    let build = |signs: &[f64]| Involution::new(&q * from_real_diagonal(signs) * q.adjoint(), t.tol);
    let j = build(&s)?;
    let jp = build(&sp)?;
    let report = acute_case(&j, &jp, t.tol)?;
    let diff = spectral_norm(&(j.matrix() - jp.matrix()));
    if report.acute {
        Ok(1e-9 - diff)
    } else if s != sp {
        Ok(1e-9)
    } else {
        Ok(-1.0)
    }
}

// relemma / spectral core

fn check_involution_defects(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(2);
    let k = t.rng.random_range(1..n);
    let j1 = random_involution::<f64, _>(n, k, &mut t.rng);
    let h = random_hermitian::<f64, _>(n, &mut t.rng);
    let j2 = sign_involution(&h, 0.0, t.tol)?;
    let inst = gen_random::<f64>(&random_spec(t, Disposition::Subordinated))?;
    let j3 = involution_from_split(&inst.a, &inst.split, t.tol)?;
    let worst = [j1, j2, j3, inst.j]
        .iter()
        .map(|j| {
            let (a, b) = j.defects();
            a.max(b)
        })
        .fold(0.0f64, f64::max);
    Ok(1e-10 - worst)
}

fn check_polar_factorization(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(1);
    let r = if t.rng.random_bool(0.5) { n } else { t.rng.random_range(1..=n) };
    let x = ginibre::<f64, _>(n, r, &mut t.rng);
    let y = ginibre::<f64, _>(n, r, &mut t.rng);
    let m = &x * y.adjoint();
    let polar = polar_decompose(&m, t.tol);
    let norm = spectral_norm(&m);
    let e1 = spectral_norm(&(&polar.w * polar.abs_t.matrix() - &m));
    let gram = (y.adjoint() * &y).try_inverse().ok_or_else(|| Error::ConstructionFailed("singular Gram matrix".into()))?;
    let q = &y * gram * y.adjoint();
    let e2 = spectral_norm(&(polar.w.adjoint() * &polar.w - q));
    // the range of M is only determined to about ε·σ_max/σ_r
    let mut sv = singular_values(&m);
    sv.sort_by(|a, b| b.total_cmp(a));
    let cond = sv[0] / sv[r - 1];
    Ok((1e-10 * norm - e1).min(1e-9 + 1e-12 * cond - e2))
}

fn check_projection_cover(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(2);
    let h = random_hermitian::<f64, _>(n, &mut t.rng);
    let eig = eigh(&h);
    let lo = eig.eigenvalues[0];
    let hi = eig.eigenvalues[n - 1];
    let c = t.unif(lo, hi);
    let below = spectral_projection(&h, &Interval::below(c), t.tol)?;
    let above = spectral_projection(&h, &Interval::above(c), t.tol)?;
    let idem = |p: &ComplexMatrix<f64>| spectral_norm(&(p * p - p));
    let cover = spectral_norm(&(&below + &above - identity::<f64>(n)));
    Ok((1e-11 - idem(&below).max(idem(&above))).min(1e-11 - cover))
}

fn check_accretive_preconditions(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(2);
    let seed = t.rng.random();
    let inst = gen_relemma_instance::<f64>(n, seed, t.tol)?;
    let slack = 1e-10 * inst.t.norm().max(1.0);
    let m1 = accretivity_margin(&(&inst.g * inst.t.matrix()));
    let m2 = accretivity_margin(&(inst.g.adjoint() * inst.t.matrix().adjoint()));
    Ok(slack + m1.min(m2))
}

fn check_accretive_transfer(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(2);
    let seed = t.rng.random();
    let inst = gen_relemma_instance::<f64>(n, seed, t.tol)?;
    let (gw, wg) = relemma_transfer_margins(&inst, t.tol);
    Ok(1e-9 + gw.min(wg))
}

// bounds

fn random_spec(t: &mut Trial<'_>, disposition: Disposition) -> RandomSpec {
    let n = t.dim(3);
    let n_minus = t.rng.random_range(1..=n - 2);
    let d = t.unif(0.5, 2.0);
    RandomSpec {
        n_minus,
        n_plus: n - n_minus,
        disposition,
        d,
        gap_len: Some(2.0 * d + t.unif(0.0, 4.0 * d)),
        spread: t.unif(0.0, 3.0),
        v_norm: 0.0,
        seed: t.rng.random(),
    }
}

fn analyzed(t: &mut Trial<'_>, spec: &RandomSpec) -> Result<BoundReport> {
    let inst = gen_random::<f64>(spec)?;
    analyze(&inst.a, &inst.v, &inst.split, t.tol)
}

fn missing(field: &'static str) -> Error {
    Error::ConstructionFailed(format!("report is missing {field}"))
}

pub(crate) fn subordinated_spec(t: &mut Trial<'_>) -> RandomSpec {
    let mut spec = random_spec(t, Disposition::Subordinated);
    spec.v_norm = spec.d * t.unif(0.0, 3.0);
    spec
}

fn check_dominance_subordinated(t: &mut Trial<'_>) -> Result<f64> {
    let spec = subordinated_spec(t);
    let r = analyzed(t, &spec)?;
    let gap = r.actual_gap.ok_or_else(|| missing("actual_gap"))?;
    let estin = r.bound_estin.ok_or_else(|| missing("bound_estin"))?;
    let dk = r.bound_dk.ok_or_else(|| missing("bound_dk"))?;
    Ok((estin + 1e-9 - gap).min(dk + 2e-9 - (estin + 1e-9)).min(dk + 1e-9 - gap))
}

fn check_dominance_annular_tan(t: &mut Trial<'_>) -> Result<f64> {
    let mut spec = random_spec(t, Disposition::Annular);
    spec.v_norm = spec.d * t.unif(0.0, 0.999);
    let r = analyzed(t, &spec)?;
    let gap = r.actual_gap.ok_or_else(|| missing("actual_gap"))?;
    let bound = r.bound_apriori.ok_or_else(|| missing("bound_apriori"))?;
    Ok(bound + 1e-9 - gap)
}

fn check_dominance_annular_trio(t: &mut Trial<'_>) -> Result<f64> {
    let mut spec = random_spec(t, Disposition::Annular);
    let g = spec.gap_len.expect("annular spec");
    spec.v_norm = (spec.d * (g - spec.d)).sqrt() * t.unif(0.0, 0.999);
    let r = analyzed(t, &spec)?;
    let theta = r.theta_u.ok_or_else(|| missing("theta_U"))?;
    let kappa = r.kappa_trio.ok_or_else(|| missing("kappa_trio"))?;
    Ok(0.5 * kappa.atan() + 1e-9 - theta)
}

fn check_enclosure(t: &mut Trial<'_>) -> Result<f64> {
    let mut spec = random_spec(t, Disposition::Annular);
    spec.v_norm = spec.d * t.unif(0.0, 1.4);
    let inst = gen_random::<f64>(&spec)?;
    let enc = crate::bounds::delta_enclosure(spec.v_norm, &inst.split)?;
    if !enc.separated || spec.v_norm * spec.v_norm >= 2.0 * spec.d * spec.d {
        return Ok(1e-9);
    }
    let (alpha, beta) = inst.split.gap().expect("annular split");
    let [lo, hi] = enc.minus_interval;
    let eig = eigh(&inst.a.add(&inst.v));
    let mut margin = f64::INFINITY;
    let mut inside = 0;
    for &x in &eig.eigenvalues {
        if x > alpha && x < beta {
            inside += 1;
            margin = margin.min(x - lo).min(hi - x);
        }
    }
    if inside != spec.n_minus {
        return Ok(-1.0);
    }
    Ok(margin + 1e-9)
}

fn check_kappa_grid_identity(t: &mut Trial<'_>) -> Result<f64> {
    let a = t.unif(0.0, 2.0);
    let b = a + t.unif(0.1, 2.0);
    let v = (b * b - a * a).sqrt() * t.unif(0.0, 0.9);
    let (_, grid_min) = varkappa_grid_min(a, b, v, 10_000)?;
    let exact = kappa_piecewise(v, b - a, 2.0 * b)?;
    Ok(1e-6 - (grid_min - exact).abs())
}

fn check_wrong_involution_bound(t: &mut Trial<'_>) -> Result<f64> {
    let spec = subordinated_spec(t);
    let r = analyzed(t, &spec)?;
    let lb = r.lower_bound_wrong.ok_or_else(|| missing("lower_bound_wrong"))?;
    let neg = r.spectral_angle_neg_jj.ok_or_else(|| missing("spectral_angle_neg_jj"))?;
    let min_arg = r.min_abs_arg_jj.ok_or_else(|| missing("min_abs_arg_jj"))?;
    let mut margin = (1e-9 - (neg - (PI - min_arg)).abs()).min(0.5 * neg + 1e-9 - lb);
    if let Some(theta) = r.theta_wrong {
        margin = margin.min(theta + 1e-9 - lb);
    }
    Ok(margin)
}

/// Sampling oracle for `κ(μ)`: the largest of 10⁴ Rayleigh ratios
/// `|⟨JVx, x⟩| / ⟨|A − μ|x, x⟩` over Gaussian directions. Two-dimensional
/// instances keep the near-maximizing set large enough for 10⁴ samples.
fn check_kappa_sampling_oracle(t: &mut Trial<'_>) -> Result<f64> {
    let d = t.unif(0.5, 2.0);
    let spec = RandomSpec {
        n_minus: 1,
        n_plus: 1,
        disposition: Disposition::Subordinated,
        d,
        gap_len: None,
        spread: 0.0,
        v_norm: d * t.unif(0.05, 3.0),
        seed: t.rng.random(),
    };
    let inst = gen_random::<f64>(&spec)?;
    let (lo, hi) = inst.split.mu_window(0.0);
    let mu = lo + (hi - lo) * t.unif(0.1, 0.9);
    let kappa = kappa_mu(&inst.a, &inst.v, &inst.j, mu, t.tol)?;
    let jv = inst.j.matrix() * inst.v.matrix();
    let abs_shift = eigh(&inst.a).apply(|l| (l - mu).abs());
    let mut best = 0.0f64;
    for _ in 0..10_000 {
        let x: ComplexVector<f64> = ginibre::<f64, _>(2, 1, &mut t.rng).column(0).into_owned();
        let num = x.dotc(&(&jv * &x)).modulus();
        let den = x.dotc(&(&abs_shift * &x)).re;
        best = best.max(num / den);
    }
    Ok((kappa * (1.0 + 1e-12) - best).min(best - kappa * (1.0 - 1e-2)) / kappa)
}

// numrange

fn check_hull_soundness(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(1);
    let m = ginibre::<f64, _>(n, n, &mut t.rng);
    let boundary = numrange_boundary(&m, 720)?;
    let slack = 1e-8 * spectral_norm(&m);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..500 {
        let y = ginibre::<f64, _>(n, 1, &mut t.rng).column(0).normalize();
        worst = worst.max(boundary.excess(y.dotc(&(&m * &y))));
    }
    Ok(slack - worst)
}

fn max_abs_arg_refined(s: &ComplexMatrix<f64>, m: usize) -> Result<f64> {
    let boundary = numrange_boundary(s, m)?;
    let (best, _) = boundary
        .points
        .iter()
        .enumerate()
        .map(|(k, z)| (k, principal_arg(*z).abs()))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let step = 2.0 * PI / m as f64;
    let center = boundary.angles[best];
    let f = |theta: f64| -principal_arg(support_point(s, theta).0).abs();
    let (_, value) = crate::bounds::golden_section(f, center - step, center + step, 1e-12);
    Ok((-value).max(boundary.max_abs_arg()))
}

fn check_sector_bound_consistency(t: &mut Trial<'_>) -> Result<f64> {
    let n = t.dim(1);
    let g = ginibre::<f64, _>(n, n, &mut t.rng);
    let h = &g * g.adjoint() + identity::<f64>(n) * Complex::new(t.unif(0.05, 1.0), 0.0);
    let k = random_hermitian::<f64, _>(n, &mut t.rng);
    let s = h + k.matrix() * Complex::new(0.0, 1.0);
    let bound = sector_bound(&s, t.tol)?;
    let arg = max_abs_arg_refined(&s, 720)?;
    if bound.k == 0.0 {
        return Ok(1e-4 - arg.tan().abs());
    }
    Ok(1e-4 - (arg.tan() - bound.k).abs() / bound.k)
}

fn unit_in(p: &ComplexMatrix<f64>, rng: &mut ChaCha8Rng) -> ComplexVector<f64> {
    let n = p.nrows();
    let x: ComplexVector<f64> = p * ginibre::<f64, _>(n, 1, rng).column(0);
    x.normalize()
}

fn check_compression_inclusion(t: &mut Trial<'_>) -> Result<f64> {
    let mut spec = random_spec(t, Disposition::Subordinated);
    spec.v_norm = spec.d * t.unif(0.0, 2.0);
    let inst = gen_random::<f64>(&spec)?;
    let (lo, hi) = inst.split.mu_window(0.0);
    let mu = lo + (hi - lo) * t.unif(0.1, 0.9);
    let big = compressed_operator(&inst.a, &inst.v, &inst.j, mu);
    let hull = numrange_boundary(&big, 720)?;
    let slack = 1e-8 * spectral_norm(&big);
    let e_minus = unit_in(inst.j.p_minus(), &mut t.rng);
    let e_plus = unit_in(inst.j.p_plus(), &mut t.rng);
    let small = pair_compression(&inst.a, &inst.v, &inst.j, mu, &e_minus, &e_plus, t.tol)?;
    let pts = numrange_boundary(&small, 64)?;
    let worst = pts.points.iter().fold(f64::NEG_INFINITY, |a, &z| a.max(hull.excess(z)));
    Ok(slack - worst)
}

fn check_acute_numrange_link(t: &mut Trial<'_>) -> Result<f64> {
    let (j, jp) = if t.rng.random_bool(0.5) {
        acute_pair(t)
    } else {
        let n = t.dim(3);
        let k = t.rng.random_range(1..n - 1);
        (
            random_involution::<f64, _>(n, k, &mut t.rng),
            random_involution::<f64, _>(n, k + 1, &mut t.rng),
        )
    };
    let report = acute_case(&j, &jp, t.tol)?;
    let boundary = numrange_boundary(&(jp.matrix() * j.matrix()), 720)?;
    let excess = boundary.excess(Complex::new(-1.0, 0.0));
    let tol = t.tol.hull;
    if report.acute {
        Ok(excess - tol)
    } else {
        Ok(tol - excess)
    }
}

// scenarios

fn check_tsharp_closed_form(t: &mut Trial<'_>) -> Result<f64> {
    let a = t.unif(0.0, 0.9);
    let b = 1.0;
    let cap = (b * b - a * a).sqrt() * 0.99;
    let v = cap * t.unif(0.0, 1.0);
    let v1 = v * t.unif(0.0, 1.0);
    let inst = gen_tsharp::<f64>(&TsharpParams { a, b, v1, v2: v - v1 }, t.tol)?;
    let r = analyze(&inst.instance.a, &inst.instance.v, &inst.instance.split, t.tol)?;
    let theta = r.theta_u.ok_or_else(|| missing("theta_U"))?;
    Ok(1e-10 - (theta - inst.theta_closed_form).abs())
}

fn check_tsharp_max_theta(t: &mut Trial<'_>) -> Result<f64> {
    let a = t.unif(0.0, 0.9);
    let b = 1.0;
    let v = (b * b - a * a).sqrt() * t.unif(0.0, 0.95);
    let grid = tsharp_max_theta(a, b, v, 200)?;
    let exact = 0.5 * kappa_piecewise(v, b - a, 2.0 * b)?.atan();
    Ok(1e-6 - (grid - exact).abs())
}

fn ksharp_grid(t: &mut Trial<'_>) -> KsharpGrid {
    let a = t.unif(0.0, 1.0);
    KsharpGrid {
        a,
        coupling: t.unif(0.1, 4.0),
        n: t.rng.random_range(1..=t.max_dim.max(2) / 2),
        t_max: a + t.unif(0.5, 3.0),
    }
}

fn check_ksharp_exactness(t: &mut Trial<'_>) -> Result<f64> {
    let g = ksharp_grid(t);
    let k = gen_ksharp::<f64>(&g, t.tol)?;
    let rot = direct_rotation(&k.instance.j, &k.jp, t.tol)?;
    let kappa0 = kappa_mu(&k.instance.a, &k.instance.v, &k.instance.j, 0.0, t.tol)?;
    Ok((1e-12 - k.spectrum_error)
        .min(1e-12 - (rot.theta - k.theta_exact).abs())
        .min(1e-10 - (kappa0 - g.coupling).abs()))
}

fn check_ksharp_kappa_inf(t: &mut Trial<'_>) -> Result<f64> {
    let g = ksharp_grid(t);
    let k = gen_ksharp::<f64>(&g, t.tol)?;
    let (kappa, _) = kappa_inf(&k.instance.a, &k.instance.v, &k.instance.split, t.tol)?;
    Ok(1e-6 * g.coupling.max(1.0) - (kappa - g.coupling).abs())
}

fn check_generator_self_check(t: &mut Trial<'_>) -> Result<f64> {
    let disposition = if t.rng.random_bool(0.5) {
        Disposition::Subordinated
    } else {
        Disposition::Annular
    };
    let mut spec = random_spec(t, disposition);
    spec.v_norm = spec.d * t.unif(0.0, 2.0);
    let x = gen_random::<f64>(&spec)?;
    let y = gen_random::<f64>(&spec)?;
    if x.a != y.a || x.v != y.v {
        return Ok(-1.0);
    }
    if !anticommutes(x.v.matrix(), &x.j, t.tol)? {
        return Ok(-1.0);
    }
    let j = involution_from_split(&x.a, &x.split, t.tol)?;
    let e_d = (x.split.d() - spec.d).abs() / spec.d;
    let e_v = (x.v.norm() - spec.v_norm).abs() / spec.v_norm.max(1.0);
    let e_j = spectral_norm(&(j.matrix() - x.j.matrix()));
    Ok((1e-12 - e_d).min(1e-12 - e_v).min(1e-10 - e_j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in ["all", "rotation", "relemma", "bounds", "numrange", "scenarios"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("other".parse::<Suite>().is_err());
    }

    #[test]
    fn every_invariant_passes_a_few_trials() {
        let cfg = VerifyConfig {
            trials: 3,
            seed: 7,
            max_dim: 6,
            ..VerifyConfig::default()
        };
        let summary = run_verify(&cfg, &Tolerances::default()).unwrap();
        assert_eq!(summary.outcomes.len(), invariant_names().len());
        assert!(summary.all_passed(), "{}", summary.to_text());
    }

    #[test]
    fn non_unitary_injection_fails_by_name() {
        let cfg = VerifyConfig {
            suite: Suite::Rotation,
            trials: 2,
            seed: 1,
            max_dim: 4,
            inject: Injection::NonUnitary,
        };
        let summary = run_verify(&cfg, &Tolerances::default()).unwrap();
        assert_eq!(summary.failing(), vec!["rotation/norm_angle_identity".to_string()]);
        assert!(summary.to_text().contains("not unitary"));
    }

    #[test]
    fn output_is_deterministic() {
        let cfg = VerifyConfig {
            suite: Suite::Bounds,
            trials: 1,
            seed: 3,
            max_dim: 5,
            ..VerifyConfig::default()
        };
        let tol = Tolerances::default();
        let a = run_verify(&cfg, &tol).unwrap().to_text();
        let b = run_verify(&cfg, &tol).unwrap().to_text();
        assert_eq!(a, b);
        assert!(a.contains("1/1"));
        let zero = VerifyConfig { trials: 0, ..cfg };
        assert!(run_verify(&zero, &tol).is_err());
    }
}
