//! A priori bounds for off-diagonal perturbations and the report that
//! collects them for one instance.

use std::collections::BTreeMap;

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{check_same_dim, spectral_norm, ComplexMatrix, HermitianOperator};
use crate::rotation::{direct_rotation, projection_gap};
use crate::scalar::{creal, Real};
use crate::spectral::{
    anticommutator_norm, anticommutes, commutator_norm, commutes, eigh, involution_from_split_of,
    EigenSystem, Involution,
};
use crate::split::{Disposition, SpectralSplit};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn ensure_off_diagonal<T: Real>(v: &HermitianOperator<T>, j: &Involution<T>, tol: &Tolerances) -> Result<()> {
    if !anticommutes(v.matrix(), j, tol)? {
        return Err(Error::NotOffDiagonal {
            defect: anticommutator_norm(v.matrix(), j)?.as_f64(),
        });
    }
    Ok(())
}

/// `κ(μ) = ‖D^{-1/2} JV D^{-1/2}‖` with `D = |A − μ|`.
pub fn kappa_mu<T: Real>(
    a: &HermitianOperator<T>,
    v: &HermitianOperator<T>,
    j: &Involution<T>,
    mu: T,
    tol: &Tolerances,
) -> Result<T> {
    check_same_dim(a.matrix(), v.matrix())?;
    ensure_off_diagonal(v, j, tol)?;
    if !commutes(a.matrix(), j, tol)? {
        return Err(Error::NotDiagonal {
            defect: commutator_norm(a.matrix(), j)?.as_f64(),
        });
    }
    let eig = eigh(a);
    check_kernel(&eig, mu, tol)?;
    let d_inv_sqrt = eig.apply(|l| T::one() / (l - mu).abs().sqrt());
    let m = &d_inv_sqrt * j.matrix() * v.matrix() * &d_inv_sqrt;
    Ok(spectral_norm(&m))
}

fn check_kernel<T: Real>(eig: &EigenSystem<T>, mu: T, tol: &Tolerances) -> Result<()> {
    let distance = eig
        .eigenvalues
        .iter()
        .fold(T::infinity(), |acc, &l| acc.min((l - mu).abs()));
    let bound = T::lit(tol.kernel) * eig.spectral_radius().max(mu.abs());
    if distance <= bound {
        return Err(Error::KernelNotTrivial {
            mu: mu.as_f64(),
            distance: distance.as_f64(),
            tol: bound.as_f64(),
        });
    }
    Ok(())
}

/// `κ(μ)` evaluated repeatedly in the eigenbasis of `A`.
///
/// There `JV` only has the blocks between the `σ₋` and `σ₊` eigenvectors, so
/// `κ(μ)` is the norm of the `n₋ × n₊` block `B` scaled by `|λ − μ|^{-1/2}` on
/// both sides.
#[derive(Debug, Clone)]
pub struct KappaProfile<T: Real> {
    lambda_minus: Vec<T>,
    lambda_plus: Vec<T>,
    block: ComplexMatrix<T>,
}

impl<T: Real> KappaProfile<T> {
    pub fn new(
        a: &HermitianOperator<T>,
        v: &HermitianOperator<T>,
        j: &Involution<T>,
        tol: &Tolerances,
    ) -> Result<Self> {
        Self::from_eigen(&eigh(a), v, j, tol)
    }

    pub fn from_eigen(
        eig: &EigenSystem<T>,
        v: &HermitianOperator<T>,
        j: &Involution<T>,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_same_dim(&eig.eigenvectors, v.matrix())?;
        ensure_off_diagonal(v, j, tol)?;
        let q = &eig.eigenvectors;
        let j_in_basis = q.adjoint() * j.matrix() * q;
        let mut off = j_in_basis.clone();
        off.fill_diagonal(creal(T::zero()));
        let defect = spectral_norm(&off);
        if defect > T::lit(tol.comm) * (T::one() + T::one()) {
            return Err(Error::NotDiagonal {
                defect: defect.as_f64(),
            });
        }
        let (mut minus, mut plus) = (Vec::new(), Vec::new());
        for k in 0..eig.dim() {
            if j_in_basis[(k, k)].re < T::zero() {
                minus.push(k);
            } else {
                plus.push(k);
            }
        }
        let v_in_basis = q.adjoint() * v.matrix() * q;
        let block = v_in_basis.select_rows(&minus).select_columns(&plus);
        Ok(Self {
            lambda_minus: minus.iter().map(|&k| eig.eigenvalues[k]).collect(),
            lambda_plus: plus.iter().map(|&k| eig.eigenvalues[k]).collect(),
            block,
        })
    }

    /// `κ(μ)`; infinite when `μ` hits an eigenvalue with nonzero coupling.
    pub fn eval(&self, mu: T) -> T {
        if self.block.is_empty() {
            return T::zero();
        }
        let mut scaled = self.block.clone();
        for (i, &l) in self.lambda_minus.iter().enumerate() {
            let s = T::one() / (l - mu).abs().sqrt();
            scaled.row_mut(i).scale_mut(s);
        }
        for (k, &l) in self.lambda_plus.iter().enumerate() {
            let s = T::one() / (l - mu).abs().sqrt();
            scaled.column_mut(k).scale_mut(s);
        }
        let value = spectral_norm(&scaled);
        if value.is_finite_value() {
            value
        } else {
            T::infinity()
        }
    }
}

/// Golden-section minimization of `f` on `[lo, hi]` until the bracket is
/// narrower than `width`.
pub fn golden_section<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, width: T) -> (T, T) {
    let ratio = T::lit(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut guard = 0;
    while hi - lo > width && guard < 200 {
        guard += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Dense grid over `[lo, hi]` followed by golden-section refinement around
/// the best node. Returns `(argmin, min)`.
pub fn grid_minimize<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, grid: usize, rel: T) -> (T, T) {
    let grid = grid.max(2);
    let step = (hi - lo) / T::lit((grid - 1) as f64);
    let node = |i: usize| if i + 1 == grid { hi } else { lo + step * T::lit(i as f64) };
    let mut best = (0, f(lo));
    for i in 1..grid {
        let value = f(node(i));
        if value < best.1 {
            best = (i, value);
        }
    }
    let left = node(best.0.saturating_sub(1));
    let right = node((best.0 + 1).min(grid - 1));
    let (x, fx) = golden_section(&f, left, right, rel * (hi - lo));
    if fx < best.1 {
        (x, fx)
    } else {
        (node(best.0), best.1)
    }
}

pub const DEFAULT_KAPPA_GRID: usize = 256;

/// `(inf_μ κ(μ), μ*)` over the subordinated window `(sup σ₋, inf σ₊)`.
pub fn kappa_inf<T: Real>(
    a: &HermitianOperator<T>,
    v: &HermitianOperator<T>,
    split: &SpectralSplit<T>,
    tol: &Tolerances,
) -> Result<(T, T)> {
    if split.disposition() != Disposition::Subordinated {
        return Err(Error::WrongDisposition {
            expected: "subordinated",
        });
    }
    let eig = eigh(a);
    let j = involution_from_split_of(&eig, split, tol)?;
    let profile = KappaProfile::from_eigen(&eig, v, &j, tol)?;
    Ok(kappa_inf_profile(&profile, split, DEFAULT_KAPPA_GRID, tol))
}

pub fn kappa_inf_profile<T: Real>(
    profile: &KappaProfile<T>,
    split: &SpectralSplit<T>,
    grid: usize,
    tol: &Tolerances,
) -> (T, T) {
    let (lo, hi) = split.mu_window(T::zero());
    let inset = T::lit(tol.grid_inset) * (hi - lo);
    let (mu, k) = grid_minimize(|mu| profile.eval(mu), lo + inset, hi - inset, grid, T::lit(tol.golden));
    (k, mu)
}

/// `sin(½ arctan κ)`, with `κ = ∞` giving `√2/2`.
pub fn bound_estin<T: Real>(kappa: T) -> Result<T> {
    if !(kappa >= T::zero()) {
        return Err(Error::NegativeKappa(kappa.as_f64()));
    }
    if !kappa.is_finite_value() {
        return Ok(T::lit(SQRT_HALF));
    }
    Ok((kappa.atan() * T::lit(0.5)).sin())
}

fn check_d<T: Real>(d: T) -> Result<()> {
    if !(d > T::zero()) {
        return Err(Error::NonPositiveD(d.as_f64()));
    }
    Ok(())
}

fn check_norm<T: Real>(norm_v: T) -> Result<()> {
    if !(norm_v >= T::zero()) || !norm_v.is_finite_value() {
        return Err(Error::ConditionViolated {
            condition: "norm_nonnegative",
            detail: format!("‖V‖ = {norm_v}"),
        });
    }
    Ok(())
}

/// `sin(½ arctan(2‖V‖/d))`.
pub fn bound_dk<T: Real>(norm_v: T, d: T) -> Result<T> {
    check_d(d)?;
    check_norm(norm_v)?;
    Ok(((norm_v * T::lit(2.0) / d).atan() * T::lit(0.5)).sin())
}

/// `‖V‖ / √(d² + ‖V‖²)`, valid for `‖V‖ < d`.
pub fn bound_apriori_tan<T: Real>(norm_v: T, d: T) -> Result<T> {
    check_d(d)?;
    check_norm(norm_v)?;
    if norm_v >= d {
        return Err(Error::ConditionViolated {
            condition: "apriori_tan",
            detail: format!("‖V‖ = {norm_v} is not below d = {d}"),
        });
    }
    Ok(norm_v / d.hypot(norm_v))
}

/// The two-branch function `κ(v)` for a gap of length `gap_len ≥ 2d`,
/// defined for `0 ≤ v < √(d(gap_len − d))`.
pub fn kappa_piecewise<T: Real>(v: T, d: T, gap_len: T) -> Result<T> {
    check_d(d)?;
    check_norm(v)?;
    let two = T::lit(2.0);
    if gap_len < two * d {
        return Err(Error::ConditionViolated {
            condition: "gap_len",
            detail: format!("gap length {gap_len} is below 2d = {}", two * d),
        });
    }
    let cap2 = d * (gap_len - d);
    if v >= cap2.sqrt() {
        return Err(Error::ConditionViolated {
            condition: "trio",
            detail: format!("‖V‖ = {v} is not below √(d(|Δ|−d)) = {}", cap2.sqrt()),
        });
    }
    let half_gap = gap_len / two;
    let threshold2 = d / two * (half_gap - d);
    if v * v <= threshold2 {
        return Ok(two * v / d);
    }
    let a = half_gap - d;
    Ok((v * half_gap + (cap2 * (a * a + v * v)).sqrt()) / (cap2 - v * v))
}

/// The function `ϰ(μ)` for `σ₋ ⊂ [−a, a]`, `σ₊ ∩ (−b, b) = ∅`, on the
/// window `a² + ‖V‖² < μ < b²`.
pub fn varkappa_mu<T: Real>(a: T, b: T, norm_v: T, mu: T) -> Result<T> {
    check_norm(norm_v)?;
    if !(a >= T::zero() && a < b) {
        return Err(Error::ConditionViolated {
            condition: "0 <= a < b",
            detail: format!("a = {a}, b = {b}"),
        });
    }
    let v2 = norm_v * norm_v;
    let (lo, hi) = (a * a + v2, b * b);
    if !(mu > lo && mu < hi) {
        return Err(Error::MuOutOfWindow {
            mu: mu.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let left = (mu - lo).sqrt();
    if a * (hi - mu) > b * v2 {
        Ok(norm_v * (a + b) / (left * (hi + v2 - mu).sqrt()))
    } else {
        Ok((b * b * v2 + a * a * (hi - mu)).sqrt() / (left * (hi - mu).sqrt()))
    }
}

/// Minimum of `ϰ(μ)` over `points` equally spaced interior nodes of its window.
pub fn varkappa_grid_min<T: Real>(a: T, b: T, norm_v: T, points: usize) -> Result<(T, T)> {
    let (lo, hi) = (a * a + norm_v * norm_v, b * b);
    if !(lo < hi) {
        return Err(Error::ConditionViolated {
            condition: "trio",
            detail: format!("empty window ({lo}, {hi})"),
        });
    }
    let mut best = (lo, T::infinity());
    for i in 1..=points {
        let mu = lo + (hi - lo) * T::lit(i as f64) / T::lit((points + 1) as f64);
        let value = varkappa_mu(a, b, norm_v, mu)?;
        if value < best.1 {
            best = (mu, value);
        }
    }
    Ok(best)
}

/// Guaranteed location of the perturbed spectrum for an annular split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEnclosure {
    pub delta_minus: f64,
    pub delta_plus: f64,
    /// `[inf σ₋ − δ₋, sup σ₋ + δ₊]`, the region for `σ′₋`.
    pub minus_interval: [f64; 2],
    /// `Δ = (α, β)`, avoided by `σ′₊`.
    pub gap: [f64; 2],
    /// `δ₋ < inf σ₋ − α` and `δ₊ < β − sup σ₋`.
    pub separated: bool,
}

pub fn delta_enclosure<T: Real>(norm_v: T, split: &SpectralSplit<T>) -> Result<DeltaEnclosure> {
    check_norm(norm_v)?;
    let (alpha, beta) = split.gap().ok_or(Error::WrongDisposition { expected: "annular" })?;
    let (lo, hi) = (split.inf_minus(), split.sup_minus());
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let delta = |span: T| norm_v * ((two * norm_v / span).atan() * half).tan();
    let dm = delta(beta - lo);
    let dp = delta(hi - alpha);
    Ok(DeltaEnclosure {
        delta_minus: dm.as_f64(),
        delta_plus: dp.as_f64(),
        minus_interval: [(lo - dm).as_f64(), (hi + dp).as_f64()],
        gap: [alpha.as_f64(), beta.as_f64()],
        separated: dm < lo - alpha && dp < beta - hi,
    })
}

/// `π/2 − ½ arctan k`, with `k = ∞` giving `π/4`.
pub fn lower_bound_wrong_involution<T: Real>(k: T) -> T {
    if !k.is_finite_value() {
        return T::frac_pi_4();
    }
    T::frac_pi_2() - k.atan() * T::lit(0.5)
}

mod inf_float {
    //! `Option<f64>` with `+∞` written as the string `"inf"`.
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(x) if x.is_infinite() && *x > 0.0 => s.serialize_str("inf"),
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(x)) => Ok(Some(x)),
            Some(Repr::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(Repr::Text(t)) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

/// Everything `analyze` knows about one instance.
///
/// Annular quantities (`gap_len`, `center`, `kappa_trio`, enclosure) are in
/// the user's coordinates except `mu_window`, which is in squared centered
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundReport {
    pub disposition: Disposition,
    pub dim: usize,
    pub n_minus: usize,
    pub norm_v: f64,
    pub d: f64,
    pub gap_len: Option<f64>,
    pub center: Option<f64>,
    pub mu_window: [f64; 2],
    pub conditions: BTreeMap<String, bool>,
    #[serde(with = "inf_float")]
    pub kappa_inf: Option<f64>,
    pub mu_star: Option<f64>,
    pub kappa_trio: Option<f64>,
    pub bound_estin: Option<f64>,
    pub bound_dk: Option<f64>,
    pub bound_apriori: Option<f64>,
    pub bound_trio: Option<f64>,
    pub delta_minus: Option<f64>,
    pub delta_plus: Option<f64>,
    pub spectrum_minus: Vec<f64>,
    pub spectrum_plus: Vec<f64>,
    pub actual_gap: Option<f64>,
    #[serde(rename = "theta_U")]
    pub theta_u: Option<f64>,
    pub sharpness_ratio: Option<f64>,
    /// `π/2 − ½ arctan κ` for the applicable `κ`.
    pub lower_bound_wrong: Option<f64>,
    /// `ϑ` of the direct rotation from `J` to `−J′`, when that pair is acute.
    pub theta_wrong: Option<f64>,
    /// `ϑ(J′J)` and `ϑ(−J′J)`.
    pub spectral_angle_jj: Option<f64>,
    pub spectral_angle_neg_jj: Option<f64>,
    /// `min |arg z|` over `spec(J′J)`.
    pub min_abs_arg_jj: Option<f64>,
}

pub const CONDITION_NAMES: [&str; 5] = ["general_half_d", "offdiag_sqrt3", "apriori_tan", "trio", "enclosure"];

impl BoundReport {
    /// Tightest bound present.
    pub fn tightest_bound(&self) -> Option<f64> {
        [self.bound_estin, self.bound_dk, self.bound_apriori, self.bound_trio]
            .into_iter()
            .flatten()
            .fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.min(b))))
    }

    /// The hypothesis that governs the disposition holds: always for a
    /// subordinated split, `‖V‖ < d` for an annular one.
    pub fn conditions_met(&self) -> bool {
        match self.disposition {
            Disposition::Subordinated => true,
            Disposition::Annular => self.conditions.get("apriori_tan").copied().unwrap_or(false),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::format("report", e.to_string()))
    }
}

/// Builds `L = A + V`, its spectral split, the direct rotation and every
/// applicable bound.
pub fn analyze<T: Real>(
    a: &HermitianOperator<T>,
    v: &HermitianOperator<T>,
    split: &SpectralSplit<T>,
    tol: &Tolerances,
) -> Result<BoundReport> {
    check_same_dim(a.matrix(), v.matrix())?;
    let n = a.dim();
    let eig_a = eigh(a);
    let j = involution_from_split_of(&eig_a, split, tol)?;
    ensure_off_diagonal(v, &j, tol)?;
    let n_minus = j.p_minus().trace().re.as_f64().round() as usize;

    let norm_v = eigh(v).spectral_radius();
    let d = split.d();
    let nv = norm_v.as_f64();
    let df = d.as_f64();
    let gap_len = split.gap_len();

    let mut conditions = BTreeMap::new();
    conditions.insert("general_half_d".to_string(), nv < df / 2.0);
    conditions.insert("offdiag_sqrt3".to_string(), nv < 3f64.sqrt() / 2.0 * df);
    conditions.insert("apriori_tan".to_string(), norm_v < d);
    let trio = gap_len.is_some_and(|g| norm_v < (d * (g - d)).sqrt());
    conditions.insert("trio".to_string(), trio);

    let mut report = BoundReport {
        disposition: split.disposition(),
        dim: n,
        n_minus,
        norm_v: nv,
        d: df,
        gap_len: gap_len.map(|g| g.as_f64()),
        center: split.center().map(|c| c.as_f64()),
        mu_window: {
            let (lo, hi) = split.mu_window(norm_v);
            [lo.as_f64(), hi.as_f64()]
        },
        conditions,
        kappa_inf: None,
        mu_star: None,
        kappa_trio: None,
        bound_estin: None,
        bound_dk: None,
        bound_apriori: None,
        bound_trio: None,
        delta_minus: None,
        delta_plus: None,
        spectrum_minus: Vec::new(),
        spectrum_plus: Vec::new(),
        actual_gap: None,
        theta_u: None,
        sharpness_ratio: None,
        lower_bound_wrong: None,
        theta_wrong: None,
        spectral_angle_jj: None,
        spectral_angle_neg_jj: None,
        min_abs_arg_jj: None,
    };

    if norm_v < d {
        report.bound_apriori = Some(bound_apriori_tan(norm_v, d)?.as_f64());
    }
    let slack = split.class_slack(tol);
    let l = a.add(v);
    let eig_l = eigh(&l);

    // guaranteed regions for σ′₋ and σ′₊
    type Region<'r, T> = Box<dyn Fn(T) -> bool + 'r>;
    let (minus_region, plus_region): (Region<'_, T>, Region<'_, T>);
    let kappa_for_wrong: T;
    match split.disposition() {
        Disposition::Subordinated => {
            report.conditions.insert("enclosure".to_string(), true);
            let profile = KappaProfile::from_eigen(&eig_a, v, &j, tol)?;
            let (kappa, mu) = kappa_inf_profile(&profile, split, DEFAULT_KAPPA_GRID, tol);
            report.kappa_inf = Some(kappa.as_f64());
            report.mu_star = Some(mu.as_f64());
            report.bound_estin = Some(bound_estin(kappa)?.as_f64());
            report.bound_dk = Some(bound_dk(norm_v, d)?.as_f64());
            kappa_for_wrong = kappa;
            let (sup_m, inf_p) = (split.sup_minus(), split.inf_plus());
            minus_region = Box::new(move |x| x <= sup_m + slack);
            plus_region = Box::new(move |x| x >= inf_p - slack);
        }
        Disposition::Annular => {
            let g = gap_len.expect("annular split has a gap");
            if trio {
                let k = kappa_piecewise(norm_v, d, g)?;
                report.kappa_trio = Some(k.as_f64());
                report.bound_trio = Some(bound_estin(k)?.as_f64());
                kappa_for_wrong = k;
            } else {
                kappa_for_wrong = T::infinity();
            }
            let enc = delta_enclosure(norm_v, split)?;
            let valid = enc.separated && norm_v * norm_v < d * d * T::lit(2.0);
            report.conditions.insert("enclosure".to_string(), valid);
            report.delta_minus = Some(enc.delta_minus);
            report.delta_plus = Some(enc.delta_plus);
            let (alpha, beta) = split.gap().expect("annular split has a gap");
            if valid {
                let lo = T::lit(enc.minus_interval[0]) - slack;
                let hi = T::lit(enc.minus_interval[1]) + slack;
                minus_region = Box::new(move |x| x >= lo && x <= hi);
                plus_region = Box::new(move |x| x <= alpha + slack || x >= beta - slack);
            } else if trio {
                // a nonempty μ-window keeps (L − c)² − μ invertible, so no
                // perturbed eigenvalue enters the annulus a² + ‖V‖² < (λ − c)² < b²
                let c = split.center().expect("annular split has a gap");
                let (w_lo, w_hi) = split.mu_window(norm_v);
                let slack2 = slack * (beta - alpha);
                minus_region = Box::new(move |x| (x - c) * (x - c) <= w_lo + slack2);
                plus_region = Box::new(move |x| (x - c) * (x - c) >= w_hi - slack2);
            } else {
                report.spectrum_minus = eig_l.eigenvalues.iter().map(|x| x.as_f64()).collect();
                return Ok(report);
            }
        }
    }

    let mut minus_cols = Vec::new();
    for (k, &lambda) in eig_l.eigenvalues.iter().enumerate() {
        match (minus_region(lambda), plus_region(lambda)) {
            (true, false) => {
                minus_cols.push(k);
                report.spectrum_minus.push(lambda.as_f64());
            }
            (false, true) => report.spectrum_plus.push(lambda.as_f64()),
            _ => {
                return Err(Error::EnclosureViolated {
                    eigenvalue: lambda.as_f64(),
                })
            }
        }
    }
    if minus_cols.len() != n_minus {
        let culprit = eig_l.eigenvalues[minus_cols.first().copied().unwrap_or(0)];
        return Err(Error::EnclosureViolated {
            eigenvalue: culprit.as_f64(),
        });
    }

    let jp = Involution::from_minus_projection(eig_l.projector(minus_cols));
    let rotation = direct_rotation(&j, &jp, tol)?;
    let gap = projection_gap(j.p_minus(), jp.p_minus(), tol)?;
    report.actual_gap = Some(gap.as_f64());
    report.theta_u = Some(rotation.theta.as_f64());
    report.sharpness_ratio = report.tightest_bound().map(|b| {
        let g = gap.as_f64();
        if b > 0.0 {
            g / b
        } else if g == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    });
    report.lower_bound_wrong = Some(lower_bound_wrong_involution(kappa_for_wrong).as_f64());

    let prod = jp.matrix() * j.matrix();
    let spec = crate::rotation::normal_eigenvalues(&prod);
    let args: Vec<T> = spec
        .iter()
        .map(|&z| crate::scalar::principal_arg(z / creal(z.modulus())).abs())
        .collect();
    let max_arg = args.iter().fold(T::zero(), |acc, &x| acc.max(x));
    let min_arg = args.iter().fold(T::infinity(), |acc, &x| acc.min(x));
    report.spectral_angle_jj = Some(max_arg.as_f64());
    report.min_abs_arg_jj = Some(min_arg.as_f64());
    report.spectral_angle_neg_jj = Some(crate::rotation::spectral_angle(&(-prod), tol)?.as_f64());
    if let Ok(wrong) = direct_rotation(&j, &jp.negated(), tol) {
        report.theta_wrong = Some(wrong.theta.as_f64());
    }
    Ok(report)
}
