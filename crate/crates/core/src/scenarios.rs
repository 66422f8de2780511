//! Instance generators: the two sharpness families, random instances with a
//! prescribed disposition, and random `(G, T)` pairs.
//!
//! Randomness comes from ChaCha8 streams keyed by `(seed, index)`, so every
//! instance can be regenerated on its own.

use nalgebra::ComplexField;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::kappa_mu;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{from_real_diagonal, identity, spectral_norm, ComplexMatrix, HermitianOperator, MatrixJson};
use crate::rotation::normal_eigenvalues;
use crate::scalar::{cis, cplx, creal, Real};
use crate::spectral::{accretivity_margin, sign_involution, Involution};
use crate::split::{Disposition, SpectralSplit, SplitJson};

/// Independent stream for instance `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<T: Real, R: Rng>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn ginibre<T: Real, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    let scale = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    ComplexMatrix::from_fn(rows, cols, |_, _| cplx(gaussian::<T, R>(rng) * scale, gaussian::<T, R>(rng) * scale))
}

/// Haar-distributed unitary: `Q` from the QR factorization of a Ginibre
/// matrix with the phases of `diag(R)` moved into `Q`.
pub fn random_unitary<T: Real, R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let qr = ginibre::<T, R>(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let z = r[(k, k)];
        let m = z.modulus();
        if m > T::zero() {
            let phase = z / creal(m);
            for i in 0..n {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

/// Random Hermitian matrix (GUE-like scaling).
pub fn random_hermitian<T: Real, R: Rng>(n: usize, rng: &mut R) -> HermitianOperator<T> {
    HermitianOperator::from_hermitian_part(&ginibre::<T, R>(n, n, rng))
}

/// `Q diag(−1,…,−1, 1,…,1) Qᴴ` with `n_minus` negative signs and Haar `Q`.
pub fn random_involution<T: Real, R: Rng>(n: usize, n_minus: usize, rng: &mut R) -> Involution<T> {
    let q = random_unitary::<T, R>(n, rng);
    let signs: Vec<T> = (0..n).map(|k| if k < n_minus { -T::one() } else { T::one() }).collect();
    let j = &q * from_real_diagonal(&signs) * q.adjoint();
    Involution::from_minus_projection(crate::matrix::hermitian_part(&((identity::<T>(n) - j) * creal(T::lit(0.5)))))
}

/// `Q diag(e^{iφ_k}) Qᴴ` with Haar `Q` and phases uniform in `(−max_phase, max_phase)`.
pub fn random_phase_unitary<T: Real, R: Rng>(n: usize, max_phase: f64, rng: &mut R) -> ComplexMatrix<T> {
    let q = random_unitary::<T, R>(n, rng);
    let mut w = q.clone();
    for k in 0..n {
        let z = cis(T::lit(rng.random_range(-max_phase..max_phase)));
        for i in 0..n {
            w[(i, k)] *= z;
        }
    }
    w * q.adjoint()
}

/// Random acute pair `(J, J′)` with `J′ = WJWᴴ` for a unitary `W` whose
/// eigenphases stay below `max_phase < π/2` in modulus, so `ϑ(J′J) < π`.
pub fn random_acute_pair<T: Real, R: Rng>(n: usize, max_phase: f64, rng: &mut R) -> (Involution<T>, Involution<T>) {
    let n_minus = rng.random_range(1..n.max(2));
    let j = random_involution::<T, R>(n, n_minus.min(n), rng);
    let w = random_phase_unitary::<T, R>(n, max_phase, rng);
    let jp = &w * j.matrix() * w.adjoint();
    let pm = crate::matrix::hermitian_part(&((identity::<T>(n) - jp) * creal(T::lit(0.5))));
    (j, Involution::from_minus_projection(pm))
}

/// An instance `(A, V)` with its split and the involution `J` it induces.
#[derive(Debug, Clone)]
pub struct Instance<T: Real> {
    pub a: HermitianOperator<T>,
    pub v: HermitianOperator<T>,
    pub j: Involution<T>,
    pub split: SpectralSplit<T>,
}

impl<T: Real> Instance<T> {
    pub fn dump(&self) -> ScenarioDump {
        ScenarioDump {
            a: MatrixJson::from_matrix(self.a.matrix()),
            v: MatrixJson::from_matrix(self.v.matrix()),
            split: self.split.to_json(),
        }
    }
}

/// On-disk form of an instance: two matrices and a split sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDump {
    pub a: MatrixJson,
    pub v: MatrixJson,
    pub split: SplitJson,
}

/// Four-dimensional family with `A = diag(−b, −a, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsharpParams {
    pub a: f64,
    pub b: f64,
    pub v1: f64,
    pub v2: f64,
}

/// Closed-form `ϑ(U)` for the four-dimensional family.
pub fn tsharp_theta<T: Real>(a: T, b: T, v1: T, v2: T) -> T {
    let two = T::lit(2.0);
    let v = v1 + v2;
    let s = v1 - v2;
    let num = two * a * s + two * b * v;
    let den = b * b - a * a - v * v + s * s;
    (num / den).atan() / two
}

fn check_tsharp<T: Real>(a: T, b: T, v: T) -> Result<()> {
    if !(a >= T::zero() && b > a) {
        return Err(Error::ConditionViolated {
            condition: "0 <= a < b",
            detail: format!("a = {a}, b = {b}"),
        });
    }
    if !(v >= T::zero()) || v * v >= b * b - a * a {
        return Err(Error::ConditionViolated {
            condition: "tsharp",
            detail: format!("‖V‖² = {} is not below b² − a² = {}", v * v, b * b - a * a),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TsharpInstance<T: Real> {
    pub instance: Instance<T>,
    pub theta_closed_form: T,
}

pub fn gen_tsharp<T: Real>(p: &TsharpParams, tol: &Tolerances) -> Result<TsharpInstance<T>> {
    let (a, b, v1, v2) = (T::lit(p.a), T::lit(p.b), T::lit(p.v1), T::lit(p.v2));
    if !(v1 >= T::zero() && v2 >= T::zero()) {
        return Err(Error::ConditionViolated {
            condition: "v1, v2 >= 0",
            detail: format!("v1 = {v1}, v2 = {v2}"),
        });
    }
    check_tsharp(a, b, v1 + v2)?;
    let am = HermitianOperator::diagonal(&[-b, -a, a, b]);
    let z = T::zero();
    let vm = HermitianOperator::from_hermitian_part(&ComplexMatrix::from_fn(4, 4, |i, j| {
        let rows = [[z, v1, v2, z], [v1, z, z, v2], [v2, z, z, v1], [z, v2, v1, z]];
        creal(rows[i][j])
    }));
    let split = SpectralSplit::from_points(Disposition::Annular, &[-a, a], &[-b, b])?;
    let j = crate::spectral::involution_from_split(&am, &split, tol)?;
    Ok(TsharpInstance {
        instance: Instance { a: am, v: vm, j, split },
        theta_closed_form: tsharp_theta(a, b, v1, v2),
    })
}

/// `max ϑ` over `v1 − v2 ∈ [−v, v]` with `v1 + v2 = v`: a grid pass followed by
/// golden-section refinement around the best node.
pub fn tsharp_max_theta<T: Real>(a: T, b: T, v_norm: T, grid: usize) -> Result<T> {
    check_tsharp(a, b, v_norm)?;
    if v_norm == T::zero() {
        return Ok(T::zero());
    }
    let half = T::lit(0.5);
    let neg = |s: T| -tsharp_theta(a, b, (v_norm + s) * half, (v_norm - s) * half);
    let (_, value) = crate::bounds::grid_minimize(neg, -v_norm, v_norm, grid.max(3), T::lit(1e-12));
    Ok(-value)
}

/// Symmetric grid for the parity example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsharpGrid {
    /// Spectral cutoff: every node satisfies `|t| ≥ a`.
    pub a: f64,
    pub coupling: f64,
    /// Nodes per half-line.
    pub n: usize,
    pub t_max: f64,
}

impl KsharpGrid {
    /// `t_i = a + (t_max − a)·i/N`, `i = 1..N`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|i| self.a + (self.t_max - self.a) * i as f64 / self.n as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct KsharpInstance<T: Real> {
    pub instance: Instance<T>,
    pub jp: Involution<T>,
    /// `½ arctan ϰ`.
    pub theta_exact: T,
    /// `(1 ∓ iϰ)/√(1 + ϰ²)`.
    pub jjprime_spectrum: [nalgebra::Complex<T>; 2],
    /// Largest distance from a computed eigenvalue of `J′J` to the exact pair.
    pub spectrum_error: T,
}

/// Pairwise model on nodes `(t, −t)`: on each pair `A = [[0, t], [t, 0]]`,
/// `V = diag(ϰt, −ϰt)` and `J` swaps the two nodes.
pub fn gen_ksharp<T: Real>(g: &KsharpGrid, tol: &Tolerances) -> Result<KsharpInstance<T>> {
    if g.n == 0 || !(g.a >= 0.0) || !(g.t_max > g.a) || !g.t_max.is_finite() {
        return Err(Error::GridViolatesCutoff(format!(
            "need N ≥ 1 and 0 ≤ a < t_max, got N = {}, a = {}, t_max = {}",
            g.n, g.a, g.t_max
        )));
    }
    if !(g.coupling >= 0.0) || !g.coupling.is_finite() {
        return Err(Error::GridViolatesCutoff(format!("coupling must be finite and nonnegative, got {}", g.coupling)));
    }
    let nodes: Vec<T> = g.nodes().into_iter().map(T::lit).collect();
    let n = 2 * nodes.len();
    let kappa = T::lit(g.coupling);
    let mut am = ComplexMatrix::zeros(n, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut jm = ComplexMatrix::zeros(n, n);
    for (i, &t) in nodes.iter().enumerate() {
        let (p, q) = (2 * i, 2 * i + 1);
        am[(p, q)] = creal(t);
        am[(q, p)] = creal(t);
        vm[(p, p)] = creal(kappa * t);
        vm[(q, q)] = creal(-kappa * t);
        jm[(p, q)] = creal(T::one());
        jm[(q, p)] = creal(T::one());
    }
    let a_op = HermitianOperator::from_hermitian_part(&am);
    let v_op = HermitianOperator::from_hermitian_part(&vm);
    let j = Involution::new(jm, tol)?;
    let negatives: Vec<T> = nodes.iter().map(|&t| -t).collect();
    let split = SpectralSplit::from_points(Disposition::Subordinated, &negatives, &nodes)?;

    let l = a_op.add(&v_op);
    let jp = sign_involution(&l, T::zero(), tol)?;
    let s = (T::one() + kappa * kappa).sqrt();
    let exact = [cplx(T::one() / s, -kappa / s), cplx(T::one() / s, kappa / s)];
    let spectrum = normal_eigenvalues(&(jp.matrix() * j.matrix()));
    let spectrum_error = spectrum.iter().fold(T::zero(), |acc, &z| {
        acc.max((z - exact[0]).modulus().min((z - exact[1]).modulus()))
    });
    Ok(KsharpInstance {
        instance: Instance {
            a: a_op,
            v: v_op,
            j,
            split,
        },
        jp,
        theta_exact: kappa.atan() * T::lit(0.5),
        jjprime_spectrum: exact,
        spectrum_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n_minus: usize,
    pub n_plus: usize,
    pub disposition: Disposition,
    pub d: f64,
    /// `|Δ|`, annular only.
    pub gap_len: Option<f64>,
    /// Width of the band each part may spread over.
    pub spread: f64,
    pub v_norm: f64,
    pub seed: u64,
}

fn uniform<T: Real, R: Rng>(rng: &mut R, lo: f64, hi: f64) -> T {
    if hi > lo {
        T::lit(rng.random_range(lo..=hi))
    } else {
        T::lit(lo)
    }
}

/// Instance `index` of the run described by `spec`.
pub fn gen_random_indexed<T: Real>(spec: &RandomSpec, index: u64) -> Result<Instance<T>> {
    let RandomSpec {
        n_minus,
        n_plus,
        disposition,
        d,
        gap_len,
        spread,
        v_norm,
        seed,
    } = *spec;
    if n_minus == 0 || n_plus == 0 {
        return Err(Error::InfeasibleSpec("both parts need at least one eigenvalue".into()));
    }
    if !(d > 0.0) || !(spread >= 0.0) || !(v_norm >= 0.0) || !d.is_finite() || !v_norm.is_finite() {
        return Err(Error::InfeasibleSpec(format!(
            "need d > 0, spread ≥ 0, v_norm ≥ 0 (d = {d}, spread = {spread}, v_norm = {v_norm})"
        )));
    }
    let mut rng = stream(seed, index);
    let mut minus: Vec<T> = Vec::with_capacity(n_minus);
    let mut plus: Vec<T> = Vec::with_capacity(n_plus);
    match disposition {
        Disposition::Subordinated => {
            let h = d / 2.0;
            minus.push(T::lit(-h));
            plus.push(T::lit(h));
            for _ in 1..n_minus {
                minus.push(uniform(&mut rng, -h - spread, -h));
            }
            for _ in 1..n_plus {
                plus.push(uniform(&mut rng, h, h + spread));
            }
        }
        Disposition::Annular => {
            let g = gap_len.ok_or_else(|| Error::InfeasibleSpec("annular spec needs gap_len".into()))?;
            if !(g >= 2.0 * d) {
                return Err(Error::InfeasibleSpec(format!("gap_len = {g} must be at least 2d = {}", 2.0 * d)));
            }
            if n_plus < 2 {
                return Err(Error::InfeasibleSpec("annular spec needs n_plus ≥ 2".into()));
            }
            let b = g / 2.0;
            let a = b - d;
            plus.push(T::lit(-b));
            plus.push(T::lit(b));
            for _ in 2..n_plus {
                let x: T = uniform(&mut rng, b, b + spread);
                plus.push(if rng.random_bool(0.5) { x } else { -x });
            }
            minus.push(T::lit(a));
            for _ in 1..n_minus {
                minus.push(uniform(&mut rng, -a, a));
            }
        }
    }
    let n = n_minus + n_plus;
    let q = random_unitary::<T, _>(n, &mut rng);
    let diag: Vec<T> = minus.iter().chain(plus.iter()).copied().collect();
    let a_op = HermitianOperator::from_hermitian_part(&(&q * from_real_diagonal(&diag) * q.adjoint()));

    let b_block = ginibre::<T, _>(n_plus, n_minus, &mut rng);
    let mut inner = ComplexMatrix::zeros(n, n);
    let target = T::lit(v_norm);
    if target > T::zero() {
        let scale = target / spectral_norm(&b_block);
        for r in 0..n_plus {
            for c in 0..n_minus {
                let z = b_block[(r, c)] * creal(scale);
                inner[(n_minus + r, c)] = z;
                inner[(c, n_minus + r)] = z.conj();
            }
        }
    }
    let v_op = HermitianOperator::from_hermitian_part(&(&q * inner * q.adjoint()));

    let signs: Vec<T> = (0..n).map(|k| if k < n_minus { -T::one() } else { T::one() }).collect();
    let p_minus = crate::matrix::hermitian_part(
        &(&q * ((identity::<T>(n) - from_real_diagonal(&signs)) * creal(T::lit(0.5))) * q.adjoint()),
    );
    let j = Involution::from_minus_projection(p_minus);
    let split = SpectralSplit::from_points(disposition, &minus, &plus)?;
    Ok(Instance {
        a: a_op,
        v: v_op,
        j,
        split,
    })
}

pub fn gen_random<T: Real>(spec: &RandomSpec) -> Result<Instance<T>> {
    gen_random_indexed(spec, 0)
}

/// `G = e^{iφ}J` and `T = L − μ` with `φ = π/2 − arctan κ(μ)`.
#[derive(Debug, Clone)]
pub struct RelemmaInstance<T: Real> {
    pub g: ComplexMatrix<T>,
    pub t: HermitianOperator<T>,
    pub kappa: T,
    pub phi: T,
    pub mu: T,
}

const RELEMMA_ATTEMPTS: u64 = 8;

pub fn gen_relemma_instance<T: Real>(n: usize, seed: u64, tol: &Tolerances) -> Result<RelemmaInstance<T>> {
    if n < 2 {
        return Err(Error::ConstructionFailed("n must be at least 2".into()));
    }
    let mut last = 0.0;
    for attempt in 0..RELEMMA_ATTEMPTS {
        let mut rng = stream(seed, attempt);
        let n_minus = rng.random_range(1..n);
        let spec = RandomSpec {
            n_minus,
            n_plus: n - n_minus,
            disposition: Disposition::Subordinated,
            d: 1.0,
            gap_len: None,
            spread: rng.random_range(0.0..2.0),
            v_norm: rng.random_range(0.0..2.0),
            seed: rng.random(),
        };
        let inst = gen_random_indexed::<T>(&spec, 0)?;
        let (lo, hi) = inst.split.mu_window(T::zero());
        let mu = lo + (hi - lo) * T::lit(rng.random_range(0.2..0.8));
        let kappa = kappa_mu(&inst.a, &inst.v, &inst.j, mu, tol)?;
        let phi = T::frac_pi_2() - kappa.atan();
        let g = inst.j.matrix() * cis(phi);
        let t = inst.a.add(&inst.v).shifted(mu);
        let slack = T::lit(tol.accretive) * t.norm();
        let m1 = accretivity_margin(&(&g * t.matrix()));
        let m2 = accretivity_margin(&(g.adjoint() * t.matrix().adjoint()));
        if m1 >= -slack && m2 >= -slack {
            return Ok(RelemmaInstance { g, t, kappa, phi, mu });
        }
        last = m1.min(m2).as_f64();
    }
    Err(Error::ConstructionFailed(format!(
        "accretivity margins stayed negative after {RELEMMA_ATTEMPTS} attempts (last {last:.3e})"
    )))
}

/// `λ_min` of `Re(GW)` and `Re(WG)` for the unitary factor `W` of `T`.
pub fn relemma_transfer_margins<T: Real>(inst: &RelemmaInstance<T>, tol: &Tolerances) -> (T, T) {
    let w = crate::spectral::polar_decompose(inst.t.matrix(), tol).w;
    (accretivity_margin(&(&inst.g * &w)), accretivity_margin(&(&w * &inst.g)))
}
