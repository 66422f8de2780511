//! Numerical ranges: boundary sweeps, sector bounds, the 2×2 elliptical range
//! and two-vector compressions.

use nalgebra::{Complex, ComplexField};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{
    check_square, hermitian_part, identity, quadratic_form, skew_part, spectral_norm, ComplexMatrix,
    ComplexVector, HermitianOperator,
};
use crate::scalar::{cis, cplx, creal, principal_arg, Real};
use crate::spectral::{anticommutator_norm, anticommutes, eigh_unchecked, Involution};

/// Support-function samples of `𝒲(T)`.
///
/// `points[j] = ⟨x_j, T x_j⟩` where `x_j` is a top eigenvector of
/// `Re(e^{−iθ_j} T)`, and `support[j]` is the corresponding top eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct NumRangeBoundary<T: Real> {
    pub points: Vec<Complex<T>>,
    pub angles: Vec<T>,
    pub support: Vec<T>,
}

impl<T: Real> NumRangeBoundary<T> {
    /// Membership in the circumscribed polygon `⋂_j {Re(e^{−iθ_j} z) ≤ support_j + slack}`.
    ///
    /// The supporting lines touch `𝒲(T)` exactly, so this polygon contains
    /// the numerical range for any sample count.
    pub fn contains(&self, z: Complex<T>, slack: T) -> bool {
        self.excess(z) <= slack
    }

    /// `max_j Re(e^{−iθ_j} z) − support_j`; nonpositive inside.
    pub fn excess(&self, z: Complex<T>) -> T {
        self.angles
            .iter()
            .zip(&self.support)
            .fold(-T::infinity(), |acc, (&th, &h)| acc.max((cis(-th) * z).re - h))
    }

    /// `max |arg z|` over the boundary points.
    pub fn max_abs_arg(&self) -> T {
        self.points
            .iter()
            .fold(T::zero(), |acc, &z| acc.max(principal_arg(z).abs()))
    }

    /// Distance from `z` to the hull, from below via the support lines.
    pub fn distance_lower_bound(&self, z: Complex<T>) -> T {
        self.excess(z).max(T::zero())
    }

    /// `angle,re,im` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle,re,im\n");
        for (th, z) in self.angles.iter().zip(&self.points) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                th.as_f64(),
                z.re.as_f64(),
                z.im.as_f64()
            ));
        }
        out
    }
}

/// Parses the output of [`NumRangeBoundary::to_csv`] into `(angle, re, im)` rows.
pub fn parse_boundary_csv(text: &str) -> Result<Vec<[f64; 3]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("angle,re,im") => {}
        _ => return Err(Error::format("header", "expected `angle,re,im`")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 3 {
                return Err(Error::format(format!("row {}", i + 1), "expected 3 columns"));
            }
            let mut row = [0.0; 3];
            for (k, cell) in cells.iter().enumerate() {
                row[k] = cell
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::format(format!("row {} column {}", i + 1, k), "not a finite number"))?;
            }
            Ok(row)
        })
        .collect()
}

/// Boundary point `⟨x, Tx⟩` for the top eigenvector `x` of `Re(e^{−iθ}T)`,
/// together with the support value `λ_max(Re(e^{−iθ}T))`.
pub fn support_point<T: Real>(t: &ComplexMatrix<T>, theta: T) -> (Complex<T>, T) {
    let eig = eigh_unchecked(&(t * cis(-theta)));
    let x: ComplexVector<T> = eig.eigenvectors.column(eig.dim() - 1).into_owned();
    (quadratic_form(t, &x), *eig.eigenvalues.last().expect("non-empty"))
}

/// Support-function sweep over `m ≥ 8` equally spaced angles.
pub fn numrange_boundary<T: Real>(t: &ComplexMatrix<T>, m: usize) -> Result<NumRangeBoundary<T>> {
    check_square(t)?;
    if m < 8 {
        return Err(Error::format("m", "at least 8 boundary samples are required"));
    }
    let two_pi = T::two_pi();
    let mut points = Vec::with_capacity(m);
    let mut angles = Vec::with_capacity(m);
    let mut support = Vec::with_capacity(m);
    for j in 0..m {
        let theta = two_pi * T::lit(j as f64) / T::lit(m as f64);
        let (z, h) = support_point(t, theta);
        points.push(z);
        angles.push(theta);
        support.push(h);
    }
    Ok(NumRangeBoundary {
        points,
        angles,
        support,
    })
}

/// `k(S) = sup |Im z| / Re z` over `𝒲(S)`, with a unit vector attaining it
/// (or, when `k = ∞`, a direction along which the ratio blows up).
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBound<T: Real> {
    pub k: T,
    pub witness: ComplexVector<T>,
}

impl<T: Real> SectorBound<T> {
    pub fn is_infinite(&self) -> bool {
        !self.k.is_finite_value()
    }

    /// `|Im⟨w,Sw⟩| / Re⟨w,Sw⟩` at the witness.
    pub fn witness_ratio(&self, s: &ComplexMatrix<T>) -> T {
        let z = quadratic_form(s, &self.witness);
        z.im.abs() / z.re
    }
}

/// Generalized Rayleigh-quotient supremum of `|⟨x,Kx⟩| / ⟨x,Hx⟩` for `H > 0`,
/// returning the value and a maximizing unit vector.
fn definite_ratio<T: Real>(h: &ComplexMatrix<T>, k: &ComplexMatrix<T>) -> (T, ComplexVector<T>) {
    let eh = eigh_unchecked(h);
    let h_inv_sqrt = eh.apply(|l| T::one() / l.sqrt());
    let m = &h_inv_sqrt * k * &h_inv_sqrt;
    let em = eigh_unchecked(&m);
    let n = em.dim();
    let (lo, hi) = (em.eigenvalues[0], em.eigenvalues[n - 1]);
    let col = if hi.abs() >= lo.abs() { n - 1 } else { 0 };
    let mut w: ComplexVector<T> = &h_inv_sqrt * em.eigenvectors.column(col);
    let norm = w.norm();
    w.unscale_mut(norm);
    (hi.abs().max(lo.abs()), w)
}

pub fn sector_bound<T: Real>(s: &ComplexMatrix<T>, tol: &Tolerances) -> Result<SectorBound<T>> {
    let n = check_square(s)?;
    let h = hermitian_part(s);
    let k = skew_part(s);
    let eh = eigh_unchecked(&h);
    let lmin = eh.eigenvalues[0];
    let lmax = eh.eigenvalues[n - 1];
    let scale = spectral_norm(s);
    if lmin < -T::lit(tol.accretive) * scale {
        return Err(Error::NotAccretive {
            margin: lmin.as_f64(),
        });
    }
    let cutoff = T::lit(tol.pd) * lmax;
    if lmin > cutoff {
        let (value, witness) = definite_ratio(&h, &k);
        return Ok(SectorBound { k: value, witness });
    }

    let kernel: Vec<usize> = (0..n).filter(|&i| eh.eigenvalues[i] <= cutoff).collect();
    let range: Vec<usize> = (0..n).filter(|&i| eh.eigenvalues[i] > cutoff).collect();
    let q_kernel = eh.eigenvectors.select_columns(&kernel);
    let k_on_kernel = &k * &q_kernel;
    let leak = spectral_norm(&k_on_kernel);
    if leak > T::lit(tol.pd) * scale {
        // ⟨x,Hx⟩ vanishes on a direction that K moves: the ratio is unbounded
        let (_, sigma, v_t) = crate::matrix::svd(&k_on_kernel);
        let best = sigma
            .iter()
            .enumerate()
            .fold((0, T::zero()), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc })
            .0;
        let coeffs: ComplexVector<T> = v_t.row(best).adjoint();
        let witness = &q_kernel * coeffs;
        return Ok(SectorBound {
            k: T::infinity(),
            witness,
        });
    }
    if range.is_empty() {
        // S = 0 up to tolerance: 𝒲(S) = {0}
        let mut witness = ComplexVector::zeros(n);
        witness[0] = creal(T::one());
        return Ok(SectorBound { k: T::zero(), witness });
    }
    let q_range = eh.eigenvectors.select_columns(&range);
    let h_r = q_range.adjoint() * &h * &q_range;
    let k_r = q_range.adjoint() * &k * &q_range;
    let (value, w_r) = definite_ratio(&hermitian_part(&h_r), &hermitian_part(&k_r));
    Ok(SectorBound {
        k: value,
        witness: &q_range * w_r,
    })
}

/// Elliptical numerical range of `M = [[α, −γ̄], [γ, β]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse<T: Real> {
    /// Sector bound `|γ| / √(αβ)`.
    pub k: T,
    pub foci: [Complex<T>; 2],
    /// Full axis lengths `(major, minor)`.
    pub axes: [T; 2],
}

pub fn ellipse_matrix<T: Real>(alpha: T, beta: T, gamma: Complex<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_row_slice(2, 2, &[creal(alpha), -gamma.conj(), gamma, creal(beta)])
}

pub fn ellipse_2x2<T: Real>(alpha: T, beta: T, gamma: Complex<T>) -> Result<Ellipse<T>> {
    if !(alpha > T::zero() && beta > T::zero()) {
        return Err(Error::NonPositiveDiagonal {
            alpha: alpha.as_f64(),
            beta: beta.as_f64(),
        });
    }
    let half = T::lit(0.5);
    let g2 = gamma.norm_sqr();
    let mean = (alpha + beta) * half;
    let dev = (alpha - beta) * half;
    let disc = dev * dev - g2;
    let root = if disc >= T::zero() {
        creal(disc.sqrt())
    } else {
        cplx(T::zero(), (-disc).sqrt())
    };
    let foci = [creal(mean) - root, creal(mean) + root];
    let m = ellipse_matrix(alpha, beta, gamma);
    let trace = (m.adjoint() * &m).trace().re;
    let minor2 = (trace - foci[0].norm_sqr() - foci[1].norm_sqr()).max(T::zero());
    let major2 = minor2 + (foci[0] - foci[1]).norm_sqr();
    Ok(Ellipse {
        k: gamma.modulus() / (alpha * beta).sqrt(),
        foci,
        axes: [major2.sqrt(), minor2.sqrt()],
    })
}

/// Distance of `x` from `Ran P` and of `‖x‖` from 1.
fn subspace_defect<T: Real>(p: &ComplexMatrix<T>, x: &ComplexVector<T>) -> T {
    let off = (x - p * x).norm();
    off.max((x.norm() - T::one()).abs())
}

/// `EᴴJ(L² − μ)E` for `E = [e₋, e₊]`, written out entrywise.
pub fn pair_compression<T: Real>(
    a: &HermitianOperator<T>,
    v: &HermitianOperator<T>,
    j: &Involution<T>,
    mu: T,
    e_minus: &ComplexVector<T>,
    e_plus: &ComplexVector<T>,
    tol: &Tolerances,
) -> Result<ComplexMatrix<T>> {
    if !anticommutes(v.matrix(), j, tol)? {
        return Err(Error::NotOffDiagonal {
            defect: anticommutator_norm(v.matrix(), j)?.as_f64(),
        });
    }
    let bound = T::lit(tol.subspace);
    for (which, p, e) in [("e_minus", j.p_minus(), e_minus), ("e_plus", j.p_plus(), e_plus)] {
        if e.len() != j.dim() {
            return Err(Error::DimensionMismatch {
                expected: j.dim(),
                found: e.len(),
            });
        }
        let defect = subspace_defect(p, e);
        if defect > bound {
            return Err(Error::NotInSubspace {
                which,
                defect: defect.as_f64(),
            });
        }
    }
    let (am, vm) = (a.matrix() * e_minus, v.matrix() * e_minus);
    let (ap, vp) = (a.matrix() * e_plus, v.matrix() * e_plus);
    let t11 = mu - am.norm_squared() - vm.norm_squared();
    let t22 = ap.norm_squared() + vp.norm_squared() - mu;
    let t21 = ap.dotc(&vm) + vp.dotc(&am);
    Ok(ComplexMatrix::from_row_slice(
        2,
        2,
        &[creal(t11), -t21.conj(), t21, creal(t22)],
    ))
}

/// `J(L² − μ)` with `L = A + V`.
pub fn compressed_operator<T: Real>(
    a: &HermitianOperator<T>,
    v: &HermitianOperator<T>,
    j: &Involution<T>,
    mu: T,
) -> ComplexMatrix<T> {
    let l = a.matrix() + v.matrix();
    let n = l.nrows();
    j.matrix() * (&l * &l - identity::<T>(n) * creal(mu))
}
