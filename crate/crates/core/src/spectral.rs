//! Dense Hermitian eigenmachinery: spectral projections, involutions, polar
//! decomposition and accretivity diagnostics.

use nalgebra::ComplexField;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{
    check_same_dim, hermitian_part, identity, spectral_norm, ComplexMatrix, HermitianOperator,
};
use crate::scalar::{creal, Real};
use crate::split::{Side, SpectralSplit};

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors.
///
/// Each eigenvector column is normalized so that its largest-magnitude
/// component (first one on ties) is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ qᵢqᵢᴴ` over the selected columns.
    pub fn projector<I>(&self, columns: I) -> ComplexMatrix<T>
    where
        I: IntoIterator<Item = usize>,
    {
        let n = self.dim();
        let mut p = ComplexMatrix::zeros(n, n);
        for k in columns {
            let q = self.eigenvectors.column(k);
            p += q * q.adjoint();
        }
        p
    }

    /// `Q f(Λ) Qᴴ`.
    pub fn apply<F: Fn(T) -> T>(&self, f: F) -> ComplexMatrix<T> {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let s = creal(f(lambda));
            for z in scaled.column_mut(k).iter_mut() {
                *z *= s;
            }
        }
        scaled * q.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply(|x| x)
    }

    /// Largest `|λ|`.
    pub fn spectral_radius(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &b| a.max(b.abs()))
    }
}

/// Eigendecomposition of a Hermitian operator.
pub fn eigh<T: Real>(h: &HermitianOperator<T>) -> EigenSystem<T> {
    eigh_unchecked(h.matrix())
}

/// Validates Hermitian symmetry first; fails with `NonHermitianInput`.
pub fn eigh_checked<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerances) -> Result<EigenSystem<T>> {
    let h = HermitianOperator::new(m.clone(), tol)?;
    Ok(eigh(&h))
}

/// Eigendecomposition of the Hermitian part of `m`.
pub(crate) fn eigh_unchecked<T: Real>(m: &ComplexMatrix<T>) -> EigenSystem<T> {
    let n = m.nrows();
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut best = 0;
        let mut best_abs = T::zero();
        for (i, z) in col.iter().enumerate() {
            let a = z.modulus();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        let phase = if best_abs > T::zero() {
            col[best].conj() / creal(best_abs)
        } else {
            creal(T::one())
        };
        let mut out = eigenvectors.column_mut(dst);
        for i in 0..n {
            out[i] = col[i] * phase;
        }
        // the pivot entry is exactly real after the phase rotation
        out[best] = creal(out[best].modulus());
    }
    EigenSystem {
        eigenvalues,
        eigenvectors,
    }
}

/// Smallest eigenvalue of the Hermitian part.
pub(crate) fn min_hermitian_eigenvalue<T: Real>(m: &ComplexMatrix<T>) -> T {
    hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .fold(T::infinity(), |a, &b| a.min(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint<T> {
    Unbounded,
    Open(T),
    Closed(T),
}

/// Real interval with independently open, closed or infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: Endpoint<T>,
    pub hi: Endpoint<T>,
}

impl<T: Real> Interval<T> {
    pub fn open(lo: T, hi: T) -> Self {
        Self {
            lo: Endpoint::Open(lo),
            hi: Endpoint::Open(hi),
        }
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Self {
            lo: Endpoint::Closed(lo),
            hi: Endpoint::Closed(hi),
        }
    }

    /// `(−∞, x)`.
    pub fn below(x: T) -> Self {
        Self {
            lo: Endpoint::Unbounded,
            hi: Endpoint::Open(x),
        }
    }

    /// `(x, ∞)`.
    pub fn above(x: T) -> Self {
        Self {
            lo: Endpoint::Open(x),
            hi: Endpoint::Unbounded,
        }
    }

    pub fn whole_line() -> Self {
        Self {
            lo: Endpoint::Unbounded,
            hi: Endpoint::Unbounded,
        }
    }

    /// Membership with closed ends widened by `slack`; errors when `x` is
    /// within `slack` of an open end.
    fn classify(&self, x: T, slack: T) -> Result<bool> {
        for e in [self.lo, self.hi] {
            if let Endpoint::Open(v) = e {
                if (x - v).abs() <= slack {
                    return Err(Error::EigenvalueOnBoundary {
                        eigenvalue: x.as_f64(),
                        endpoint: v.as_f64(),
                        tol: slack.as_f64(),
                    });
                }
            }
        }
        let above_lo = match self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Open(v) => x > v,
            Endpoint::Closed(v) => x >= v - slack,
        };
        let below_hi = match self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Open(v) => x < v,
            Endpoint::Closed(v) => x <= v + slack,
        };
        Ok(above_lo && below_hi)
    }
}

/// Orthogonal projection onto the eigenvectors of `h` with eigenvalues in `interval`.
pub fn spectral_projection<T: Real>(
    h: &HermitianOperator<T>,
    interval: &Interval<T>,
    tol: &Tolerances,
) -> Result<ComplexMatrix<T>> {
    spectral_projection_of(&eigh(h), interval, tol)
}

pub fn spectral_projection_of<T: Real>(
    eig: &EigenSystem<T>,
    interval: &Interval<T>,
    tol: &Tolerances,
) -> Result<ComplexMatrix<T>> {
    let slack = T::lit(tol.boundary) * eig.spectral_radius();
    let mut cols = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if interval.classify(lambda, slack)? {
            cols.push(k);
        }
    }
    Ok(eig.projector(cols))
}

/// Self-adjoint unitary `J` with its spectral projections `P± = (I ± J)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Involution<T: Real> {
    j: ComplexMatrix<T>,
    p_plus: ComplexMatrix<T>,
    p_minus: ComplexMatrix<T>,
}

impl<T: Real> Involution<T> {
    /// Accepts `J` when `‖J − Jᴴ‖` and `‖J² − I‖` are within `tol.involution`.
    pub fn new(j: ComplexMatrix<T>, tol: &Tolerances) -> Result<Self> {
        let n = crate::matrix::check_square(&j)?;
        let asymmetry = spectral_norm(&(&j - j.adjoint()));
        let square_defect = spectral_norm(&(&j * &j - identity::<T>(n)));
        let bound = T::lit(tol.involution);
        if asymmetry > bound || square_defect > bound {
            return Err(Error::NotInvolution {
                asymmetry: asymmetry.as_f64(),
                square_defect: square_defect.as_f64(),
            });
        }
        Ok(Self::from_matrix_unchecked(j))
    }

    /// `J = I − 2P₋` for an orthogonal projection `P₋`.
    pub fn from_minus_projection(p_minus: ComplexMatrix<T>) -> Self {
        let n = p_minus.nrows();
        let j = identity::<T>(n) - &p_minus * creal(T::lit(2.0));
        Self::from_matrix_unchecked(j)
    }

    pub(crate) fn from_matrix_unchecked(j: ComplexMatrix<T>) -> Self {
        let n = j.nrows();
        let half = creal(T::lit(0.5));
        let id = identity::<T>(n);
        let p_plus = (&id + &j) * half;
        let p_minus = (&id - &j) * half;
        Self { j, p_plus, p_minus }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix_unchecked(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.j
    }

    pub fn p_plus(&self) -> &ComplexMatrix<T> {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &ComplexMatrix<T> {
        &self.p_minus
    }

    /// `−J`, swapping the two spectral subspaces.
    pub fn negated(&self) -> Self {
        Self {
            j: -&self.j,
            p_plus: self.p_minus.clone(),
            p_minus: self.p_plus.clone(),
        }
    }

    /// `‖J² − I‖` and `‖J − Jᴴ‖`.
    pub fn defects(&self) -> (T, T) {
        let n = self.dim();
        (
            spectral_norm(&(&self.j * &self.j - identity::<T>(n))),
            spectral_norm(&(&self.j - self.j.adjoint())),
        )
    }
}

/// `J = 𝖤_A(σ₊) − 𝖤_A(σ₋)` for a split classifying every eigenvalue of `A`.
pub fn involution_from_split<T: Real>(
    a: &HermitianOperator<T>,
    split: &SpectralSplit<T>,
    tol: &Tolerances,
) -> Result<Involution<T>> {
    involution_from_split_of(&eigh(a), split, tol)
}

pub fn involution_from_split_of<T: Real>(
    eig: &EigenSystem<T>,
    split: &SpectralSplit<T>,
    tol: &Tolerances,
) -> Result<Involution<T>> {
    let slack = split.class_slack(tol);
    let mut minus = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        match split.classify(lambda, slack) {
            Some(Side::Minus) => minus.push(k),
            Some(Side::Plus) => {}
            None => {
                return Err(Error::UnclassifiedEigenvalue {
                    eigenvalue: lambda.as_f64(),
                })
            }
        }
    }
    Ok(Involution::from_minus_projection(eig.projector(minus)))
}

/// `J′ = 𝖤_T((μ,∞)) − 𝖤_T((−∞,μ))`, the unitary factor of `T − μ`.
pub fn sign_involution<T: Real>(
    t: &HermitianOperator<T>,
    mu: T,
    tol: &Tolerances,
) -> Result<Involution<T>> {
    sign_involution_of(&eigh(t), mu, tol)
}

pub fn sign_involution_of<T: Real>(
    eig: &EigenSystem<T>,
    mu: T,
    tol: &Tolerances,
) -> Result<Involution<T>> {
    let distance = eig
        .eigenvalues
        .iter()
        .fold(T::infinity(), |a, &b| a.min((b - mu).abs()));
    let bound = T::lit(tol.kernel) * eig.spectral_radius().max(mu.abs());
    if distance <= bound {
        return Err(Error::KernelNotTrivial {
            mu: mu.as_f64(),
            distance: distance.as_f64(),
            tol: bound.as_f64(),
        });
    }
    let minus = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l < mu)
        .map(|(k, _)| k);
    Ok(Involution::from_minus_projection(eig.projector(minus)))
}

/// `T = W|T|` with `W` vanishing on the numerical kernel of `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts<T: Real> {
    pub w: ComplexMatrix<T>,
    pub abs_t: HermitianOperator<T>,
    pub kernel_dim: usize,
}

/// Polar decomposition from a singular value decomposition.
///
/// Singular values at or below `tol.rank · σ_max` are treated as zero; the
/// corresponding singular pairs are dropped from `W`.
pub fn polar_decompose<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> PolarParts<T> {
    let (rows, cols) = t.shape();
    let (u, sigma, v_t) = crate::matrix::svd(t);
    let smax = sigma.iter().fold(T::zero(), |a, &b| a.max(b));
    let cutoff = T::lit(tol.rank) * smax;

    let mut w = ComplexMatrix::zeros(rows, cols);
    let mut abs_t = ComplexMatrix::zeros(cols, cols);
    let mut rank = 0;
    for (k, &s) in sigma.iter().enumerate() {
        let v = v_t.row(k).adjoint();
        if s > cutoff {
            rank += 1;
            w += u.column(k) * v.adjoint();
        }
        abs_t += &v * v.adjoint() * creal(s);
    }
    PolarParts {
        w,
        abs_t: HermitianOperator::from_hermitian_part(&abs_t),
        kernel_dim: cols - rank,
    }
}

fn comm_bound<T: Real>(v: &ComplexMatrix<T>, tol: &Tolerances) -> T {
    T::lit(tol.comm) * (spectral_norm(v) + T::one())
}

/// `‖JV + VJ‖`.
pub fn anticommutator_norm<T: Real>(v: &ComplexMatrix<T>, j: &Involution<T>) -> Result<T> {
    check_same_dim(j.matrix(), v)?;
    Ok(spectral_norm(&(j.matrix() * v + v * j.matrix())))
}

/// `‖JV − VJ‖`.
pub fn commutator_norm<T: Real>(v: &ComplexMatrix<T>, j: &Involution<T>) -> Result<T> {
    check_same_dim(j.matrix(), v)?;
    Ok(spectral_norm(&(j.matrix() * v - v * j.matrix())))
}

/// `V` is off-diagonal with respect to the decomposition defined by `J`.
pub fn anticommutes<T: Real>(
    v: &ComplexMatrix<T>,
    j: &Involution<T>,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(anticommutator_norm(v, j)? <= comm_bound(v, tol))
}

/// `V` is diagonal with respect to the decomposition defined by `J`.
pub fn commutes<T: Real>(v: &ComplexMatrix<T>, j: &Involution<T>, tol: &Tolerances) -> Result<bool> {
    Ok(commutator_norm(v, j)? <= comm_bound(v, tol))
}

/// `λ_min((S + Sᴴ)/2)`: nonnegative iff `S` is accretive.
pub fn accretivity_margin<T: Real>(s: &ComplexMatrix<T>) -> T {
    min_hermitian_eigenvalue(s)
}
