//! Dense complex matrices, the Hermitian newtype, and the matrix JSON format.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Square complex matrix, row-major semantics through `(row, col)` indexing.
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;
pub type ComplexVector<T> = DVector<Complex<T>>;

pub fn identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n, n)
}

pub fn zeros<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::zeros(n, n)
}

pub fn from_real_diagonal<T: Real>(diag: &[T]) -> ComplexMatrix<T> {
    let n = diag.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { creal(diag[i]) } else { creal(T::zero()) })
}

pub fn from_real_rows<T: Real>(rows: &[&[f64]]) -> ComplexMatrix<T> {
    let n = rows.len();
    ComplexMatrix::from_fn(n, rows[0].len(), |i, j| creal(T::lit(rows[i][j])))
}

/// Validates the `ComplexMatrix` invariants: square, non-empty, finite.
pub fn check_square<T: Real>(m: &ComplexMatrix<T>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    for j in 0..cols {
        for i in 0..rows {
            let z = m[(i, j)];
            if !z.re.is_finite_value() || !z.im.is_finite_value() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(rows)
}

pub(crate) fn check_same_dim<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

pub fn frobenius<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.norm()
}

// nalgebra's own default; a bare machine epsilon can yield a wrong factorization.
fn svd_epsilon<T: Real>() -> T {
    T::machine_epsilon() * T::lit(5.0)
}

fn svd_iterations(m: &ComplexMatrix<impl Real>) -> usize {
    1000 + 100 * (m.nrows() + m.ncols())
}

/// SVD `(U, σ, Vᴴ)` with columns of `U` and rows of `Vᴴ` paired with `σ`.
///
/// nalgebra's bidiagonal QR is tried first. Its complex path occasionally
/// returns factors that do not reproduce `M`, so the result is checked and
/// one-sided Jacobi takes over when the check fails.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> (ComplexMatrix<T>, Vec<T>, ComplexMatrix<T>) {
    if !all_finite(m) {
        let n = m.ncols();
        return (ComplexMatrix::zeros(m.nrows(), n), vec![T::infinity(); n], identity(n));
    }
    if let Some(svd) = m.clone().try_svd_unordered(true, true, svd_epsilon::<T>(), svd_iterations(m)) {
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let sigma: Vec<T> = svd.singular_values.iter().copied().collect();
        let mut rebuilt = u.clone();
        for (k, &s) in sigma.iter().enumerate() {
            rebuilt.column_mut(k).scale_mut(s);
        }
        let err = (rebuilt * &v_t - m).norm();
        let dim = T::lit((m.nrows() + m.ncols()) as f64);
        if err <= T::lit(100.0) * dim * T::machine_epsilon() * m.norm() {
            return (u, sigma, v_t);
        }
    }
    jacobi_svd(m)
}

/// One-sided (Hestenes) Jacobi: orthogonalizes the columns of `M V` by plane
/// rotations. Returns `min(rows, cols)` singular triples; columns of `U`
/// belonging to a zero singular value are zero.
pub fn jacobi_svd<T: Real>(m: &ComplexMatrix<T>) -> (ComplexMatrix<T>, Vec<T>, ComplexMatrix<T>) {
    if m.ncols() > m.nrows() {
        // a wide matrix has more columns than can be mutually orthogonal
        let (u, sigma, v_t) = jacobi_svd(&m.adjoint());
        return (v_t.adjoint(), sigma, u.adjoint());
    }
    let cols = m.ncols();
    let mut w = m.clone();
    let mut v = identity::<T>(cols);
    let eps = T::machine_epsilon();
    let negligible = {
        let f = eps * m.norm();
        f * f
    };
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.re.hypot(gamma.im);
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                // rotate the phase out of γ, then apply a real rotation
                let phase = gamma.conj() / creal(g);
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * creal(c) - xq * creal(s);
                        mat[(i, q)] = xp * creal(s) + xq * creal(c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut u = ComplexMatrix::zeros(m.nrows(), cols);
    let mut sigma = Vec::with_capacity(cols);
    for k in 0..cols {
        let s = w.column(k).norm();
        if s > T::zero() {
            u.set_column(k, &(w.column(k) * creal(T::one() / s)));
        }
        sigma.push(s);
    }
    (u, sigma, v.adjoint())
}

pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    svd(m).1
}

fn all_finite<T: Real>(m: &ComplexMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite_value() && z.im.is_finite_value())
}

/// Largest singular value; infinite when an entry is not finite.
pub fn spectral_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    if !all_finite(m) {
        return T::infinity();
    }
    singular_values(m).into_iter().fold(T::zero(), |a, b| a.max(b))
}

/// `(S + Sᴴ)/2`.
pub fn hermitian_part<T: Real>(s: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (s + s.adjoint()) * creal(T::lit(0.5))
}

/// `(S − Sᴴ)/(2i)`, Hermitian.
pub fn skew_part<T: Real>(s: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (s - s.adjoint()) * Complex::new(T::zero(), T::lit(-0.5))
}

/// `⟨x, y⟩`, conjugate-linear in the first argument.
pub fn inner<T: Real>(x: &ComplexVector<T>, y: &ComplexVector<T>) -> Complex<T> {
    x.dotc(y)
}

/// `⟨x, T x⟩`.
pub fn quadratic_form<T: Real>(t: &ComplexMatrix<T>, x: &ComplexVector<T>) -> Complex<T> {
    x.dotc(&(t * x))
}

/// Self-adjoint operator on `ℂⁿ`.
///
/// The stored matrix is exactly Hermitian: construction checks the relative
/// asymmetry against `Tolerances::hermitian` and then symmetrizes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T: Real> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(mat: ComplexMatrix<T>, tol: &Tolerances) -> Result<Self> {
        check_square(&mat)?;
        let scale = frobenius(&mat);
        let asym = frobenius(&(&mat - mat.adjoint()));
        let bound = T::lit(tol.hermitian) * scale;
        if asym > bound {
            let rel = if scale > T::zero() { (asym / scale).as_f64() } else { f64::INFINITY };
            return Err(Error::NonHermitianInput {
                asymmetry: rel,
                tol: tol.hermitian,
            });
        }
        Ok(Self {
            mat: hermitian_part(&mat),
        })
    }

    /// Real diagonal operator; never fails.
    pub fn diagonal(diag: &[T]) -> Self {
        Self {
            mat: from_real_diagonal(diag),
        }
    }

    /// Symmetrizes unconditionally. For matrices Hermitian by construction.
    pub fn from_hermitian_part(mat: &ComplexMatrix<T>) -> Self {
        Self {
            mat: hermitian_part(mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn norm(&self) -> T {
        spectral_norm(&self.mat)
    }

    /// `self + other`; Hermitian without re-checking.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    /// `self − μ I`.
    pub fn shifted(&self, mu: T) -> Self {
        let n = self.dim();
        Self {
            mat: &self.mat - identity::<T>(n) * creal(mu),
        }
    }
}

/// On-disk matrix format: `{"n": int, "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &ComplexMatrix<T>) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re.as_f64()).collect()).collect();
        let im = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im.as_f64()).collect()).collect();
        Self { n, re, im }
    }

    /// Rejects shape mismatch and non-finite entries, naming the field.
    pub fn to_matrix<T: Real>(&self) -> Result<ComplexMatrix<T>> {
        let n = self.n;
        if n == 0 {
            return Err(Error::format("n", "dimension must be positive"));
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                return Err(Error::format(name, format!("expected {n} rows, found {}", rows.len())));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::format(
                        format!("{name}[{i}]"),
                        format!("expected {n} entries, found {}", row.len()),
                    ));
                }
                if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                    return Err(Error::format(format!("{name}[{i}][{j}]"), "entry is not finite"));
                }
            }
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            Complex::new(T::lit(self.re[i][j]), T::lit(self.im[i][j]))
        }))
    }

    pub fn parse<T: Real>(text: &str) -> Result<ComplexMatrix<T>> {
        let raw: MatrixJson =
            serde_json::from_str(text).map_err(|e| Error::format("matrix", e.to_string()))?;
        raw.to_matrix()
    }

    pub fn to_json_string<T: Real>(m: &ComplexMatrix<T>) -> String {
        serde_json::to_string(&Self::from_matrix(m)).expect("finite matrix serializes")
    }
}
