//! Acute-case diagnostics, the direct rotation between two involutions, and
//! spectral and operator angles.

use nalgebra::{Complex, ComplexField};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::{check_same_dim, check_square, hermitian_part, identity, spectral_norm, ComplexMatrix, HermitianOperator};
use crate::scalar::{creal, principal_arg, Real};
use crate::spectral::{eigh, polar_decompose, Involution};

const SLOPES: [f64; 3] = [0.618_033_988_749_894_9, -std::f64::consts::SQRT_2, std::f64::consts::PI];

/// Eigenvalues of a normal matrix.
///
/// `Re W + c·Im W` is Hermitian and shares the eigenvectors of `W`, so its
/// eigendecomposition followed by Rayleigh quotients recovers `spec(W)`.
/// Clusters that a slope `c` cannot separate are compressed and split again
/// with the next slope.
pub fn normal_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Vec<Complex<T>> {
    split_normal(m, 0)
}

fn split_normal<T: Real>(m: &ComplexMatrix<T>, depth: usize) -> Vec<Complex<T>> {
    let n = m.nrows();
    if n <= 1 {
        return m.iter().copied().collect();
    }
    let im = (m - m.adjoint()) * Complex::new(T::zero(), T::lit(-0.5));
    let h = hermitian_part(m) + im * creal(T::lit(SLOPES[depth]));
    let eig = eigh(&HermitianOperator::from_hermitian_part(&h));
    let scale = eig.spectral_radius().max(T::one());
    let delta = T::lit(1e-6) * scale;
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for k in 1..=n {
        if k < n && eig.eigenvalues[k] - eig.eigenvalues[k - 1] < delta {
            continue;
        }
        let x = eig.eigenvectors.columns(start, k - start).into_owned();
        if k - start == 1 || depth + 1 == SLOPES.len() {
            for c in x.column_iter() {
                out.push(c.dotc(&(m * c)));
            }
        } else {
            out.extend(split_normal(&(x.adjoint() * m * &x), depth + 1));
        }
        start = k;
    }
    out
}

/// `‖WᴴW − I‖`.
pub fn unitarity_defect<T: Real>(w: &ComplexMatrix<T>) -> T {
    spectral_norm(&(w.adjoint() * w - identity::<T>(w.nrows())))
}

/// The three equivalent acute-case criteria, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcuteReport {
    /// `σ_min(I + J′J)`; the deciding quantity.
    #[serde(rename = "smin_IplusJJ")]
    pub smin_i_plus_jj: f64,
    /// `max |λ − 1|` over `spec(J′J)`, which is `‖J′ − J‖`.
    pub max_diff_action: f64,
    /// `1 + min Re λ` over `spec(J′J)`: the distance from `−1` to the
    /// numerical range of the normal operator `J′J`, measured along the real axis.
    pub minus_one_margin: f64,
    pub acute: bool,
}

impl AcuteReport {
    /// Largest violation of `‖J′−J‖² = 4 − smin²` and `margin = smin²/2`.
    pub fn consistency_defect(&self) -> f64 {
        let s2 = self.smin_i_plus_jj * self.smin_i_plus_jj;
        let e1 = (self.max_diff_action * self.max_diff_action - (4.0 - s2)).abs();
        let e2 = (self.minus_one_margin - s2 / 2.0).abs();
        e1.max(e2)
    }
}

pub fn acute_case<T: Real>(j: &Involution<T>, jp: &Involution<T>, tol: &Tolerances) -> Result<AcuteReport> {
    check_same_dim(j.matrix(), jp.matrix())?;
    let n = j.dim();
    let prod = jp.matrix() * j.matrix();
    let t = identity::<T>(n) + &prod;
    let smin = crate::matrix::singular_values(&t)
        .into_iter()
        .fold(T::infinity(), |a, b| a.min(b));
    let one = creal(T::one());
    let spec = normal_eigenvalues(&prod);
    let max_diff = spec.iter().fold(T::zero(), |a, &z| a.max((z - one).modulus()));
    let min_re = spec.iter().fold(T::infinity(), |a, &z| a.min(z.re));
    Ok(AcuteReport {
        smin_i_plus_jj: smin.as_f64(),
        max_diff_action: max_diff.as_f64(),
        minus_one_margin: (T::one() + min_re).as_f64(),
        acute: smin.as_f64() > tol.acute,
    })
}

/// Unitary `U` with `J′U = UJ`, `U² = J′J` and `Re U ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRotation<T: Real> {
    pub u: ComplexMatrix<T>,
    /// `ϑ(U) ∈ [0, π/2)`.
    pub theta: T,
    /// `Θ = arccos(Re U)`.
    pub operator_angle: HermitianOperator<T>,
}

impl<T: Real> DirectRotation<T> {
    /// `Re U = (U + Uᴴ)/2`.
    pub fn real_part(&self) -> ComplexMatrix<T> {
        hermitian_part(&self.u)
    }

    /// Residuals of the three defining relations and of unitarity:
    /// `(‖UᴴU − I‖, ‖J′U − UJ‖, ‖U² − J′J‖, max(0, −λ_min(Re U)))`.
    pub fn defects(&self, j: &Involution<T>, jp: &Involution<T>) -> [T; 4] {
        let u = &self.u;
        let lmin = eigh(&HermitianOperator::from_hermitian_part(u))
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(T::zero());
        [
            unitarity_defect(u),
            spectral_norm(&(jp.matrix() * u - u * j.matrix())),
            spectral_norm(&(u * u - jp.matrix() * j.matrix())),
            (-lmin).max(T::zero()),
        ]
    }
}

/// Unitary factor of `I + J′J`; requires the acute case.
pub fn direct_rotation<T: Real>(
    j: &Involution<T>,
    jp: &Involution<T>,
    tol: &Tolerances,
) -> Result<DirectRotation<T>> {
    let report = acute_case(j, jp, tol)?;
    if !report.acute {
        return Err(Error::NotAcute {
            smin: report.smin_i_plus_jj,
        });
    }
    let n = j.dim();
    let t = identity::<T>(n) + jp.matrix() * j.matrix();
    let polar = polar_decompose(&t, tol);
    if polar.kernel_dim > 0 {
        return Err(Error::NotAcute {
            smin: report.smin_i_plus_jj,
        });
    }
    let u = polar.w;
    let theta = spectral_angle(&u, tol)?;
    let re_u = eigh(&HermitianOperator::from_hermitian_part(&u));
    let angle = re_u.apply(|c| c.max(-T::one()).min(T::one()).acos());
    Ok(DirectRotation {
        u,
        theta,
        operator_angle: HermitianOperator::from_hermitian_part(&angle),
    })
}

/// `ϑ(W) = max |arg z|` over `spec(W)`, `arg ∈ (−π, π]`.
pub fn spectral_angle<T: Real>(w: &ComplexMatrix<T>, tol: &Tolerances) -> Result<T> {
    check_square(w)?;
    let defect = unitarity_defect(w);
    if defect > T::lit(tol.unitary) {
        return Err(Error::NotUnitary {
            defect: defect.as_f64(),
        });
    }
    Ok(normal_eigenvalues(w).into_iter().fold(T::zero(), |acc, z| {
        let r = z.modulus();
        let z = if r > T::zero() { z / creal(r) } else { creal(T::one()) };
        acc.max(principal_arg(z).abs())
    }))
}

/// Larger of `‖P² − P‖` and `‖P − Pᴴ‖`.
pub fn projection_defect<T: Real>(p: &ComplexMatrix<T>) -> T {
    spectral_norm(&(p * p - p)).max(spectral_norm(&(p - p.adjoint())))
}

/// `‖P′ − P‖` for orthogonal projections.
pub fn projection_gap<T: Real>(p: &ComplexMatrix<T>, pp: &ComplexMatrix<T>, tol: &Tolerances) -> Result<T> {
    check_square(p)?;
    check_same_dim(p, pp)?;
    for m in [p, pp] {
        let defect = projection_defect(m);
        if defect > T::lit(tol.projection) {
            return Err(Error::NotAProjection {
                defect: defect.as_f64(),
            });
        }
    }
    Ok(spectral_norm(&(pp - p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{from_real_diagonal, from_real_rows};
    use crate::scalar::cis;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rotated(theta: f64) -> Involution<f64> {
        let (c, s) = (theta.cos(), theta.sin());
        let r = from_real_rows::<f64>(&[&[c, -s], &[s, c]]);
        let j = from_real_diagonal(&[1.0, -1.0]);
        Involution::new(&r * j * r.transpose(), &tol()).unwrap()
    }

    fn diag_j() -> Involution<f64> {
        Involution::new(from_real_diagonal(&[1.0, -1.0]), &tol()).unwrap()
    }

    #[test]
    fn acute_case_examples() {
        let j = diag_j();
        let r = acute_case(&j, &j, &tol()).unwrap();
        assert!(r.acute);
        assert!((r.smin_i_plus_jj - 2.0).abs() < 1e-14);

        let r = acute_case(&j, &j.negated(), &tol()).unwrap();
        assert!(!r.acute);
        assert!(r.smin_i_plus_jj.abs() < 1e-14);

        let r = acute_case(&j, &rotated(FRAC_PI_8), &tol()).unwrap();
        assert!(r.acute);
        assert!((r.smin_i_plus_jj - 2.0 * FRAC_PI_8.cos()).abs() < 1e-14);
        assert!(r.consistency_defect() < 1e-13);
    }

    #[test]
    fn direct_rotation_examples() {
        let j = diag_j();
        let d = direct_rotation(&j, &j, &tol()).unwrap();
        assert!((&d.u - identity::<f64>(2)).norm() < 1e-14);
        assert!(d.theta.abs() < 1e-14);

        let jp = rotated(FRAC_PI_8);
        let d = direct_rotation(&j, &jp, &tol()).unwrap();
        let (c, s) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
        assert!((&d.u - from_real_rows::<f64>(&[&[c, -s], &[s, c]])).norm() < 1e-14);
        assert!((d.theta - FRAC_PI_8).abs() < 1e-14);
        assert!(d.defects(&j, &jp).iter().all(|&e| e < 1e-14));
        // Θ = (π/8) I for a plane rotation
        assert!((d.operator_angle.matrix() - identity::<f64>(2) * creal(FRAC_PI_8)).norm() < 1e-7);
    }

    #[test]
    fn direct_rotation_rejects_non_acute() {
        let j = diag_j();
        assert!(matches!(
            direct_rotation(&j, &j.negated(), &tol()),
            Err(Error::NotAcute { .. })
        ));
    }

    #[test]
    fn spectral_angle_examples() {
        assert_eq!(spectral_angle(&identity::<f64>(3), &tol()).unwrap(), 0.0);
        let minus = -identity::<f64>(2);
        assert!((spectral_angle(&minus, &tol()).unwrap() - PI).abs() < 1e-15);
        let mut w = identity::<f64>(2);
        w[(0, 0)] = cis(FRAC_PI_3);
        w[(1, 1)] = cis(-FRAC_PI_4);
        assert!((spectral_angle(&w, &tol()).unwrap() - FRAC_PI_3).abs() < 1e-14);
        let bad = from_real_diagonal::<f64>(&[1.0, 2.0]);
        assert!(matches!(spectral_angle(&bad, &tol()), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn projection_gap_examples() {
        let p = from_real_diagonal::<f64>(&[1.0, 0.0]);
        assert_eq!(projection_gap(&p, &p, &tol()).unwrap(), 0.0);
        let q = identity::<f64>(2) - &p;
        assert!((projection_gap(&p, &q, &tol()).unwrap() - 1.0).abs() < 1e-15);
        let j = diag_j();
        let jp = rotated(FRAC_PI_8);
        let gap = projection_gap(j.p_minus(), jp.p_minus(), &tol()).unwrap();
        assert!((gap - FRAC_PI_8.sin()).abs() < 1e-14);
        let not_p = from_real_diagonal::<f64>(&[2.0, 0.0]);
        assert!(matches!(projection_gap(&p, &not_p, &tol()), Err(Error::NotAProjection { .. })));
    }
}
