//! Worked examples for every public operation, checked through the public API.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};

use nalgebra::Complex;
use subspace_core::bounds::{
    analyze, bound_apriori_tan, bound_dk, bound_estin, delta_enclosure, kappa_inf, kappa_mu, kappa_piecewise,
    lower_bound_wrong_involution, varkappa_grid_min, varkappa_mu, BoundReport,
};
use subspace_core::matrix::{from_real_diagonal, from_real_rows, identity, spectral_norm};
use subspace_core::numrange::{
    compressed_operator, ellipse_2x2, ellipse_matrix, numrange_boundary, pair_compression, sector_bound,
};
use subspace_core::rotation::{acute_case, direct_rotation, projection_gap, spectral_angle};
use subspace_core::scenarios::{
    gen_ksharp, gen_random, gen_relemma_instance, gen_tsharp, relemma_transfer_margins, tsharp_max_theta,
    tsharp_theta, KsharpGrid, RandomSpec, TsharpParams,
};
use subspace_core::spectral::{
    accretivity_margin, anticommutes, commutes, eigh, involution_from_split, polar_decompose, sign_involution,
    spectral_projection,
};
use subspace_core::{Disposition, Error, Hermitian, Interval, Inv, Mat, Split, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn diag(x: &[f64]) -> Hermitian {
    Hermitian::diagonal(x)
}

fn herm(rows: &[&[f64]]) -> Hermitian {
    Hermitian::new(from_real_rows(rows), &tol()).unwrap()
}

fn close(a: &Mat, b: &Mat, eps: f64) -> bool {
    (a - b).norm() <= eps
}

fn plane_rotation(t: f64) -> Mat {
    from_real_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]])
}

/// `J = diag(1, −1)` and its copy rotated by `t` in the plane.
fn rotated_pair(t: f64) -> (Inv, Inv) {
    let j = Inv::new(from_real_diagonal(&[1.0, -1.0]), &tol()).unwrap();
    let r = plane_rotation(t);
    let jp = Inv::new(&r * j.matrix() * r.transpose(), &tol()).unwrap();
    (j, jp)
}

fn subordinated(minus: &[f64], plus: &[f64]) -> Split {
    Split::from_points(Disposition::Subordinated, minus, plus).unwrap()
}

fn tsharp(a: f64, v1: f64, v2: f64) -> subspace_core::scenarios::TsharpInstance<f64> {
    gen_tsharp(&TsharpParams { a, b: 1.0, v1, v2 }, &tol()).unwrap()
}

// eigen-decomposition

#[test]
fn eigh_sorts_and_reconstructs() {
    let e = eigh(&diag(&[3.0, 1.0, 2.0]));
    assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    let e = eigh(&Hermitian::diagonal(&[1.0; 4]));
    assert!(e.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    let q = &e.eigenvectors;
    assert!(close(&(q.adjoint() * q), &identity(4), 1e-12));

    let m = Mat::from_fn(16, 16, |i, j| Complex::new(((i * 7 + j * 3) % 11) as f64 - 5.0, (i as f64 - j as f64) * 0.1));
    let h = Hermitian::from_hermitian_part(&m);
    let e = eigh(&h);
    assert!((e.reconstruct() - h.matrix()).norm() <= 1e-12 * h.matrix().norm());
}

#[test]
fn spectral_projection_examples() {
    let a = diag(&[-1.0, 1.0]);
    let p = spectral_projection(&a, &Interval::below(0.0), &tol()).unwrap();
    assert!(close(&p, &from_real_diagonal(&[1.0, 0.0]), 1e-14));
    let p = spectral_projection(&a, &Interval::above(0.0), &tol()).unwrap();
    assert!(close(&p, &from_real_diagonal(&[0.0, 1.0]), 1e-14));

    let h = herm(&[&[2.0, 1.0, 0.0], &[1.0, -1.0, 0.5], &[0.0, 0.5, 0.3]]);
    let r = eigh(&h).spectral_radius();
    let p = spectral_projection(&h, &Interval::closed(-r, r), &tol()).unwrap();
    assert!(close(&p, &identity(3), 1e-12));
}

#[test]
fn involution_from_split_examples() {
    let j = involution_from_split(&diag(&[-1.0, 1.0]), &subordinated(&[-1.0], &[1.0]), &tol()).unwrap();
    assert!(close(j.matrix(), &from_real_diagonal(&[-1.0, 1.0]), 1e-14));

    let j = involution_from_split(&diag(&[-2.0, -1.0, 1.0, 2.0]), &subordinated(&[-2.0, -1.0], &[1.0, 2.0]), &tol())
        .unwrap();
    assert!(close(j.matrix(), &from_real_diagonal(&[-1.0, -1.0, 1.0, 1.0]), 1e-14));

    let (a, b) = (0.4, 1.0);
    let split = Split::from_points(Disposition::Annular, &[-a, a], &[-b, b]).unwrap();
    let j = involution_from_split(&diag(&[-b, -a, a, b]), &split, &tol()).unwrap();
    assert!(close(j.matrix(), &from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]), 1e-14));
}

#[test]
fn sign_involution_examples() {
    let a = diag(&[-1.0, 2.0]);
    let j = sign_involution(&a, 0.0, &tol()).unwrap();
    assert!(close(j.matrix(), &from_real_diagonal(&[-1.0, 1.0]), 1e-14));
    assert!(matches!(sign_involution(&a, 2.0, &tol()), Err(Error::KernelNotTrivial { .. })));

    // J′|L| = L for L = [[−1, 1], [1, 1]]
    let l = herm(&[&[-1.0, 1.0], &[1.0, 1.0]]);
    let jp = sign_involution(&l, 0.0, &tol()).unwrap();
    let abs_l = eigh(&l).apply(f64::abs);
    assert!(close(&(jp.matrix() * abs_l), l.matrix(), 1e-12));
}

#[test]
fn polar_examples() {
    let p = polar_decompose(&identity::<f64>(3), &tol());
    assert!(close(&p.w, &identity(3), 1e-14));
    assert!(close(p.abs_t.matrix(), &identity(3), 1e-14));

    let p = polar_decompose(&Mat::zeros(3, 3), &tol());
    assert!(close(&p.w, &Mat::zeros(3, 3), 0.0));
    assert!(close(p.abs_t.matrix(), &Mat::zeros(3, 3), 0.0));
    assert_eq!(p.kernel_dim, 3);

    let t = from_real_rows(&[&[0.0, -2.0], &[2.0, 0.0]]);
    let p = polar_decompose(&t, &tol());
    assert!(close(p.abs_t.matrix(), &(identity::<f64>(2) * Complex::new(2.0, 0.0)), 1e-12));
    assert!(close(&p.w, &from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]), 1e-12));
}

#[test]
fn commutation_examples() {
    let j = Inv::new(from_real_diagonal(&[1.0, -1.0]), &tol()).unwrap();
    assert!(anticommutes(&from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]), &j, &tol()).unwrap());
    let d = from_real_diagonal(&[5.0, 7.0]);
    assert!(commutes(&d, &j, &tol()).unwrap());
    assert!(!anticommutes(&d, &j, &tol()).unwrap());

    let t = tsharp(0.0, 0.25, 0.25);
    assert!(close(t.instance.j.matrix(), &from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]), 1e-14));
    assert!(anticommutes(t.instance.v.matrix(), &t.instance.j, &tol()).unwrap());
}

#[test]
fn accretivity_examples() {
    assert!((accretivity_margin(&identity::<f64>(2)) - 1.0).abs() < 1e-15);
    assert!((accretivity_margin(&from_real_rows::<f64>(&[&[1.0, -1.0], &[1.0, 1.0]])) - 1.0).abs() < 1e-15);
    assert!((accretivity_margin(&from_real_diagonal::<f64>(&[-1.0, 1.0])) + 1.0).abs() < 1e-15);
}

// rotations

#[test]
fn acute_case_examples() {
    let (j, _) = rotated_pair(0.0);
    let r = acute_case(&j, &j, &tol()).unwrap();
    assert!(r.acute && (r.smin_i_plus_jj - 2.0).abs() < 1e-12);
    let r = acute_case(&j, &j.negated(), &tol()).unwrap();
    assert!(!r.acute && r.smin_i_plus_jj < 1e-12);
    let (j, jp) = rotated_pair(FRAC_PI_8);
    let r = acute_case(&j, &jp, &tol()).unwrap();
    assert!(r.acute && (r.smin_i_plus_jj - 2.0 * FRAC_PI_8.cos()).abs() < 1e-12);
}

#[test]
fn direct_rotation_examples() {
    let (j, jp) = rotated_pair(FRAC_PI_8);
    let same = direct_rotation(&j, &j, &tol()).unwrap();
    assert!(close(&same.u, &identity(2), 1e-12) && same.theta.abs() < 1e-12);

    let rot = direct_rotation(&j, &jp, &tol()).unwrap();
    assert!(close(&rot.u, &plane_rotation(FRAC_PI_8), 1e-12));
    assert!((rot.theta - FRAC_PI_8).abs() < 1e-12);

    let k = gen_ksharp::<f64>(&KsharpGrid { a: 1.0, coupling: 1.0, n: 4, t_max: 2.0 }, &tol()).unwrap();
    let rot = direct_rotation(&k.instance.j, &k.jp, &tol()).unwrap();
    assert!((rot.theta - FRAC_PI_8).abs() < 1e-12);

    assert!(matches!(direct_rotation(&j, &j.negated(), &tol()), Err(Error::NotAcute { .. })));
}

#[test]
fn spectral_angle_examples() {
    assert_eq!(spectral_angle(&identity::<f64>(3), &tol()).unwrap(), 0.0);
    assert!((spectral_angle(&-identity::<f64>(3), &tol()).unwrap() - PI).abs() < 1e-12);
    let w = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex::from_polar(1.0, FRAC_PI_3),
        Complex::from_polar(1.0, -FRAC_PI_4),
    ]));
    assert!((spectral_angle(&w, &tol()).unwrap() - FRAC_PI_3).abs() < 1e-12);
    let not_unitary = identity::<f64>(2) * Complex::new(2.0, 0.0);
    assert!(matches!(spectral_angle(&not_unitary, &tol()), Err(Error::NotUnitary { .. })));
}

#[test]
fn projection_gap_examples() {
    let p = from_real_diagonal::<f64>(&[1.0, 1.0, 0.0]);
    assert!(projection_gap(&p, &p, &tol()).unwrap().abs() < 1e-15);
    let q = identity::<f64>(3) - &p;
    assert!((projection_gap(&p, &q, &tol()).unwrap() - 1.0).abs() < 1e-12);
    let (j, jp) = rotated_pair(FRAC_PI_8);
    assert!((projection_gap(j.p_minus(), jp.p_minus(), &tol()).unwrap() - FRAC_PI_8.sin()).abs() < 1e-12);
}

// numerical ranges

#[test]
fn numrange_examples() {
    let b = numrange_boundary(&from_real_diagonal::<f64>(&[0.0, 1.0]), 90).unwrap();
    assert!(b.points.iter().all(|z| z.im.abs() < 1e-12 && z.re > -1e-12 && z.re < 1.0 + 1e-12));

    let b = numrange_boundary(&from_real_rows::<f64>(&[&[0.0, 1.0], &[0.0, 0.0]]), 180).unwrap();
    assert!(b.points.iter().all(|z| (z.norm() - 0.5).abs() < 1e-9));

    // diag(1, i): the segment from 1 to i
    let t = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)]));
    let b = numrange_boundary(&t, 180).unwrap();
    assert!(b.points.iter().all(|z| (z.re + z.im - 1.0).abs() < 1e-9 && z.re > -1e-9 && z.im > -1e-9));
    assert!(b.contains(Complex::new(0.5, 0.5), 1e-9));
    assert!(!b.contains(Complex::new(0.2, 0.2), 1e-9));
}

#[test]
fn sector_bound_examples() {
    assert_eq!(sector_bound(&from_real_diagonal::<f64>(&[1.0, 3.0]), &tol()).unwrap().k, 0.0);
    let s = sector_bound(&from_real_rows::<f64>(&[&[1.0, -1.0], &[1.0, 1.0]]), &tol()).unwrap();
    assert!((s.k - 1.0).abs() < 1e-9);

    let a = diag(&[-1.0, 1.0]);
    let l = herm(&[&[-1.0, 1.0], &[1.0, 1.0]]);
    let j = Inv::new(from_real_diagonal(&[-1.0, 1.0]), &tol()).unwrap();
    let s = sector_bound(&(j.matrix() * l.matrix()), &tol()).unwrap();
    let k0 = kappa_mu(&a, &herm(&[&[0.0, 1.0], &[1.0, 0.0]]), &j, 0.0, &tol()).unwrap();
    assert!((s.k - 1.0).abs() < 1e-9 && (k0 - 1.0).abs() < 1e-12);
}

#[test]
fn ellipse_examples() {
    let e = ellipse_2x2(1.0, 2.0, Complex::new(0.0, 0.0)).unwrap();
    assert_eq!(e.k, 0.0);
    let mut foci = [e.foci[0].re, e.foci[1].re];
    foci.sort_by(f64::total_cmp);
    assert!((foci[0] - 1.0).abs() < 1e-12 && (foci[1] - 2.0).abs() < 1e-12);

    let e = ellipse_2x2(1.0f64, 1.0, Complex::new(1.0, 0.0)).unwrap();
    assert!((e.k - 1.0).abs() < 1e-12);
    let mut ims = [e.foci[0].im, e.foci[1].im];
    ims.sort_by(f64::total_cmp);
    assert!(e.foci.iter().all(|f| (f.re - 1.0).abs() < 1e-12));
    assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);

    let gamma = Complex::new(0.0f64, 2.0);
    let e = ellipse_2x2(1.0, 4.0, gamma).unwrap();
    assert!((e.k - 1.0).abs() < 1e-12);
    let s = sector_bound(&ellipse_matrix(1.0, 4.0, gamma), &tol()).unwrap();
    assert!((s.k - 1.0).abs() < 1e-8);

    assert!(matches!(ellipse_2x2(0.0, 1.0, gamma), Err(Error::NonPositiveDiagonal { .. })));
}

#[test]
fn pair_compression_examples() {
    let t = tsharp(0.3, 0.2, 0.1);
    let inst = &t.instance;
    let basis = |k: usize| nalgebra::DVector::from_fn(4, |i, _| Complex::new(if i == k { 1.0 } else { 0.0 }, 0.0));
    // J = diag(1, −1, −1, 1): e₋ from coordinates 1, 2 and e₊ from 0, 3
    let (em, ep) = (basis(1), basis(0));
    let mu = 0.5;

    let zero = Hermitian::diagonal(&[0.0; 4]);
    let m0 = pair_compression(&inst.a, &zero, &inst.j, mu, &em, &ep, &tol()).unwrap();
    let ae_m = (inst.a.matrix() * &em).norm_squared();
    let ae_p = (inst.a.matrix() * &ep).norm_squared();
    assert!(close(&m0, &Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex::new(mu - ae_m, 0.0), Complex::new(ae_p - mu, 0.0)])), 1e-14));

    let m = pair_compression(&inst.a, &inst.v, &inst.j, mu, &em, &ep, &tol()).unwrap();
    let full = compressed_operator(&inst.a, &inst.v, &inst.j, mu);
    let e = Mat::from_columns(&[em.clone(), ep.clone()]);
    assert!(close(&m, &(e.adjoint() * &full * &e), 1e-12));

    let hull = numrange_boundary(&full, 360).unwrap();
    let inner = numrange_boundary(&m, 90).unwrap();
    assert!(inner.points.iter().all(|&z| hull.contains(z, 1e-8)));
}

// bounds

#[test]
fn kappa_mu_examples() {
    let a = diag(&[-1.0, 1.0]);
    let j = Inv::new(from_real_diagonal(&[-1.0, 1.0]), &tol()).unwrap();
    let v1 = herm(&[&[0.0, 1.0], &[1.0, 0.0]]);
    assert!((kappa_mu(&a, &v1, &j, 0.0, &tol()).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(kappa_mu(&a, &diag(&[0.0, 0.0]), &j, 0.0, &tol()).unwrap(), 0.0);
    for (v, mu) in [(0.3, -0.5), (1.7, 0.2), (0.9, 0.8)] {
        let vm = herm(&[&[0.0, v], &[v, 0.0]]);
        let k = kappa_mu(&a, &vm, &j, mu, &tol()).unwrap();
        assert!((k - v / (1.0 - mu * mu).sqrt()).abs() < 1e-12);
        let l = a.add(&vm).shifted(mu);
        let s = sector_bound(&(j.matrix() * l.matrix()), &tol()).unwrap();
        assert!((s.k - k).abs() < 1e-8 * k.max(1.0));
    }
}

#[test]
fn kappa_inf_examples() {
    let a = diag(&[-1.0, 1.0]);
    let split = subordinated(&[-1.0], &[1.0]);
    let (k, mu) = kappa_inf(&a, &herm(&[&[0.0, 1.0], &[1.0, 0.0]]), &split, &tol()).unwrap();
    assert!((k - 1.0).abs() < 1e-10 && mu.abs() < 1e-4);
    assert_eq!(kappa_inf(&a, &diag(&[0.0, 0.0]), &split, &tol()).unwrap().0, 0.0);

    let spec = RandomSpec {
        n_minus: 3,
        n_plus: 4,
        disposition: Disposition::Subordinated,
        d: 1.0,
        gap_len: None,
        spread: 2.0,
        v_norm: 0.8,
        seed: 5,
    };
    let inst = gen_random::<f64>(&spec).unwrap();
    let (k, _) = kappa_inf(&inst.a, &inst.v, &inst.split, &tol()).unwrap();
    let (lo, hi) = inst.split.mu_window(0.0);
    let mid = kappa_mu(&inst.a, &inst.v, &inst.j, 0.5 * (lo + hi), &tol()).unwrap();
    assert!(k <= mid + 1e-12);
}

#[test]
fn scalar_bound_examples() {
    assert_eq!(bound_estin(0.0).unwrap(), 0.0);
    assert!((bound_estin(f64::INFINITY).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((bound_estin(1.0f64).unwrap() - 0.38268).abs() < 1e-5);

    assert_eq!(bound_dk(0.0, 2.0).unwrap(), 0.0);
    assert!((bound_dk(1.0, 2.0).unwrap() - FRAC_PI_8.sin()).abs() < 1e-15);
    assert!(bound_dk(1e6, 1.0).unwrap() < FRAC_1_SQRT_2);

    assert_eq!(bound_apriori_tan(0.0, 1.0).unwrap(), 0.0);
    assert!((bound_apriori_tan(0.6f64, 1.0).unwrap() - 0.51450).abs() < 1e-5);
    assert!(matches!(bound_apriori_tan(1.0, 1.0), Err(Error::ConditionViolated { .. })));

    assert_eq!(kappa_piecewise(0.0, 1.0, 4.0).unwrap(), 0.0);
    let at_threshold = kappa_piecewise(0.5f64.sqrt(), 1.0, 4.0).unwrap();
    assert!((at_threshold - 2f64.sqrt()).abs() < 1e-12);
    let below = kappa_piecewise(0.5f64.sqrt() - 1e-9, 1.0, 4.0).unwrap();
    let above = kappa_piecewise(0.5f64.sqrt() + 1e-9, 1.0, 4.0).unwrap();
    assert!((below - above).abs() < 1e-7);
    assert!(matches!(kappa_piecewise(3f64.sqrt(), 1.0, 4.0), Err(Error::ConditionViolated { .. })));

    assert!((lower_bound_wrong_involution(0.0) - FRAC_PI_2).abs() < 1e-15);
    assert!((lower_bound_wrong_involution(f64::INFINITY) - FRAC_PI_4).abs() < 1e-15);
    assert!((lower_bound_wrong_involution(1.0) - 3.0 * FRAC_PI_8).abs() < 1e-15);
}

#[test]
fn varkappa_examples() {
    // a = 0: only the second branch applies
    let (b, v) = (1.0f64, 0.4f64);
    for mu in [0.2f64, 0.5, 0.9] {
        let expected = b * v / ((mu - v * v) * (b * b - mu)).sqrt();
        assert!((varkappa_mu(0.0, b, v, mu).unwrap() - expected).abs() < 1e-12);
        assert_eq!(varkappa_mu(0.3, b, 0.0, mu).unwrap(), 0.0);
    }
    for (a, v) in [(0.0f64, 0.5f64), (0.3, 0.5), (0.6, 0.7), (0.2, 0.1)] {
        let (_, min) = varkappa_grid_min(a, 1.0, v, 20_000).unwrap();
        let exact = kappa_piecewise(v, 1.0 - a, 2.0).unwrap();
        assert!((min - exact).abs() < 1e-8, "a={a} v={v}: {min} vs {exact}");
    }
}

#[test]
fn delta_enclosure_examples() {
    let split = Split::new(Disposition::Annular, vec![[-1.0, 1.0]], vec![[-3.0, -2.0], [2.0, 3.0]]).unwrap();
    let zero = delta_enclosure(0.0, &split).unwrap();
    assert_eq!((zero.delta_minus, zero.delta_plus), (0.0, 0.0));
    let e = delta_enclosure(1.0, &split).unwrap();
    let expected = (0.5 * (2.0f64 / 3.0).atan()).tan();
    assert!((e.delta_minus - expected).abs() < 1e-12 && (e.delta_plus - expected).abs() < 1e-12);
    assert!((expected - 0.30278).abs() < 1e-5);

    let spec = RandomSpec {
        n_minus: 3,
        n_plus: 4,
        disposition: Disposition::Annular,
        d: 1.0,
        gap_len: Some(3.5),
        spread: 1.0,
        v_norm: 0.9,
        seed: 11,
    };
    let inst = gen_random::<f64>(&spec).unwrap();
    let e = delta_enclosure(0.9, &inst.split).unwrap();
    let eig = eigh(&inst.a.add(&inst.v));
    let inside: Vec<f64> = eig.eigenvalues.iter().copied().filter(|&x| x > e.gap[0] && x < e.gap[1]).collect();
    assert_eq!(inside.len(), 3);
    assert!(inside.iter().all(|&x| x >= e.minus_interval[0] - 1e-9 && x <= e.minus_interval[1] + 1e-9));
}

#[test]
fn analyze_examples() {
    let a = diag(&[-1.0, 1.0]);
    let split = subordinated(&[-1.0], &[1.0]);
    let r = analyze(&a, &diag(&[0.0, 0.0]), &split, &tol()).unwrap();
    assert_eq!(r.actual_gap, Some(0.0));
    assert_eq!(r.sharpness_ratio, Some(0.0));
    for b in [r.bound_estin, r.bound_dk, r.bound_apriori].into_iter().flatten() {
        assert!(b >= 0.0);
    }

    let t = tsharp(0.0, 0.25, 0.25);
    let r = analyze(&t.instance.a, &t.instance.v, &t.instance.split, &tol()).unwrap();
    assert!((r.theta_u.unwrap() - 0.5f64.atan()).abs() < 1e-12);
    assert!((r.actual_gap.unwrap() - 0.44721).abs() < 1e-5);
    assert!((r.bound_apriori.unwrap() - 0.44721).abs() < 1e-5);
    assert!((r.sharpness_ratio.unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(BoundReport::parse(&r.to_json()).unwrap(), r);

    let a2 = diag(&[-1.0, 1.0]);
    let v2 = herm(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let r = analyze(&a2, &v2, &split, &tol()).unwrap();
    assert_eq!(r.d, 2.0);
    assert!(r.actual_gap.unwrap() <= r.bound_dk.unwrap() + 1e-12);
    assert!((r.bound_dk.unwrap() - FRAC_PI_8.sin()).abs() < 1e-12);
}

#[test]
fn analyze_flags_large_annular_perturbation() {
    let t = tsharp(0.0, 0.25, 0.25);
    let big = Hermitian::from_hermitian_part(&(t.instance.v.matrix() * Complex::new(4.5, 0.0)));
    let r = analyze(&t.instance.a, &big, &t.instance.split, &tol()).unwrap();
    assert!(r.norm_v >= r.d);
    assert_eq!(r.conditions.get("apriori_tan"), Some(&false));
    assert!(r.bound_apriori.is_none());
    assert!(!r.conditions_met());
}

// scenarios

#[test]
fn tsharp_examples() {
    let t = tsharp(0.3, 0.0, 0.0);
    assert_eq!(t.theta_closed_form, 0.0);
    assert_eq!(spectral_norm(t.instance.v.matrix()), 0.0);
    assert!((tsharp_theta(0.0, 1.0, 0.25, 0.25) - 0.5f64.atan()).abs() < 1e-12);
    assert!((tsharp_theta(0.5, 1.0, 0.3, 0.0) - 0.5 * 1.2f64.atan()).abs() < 1e-12);
    assert!(matches!(
        gen_tsharp::<f64>(&TsharpParams { a: 0.5, b: 1.0, v1: 0.5, v2: 0.5 }, &tol()),
        Err(Error::ConditionViolated { .. })
    ));
}

#[test]
fn tsharp_max_theta_examples() {
    assert_eq!(tsharp_max_theta(0.0, 1.0, 0.0, 100).unwrap(), 0.0);
    assert!((tsharp_max_theta(0.0, 1.0, 0.5, 200).unwrap() - 0.5f64.atan()).abs() < 1e-9);
    let exact = 0.5 * kappa_piecewise(0.5f64, 0.5, 2.0).unwrap().atan();
    assert!((tsharp_max_theta(0.5f64, 1.0, 0.5, 200).unwrap() - exact).abs() < 1e-6);
}

#[test]
fn ksharp_examples() {
    let grid = |coupling| KsharpGrid { a: 0.5, coupling, n: 6, t_max: 2.0 };
    let k = gen_ksharp::<f64>(&grid(0.0), &tol()).unwrap();
    assert!(close(k.jp.matrix(), k.instance.j.matrix(), 1e-12));
    assert_eq!(k.theta_exact, 0.0);

    let k = gen_ksharp::<f64>(&grid(1.0), &tol()).unwrap();
    assert!((k.theta_exact - FRAC_PI_8).abs() < 1e-15);
    let s = FRAC_1_SQRT_2;
    let mut expected = [Complex::new(s, -s), Complex::new(s, s)];
    let mut got = k.jjprime_spectrum;
    expected.sort_by(|x, y| x.im.total_cmp(&y.im));
    got.sort_by(|x, y| x.im.total_cmp(&y.im));
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).norm() < 1e-12);
    }
    assert!(k.spectrum_error < 1e-12);

    let k = gen_ksharp::<f64>(&grid(2.0), &tol()).unwrap();
    let rot = direct_rotation(&k.instance.j, &k.jp, &tol()).unwrap();
    assert!((rot.theta - 0.55357).abs() < 1e-5);
}

#[test]
fn random_instance_examples() {
    let spec = RandomSpec {
        n_minus: 2,
        n_plus: 3,
        disposition: Disposition::Annular,
        d: 0.7,
        gap_len: Some(2.0),
        spread: 1.5,
        v_norm: 0.4,
        seed: 99,
    };
    let x = gen_random::<f64>(&spec).unwrap();
    let y = gen_random::<f64>(&spec).unwrap();
    assert_eq!(x.a.matrix(), y.a.matrix());
    assert_eq!(x.v.matrix(), y.v.matrix());
    assert!(anticommutes(x.v.matrix(), &x.j, &tol()).unwrap());
    assert!((x.split.d() - 0.7).abs() < 1e-12);
    assert!((spectral_norm(x.v.matrix()) - 0.4).abs() < 1e-12);

    let zero = gen_random::<f64>(&RandomSpec { v_norm: 0.0, ..spec }).unwrap();
    assert_eq!(spectral_norm(zero.v.matrix()), 0.0);
}

#[test]
fn relemma_examples() {
    for seed in 0..10 {
        let inst = gen_relemma_instance::<f64>(5, seed, &tol()).unwrap();
        assert!(accretivity_margin(&(&inst.g * inst.t.matrix())) >= -1e-10);
        assert!(accretivity_margin(&(inst.g.adjoint() * inst.t.matrix().adjoint())) >= -1e-10);
        let (gw, wg) = relemma_transfer_margins(&inst, &tol());
        assert!(gw >= -1e-9 && wg >= -1e-9);
    }
    let x = gen_relemma_instance::<f64>(2, 1, &tol()).unwrap();
    let y = gen_relemma_instance::<f64>(2, 1, &tol()).unwrap();
    assert_eq!(x.g, y.g);
    assert_eq!(x.t.matrix(), y.t.matrix());
}
