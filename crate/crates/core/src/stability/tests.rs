use super::*;
use crate::constitutive::sokolowski;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn definite() -> MaterialParams<f64> {
    MaterialParams::new(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0)
}

/// Draws that land on both sides of every inequality.
fn draw(r: &mut ChaCha8Rng, n: usize) -> MaterialParams<f64> {
    let mut c: [f64; 5] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
    c[3] = 2.0 * c[3].abs();
    if n % 2 == 1 {
        for (v, s) in c.iter_mut().zip([0.2, 0.2, 0.5, 1.0, 0.3]) {
            *v *= s;
        }
        c[3] = c[3].abs() + 0.1;
    }
    MaterialParams::new(1.0, 1.0, c[0], c[1], c[2], c[3], c[4])
}

#[test]
fn first_gradient_examples() {
    assert!(first_gradient_positivity(1.0, 1.0).ok);
    assert!(!first_gradient_positivity(1.0, -0.1).ok);
    let c = first_gradient_positivity(-0.5, 1.0);
    assert!(c.ok);
    assert_eq!(c.bulk_margin, 0.5);
}

#[test]
fn gamma_examples() {
    let g = |a: [f64; 5]| GammaParams { gamma1: a[0], gamma2: a[1], gamma3: a[2], gamma4: a[3], gamma5: a[4] };
    assert!(gamma_positivity(&g([1.0, 1.0, 0.0, 1.0, 1.0])).ok);
    assert!(!gamma_positivity(&g([0.0, 0.0, 0.0, 4.0, 2.0 / 3.0])).ok);
    assert!(!gamma_positivity(&g([1.0, 1.0, 0.0, 1.0, -1.0])).ok);
    let guarded = gamma_positivity(&g([1.0, 6.0, 0.0, 1.0, 1.0]));
    assert!(!guarded.ok && guarded.gamma4.is_none());
    let eig = spectral_positivity(&sokolowski::<f64>(1.0, 0.0, 1.0).with_lambda(1.0));
    assert!(eig.min_eigenvalue.abs() <= eig.band);
}

#[test]
fn c_examples() {
    let m = MaterialParams::new(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0);
    assert_eq!(c_positivity(&m).unwrap().ok, gamma_positivity(&gammas(&m)).ok);
    let bad = MaterialParams { c11: -1.0, ..m };
    assert!(!c_positivity(&bad).unwrap().ok);
    assert!(c_positivity(&m.hemitropic(0.1)).is_err());
}

#[test]
fn spectral_degenerate_cases() {
    let zero = spectral_positivity(&MaterialParams::<f64>::classical(0.0, 0.0));
    assert_eq!(zero.min_eigenvalue, 0.0);
    assert_eq!(zero.full_min_eigenvalue, 0.0);
    let classical = spectral_positivity(&MaterialParams::<f64>::classical(0.0, 1.0));
    assert!(!classical.ok);
    assert_eq!(classical.min_eigenvalue, 0.0);
    let strain = quadratic_form_matrix(&MaterialParams::<f64>::classical(0.0, 1.0)).view((0, 0), (6, 6)).into_owned();
    assert!(SymmetricEigen::new(strain).eigenvalues.min() > 1.0);
}

#[test]
fn strain_block_eigenvalues_are_lame_moduli() {
    let m = MaterialParams::<f64>::classical(0.7, 1.3);
    let strain = quadratic_form_matrix(&m).view((0, 0), (6, 6)).into_owned();
    let mut ev: Vec<f64> = SymmetricEigen::new(strain).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    for v in &ev[..5] {
        assert!((v - 2.6).abs() < 1e-13);
    }
    assert!((ev[5] - (3.0 * 0.7 + 2.6)).abs() < 1e-13);
}

#[test]
fn closed_forms_agree_with_spectrum() {
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    let (mut pos, mut neg) = (0, 0);
    for n in 0..1000 {
        let m = draw(&mut r, n);
        let eig = spectral_positivity(&m);
        if eig.min_eigenvalue.abs() <= eig.band {
            continue;
        }
        let g = gamma_positivity(&gammas(&m)).ok;
        let c = c_positivity(&m).unwrap().ok;
        assert_eq!(g, eig.ok, "gamma vs spectral at draw {n}: {m:?}");
        assert_eq!(c, eig.ok, "c vs spectral at draw {n}: {m:?}");
        if eig.ok {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    assert!(pos > 100 && neg > 100, "sweep must cover both outcomes ({pos}, {neg})");
}

#[test]
fn gradient_eigenvalues_scale_linearly() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let m = draw(&mut r, 0);
    let ev = |m: &MaterialParams<f64>| {
        let g = quadratic_form_matrix(m).view((6, 6), (18, 18)).into_owned();
        let mut v: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let base = ev(&m);
    let scaled = ev(&m.scale_gradient(3.5));
    let top = base.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for (a, b) in base.iter().zip(&scaled) {
        assert!((3.5 * a - b).abs() < 1e-13 * top * 3.5);
    }
}

#[test]
fn strain_and_gradient_blocks_decouple_without_c8() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let m = draw(&mut r, 1);
    let q = quadratic_form_matrix(&m);
    assert_eq!(q.view((0, 6), (6, 18)).amax(), 0.0);
    let q = quadratic_form_matrix(&m.hemitropic(0.3));
    assert!(q.view((0, 6), (6, 18)).amax() > 0.1);
}

#[test]
fn couple_stress_reduction() {
    let etas = [-1.5, -0.99, -0.5, 0.0, 0.5, 0.99, 1.5];
    for &eta in &etas {
        for ell in [0.5, 1.0, 2.0] {
            let m = sokolowski(1.0, eta, ell).with_lambda(1.0);
            let restricted = couple_stress_min_eigenvalue(&m);
            let band = BOUNDARY_BAND * m.norm();
            let expected = ell * ell > 0.0 && eta > -1.0 && eta < 1.0;
            assert_eq!(restricted > band, expected, "eta = {eta}, ell = {ell}");
            let rep = report(&m);
            assert!(!rep.gamma_ok);
            let want = if expected { Status::Marginal } else { Status::Indefinite };
            assert_eq!(rep.status, want, "eta = {eta}");
        }
    }
}

#[test]
fn report_flags() {
    let rep = report(&definite());
    assert!(rep.first_gradient_ok && rep.gamma_ok && rep.c_ok && rep.spectral_ok);
    assert_eq!(rep.status, Status::Definite);
    let rep = report(&definite().with_lambda(-5.0));
    assert!(!rep.first_gradient_ok && rep.gamma_ok && rep.c_ok && rep.spectral_ok);
    assert_eq!(rep.status, Status::Indefinite);
    let rep = report(&MaterialParams::classical(1.0, 1.0));
    assert_eq!(rep.status, Status::Marginal);
    let rep = report(&definite().hemitropic(1e-3));
    assert!(!rep.closed_form_applicable && !rep.c_ok);
}
