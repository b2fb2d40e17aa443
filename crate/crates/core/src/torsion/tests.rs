use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::constitutive::apply_hooke;

fn example_material() -> MaterialParams<f64> {
    MaterialParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -0.5)
}

fn random_material(rng: &mut ChaCha8Rng) -> MaterialParams<f64> {
    let mut r = || rng.random_range(-1.0..1.0);
    MaterialParams::new(r(), 1.0 + r().abs(), r(), r(), r(), r(), r())
}

#[test]
fn fields_on_the_unwarped_section() {
    let m = MaterialParams::<f64>::new(0.3, 1.2, 0.1, 0.2, 0.3, 0.7, -0.4);
    let theta: f64 = 0.8;
    let f = torsion_fields(&QuadraticWarp { coeffs: [0.0; 6] }, theta, &m, &[0.0, 1.0]).unwrap();
    assert!((f.epsilon.get(0, 2) + theta / 2.0).abs() < 1e-15);
    assert_eq!(f.epsilon.get(1, 2), 0.0);
    for x in [[0.0, 1.0], [0.3, -0.2], [-1.0, 2.0]] {
        let f = torsion_fields(&QuadraticWarp { coeffs: [0.0; 6] }, theta, &m, &x).unwrap();
        assert!((f.p.get(0, 2, 1) - theta * (m.c15 - m.c11)).abs() < 1e-14);
        assert!((f.p.get(1, 2, 0) - theta * (m.c11 - m.c15)).abs() < 1e-14);
    }
}

/// Nonzero components listed for the torsion field; everything else vanishes.
fn allowed_p(i: usize, j: usize, k: usize) -> bool {
    let (a, b) = (i.min(j), i.max(j));
    matches!((a, b, k), (0, 2, _) | (1, 2, _) | (0, 0, 2) | (0, 1, 2) | (1, 1, 2) | (2, 2, 2))
}

#[test]
fn fields_match_full_contraction_and_zero_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let m = random_material(&mut rng);
        let coeffs = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let w = QuadraticWarp { coeffs };
        let theta = rng.random_range(0.1..2.0);
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let f = torsion_fields(&w, theta, &m, &x).unwrap();
        let [_, w1, w2, w11, w12, w22] = coeffs;
        let (g1, g2) = (w1 + w11 * x[0] + w12 * x[1], w2 + w12 * x[0] + w22 * x[1]);
        let mut e = SymMat3::zero();
        e.set(0, 2, theta * (g1 - x[1]) / 2.0);
        e.set(1, 2, theta * (g2 + x[0]) / 2.0);
        let mut g = SymTri3::zero();
        g.set(0, 2, 0, theta * w11 / 2.0);
        g.set(0, 2, 1, theta * (w12 - 1.0) / 2.0);
        g.set(1, 2, 0, theta * (w12 + 1.0) / 2.0);
        g.set(1, 2, 1, theta * w22 / 2.0);
        let direct = apply_hooke(&m, &e, &g);
        assert!(f.s.sub(&direct.s).max_abs() < 1e-13);
        assert!(f.p.sub(&direct.p).max_abs() < 1e-13);
        for i in 0..3 {
            for j in 0..3 {
                if !matches!((i.min(j), i.max(j)), (0, 2) | (1, 2)) {
                    assert!(f.s.get(i, j).abs() < 1e-13);
                }
                for k in 0..3 {
                    if !allowed_p(i, j, k) {
                        assert!(f.p.get(i, j, k).abs() < 1e-13, "P{}{}{}", i + 1, j + 1, k + 1);
                    }
                }
            }
        }
        // shear stress carries no factor ½
        assert!((f.s.get(0, 2) - m.mu * theta * (g1 - x[1])).abs() < 1e-13);
    }
}

#[test]
fn hyperstress_components() {
    // c₃ pairs strain-gradient traces with E_ll,k, which vanish in torsion
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = random_material(&mut rng);
        let coeffs: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let theta = 1.3;
        let f = torsion_fields(&QuadraticWarp { coeffs }, theta, &m, &[0.2, 0.1]).unwrap();
        let [_, _, _, w11, w12, w22] = coeffs;
        let lap = w11 + w22;
        let expect = [
            ((0, 0, 2), theta * (2.0 * m.c15 * w11 + m.c2 * lap)),
            ((0, 1, 2), theta * 2.0 * m.c15 * w12),
            ((0, 2, 0), theta * ((m.c11 + m.c15) * w11 + m.c5 * lap)),
            ((0, 2, 1), theta * (m.c11 * (w12 - 1.0) + m.c15 * (w12 + 1.0))),
            ((1, 1, 2), theta * (2.0 * m.c15 * w22 + m.c2 * lap)),
            ((1, 2, 0), theta * (m.c15 * (w12 - 1.0) + m.c11 * (w12 + 1.0))),
            ((1, 2, 1), theta * ((m.c11 + m.c15) * w22 + m.c5 * lap)),
            ((2, 2, 2), theta * (m.c2 + 2.0 * m.c5) * lap),
        ];
        for ((i, j, k), v) in expect {
            assert!((f.p.get(i, j, k) - v).abs() < 1e-13, "P{}{}{}", i + 1, j + 1, k + 1);
        }
    }
}

#[test]
fn annulus_closed_form() {
    let sol = annulus_solution(&example_material(), 1.0, 0.5, 1.0).unwrap();
    assert!((sol.k_t - 2.71875 * PI).abs() < 1e-12);
    assert!((sol.k_t - 8.54124).abs() < 5e-5);
    let (ip, grad) = sol.annulus_split().unwrap();
    assert!((ip - 0.46875 * PI).abs() < 1e-13 && (grad - 2.25 * PI).abs() < 1e-13);

    let same = MaterialParams::<f64>::new(0.0, 2.0, 0.1, 0.1, 0.1, 0.4, 0.4);
    let sol = annulus_solution(&same, 1.0, 0.2, 0.7).unwrap();
    let (ip, _) = annulus_moments(0.2f64, 0.7);
    assert!((sol.k_t - 2.0 * ip).abs() < 1e-14);

    for (a, b) in [(0.5, 0.5), (0.6, 0.5), (-0.1, 1.0), (0.0, f64::NAN)] {
        assert!(matches!(annulus_solution(&example_material(), 1.0, a, b), Err(Error::Geometry(_))));
    }
}

#[test]
fn annulus_energy_quadrature_reproduces_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases = vec![(example_material(), 0.5, 1.0), (MaterialParams::classical(0.3, 1.0), 0.0, 2.0)];
    for _ in 0..10 {
        let ri = rng.random_range(0.0..1.0);
        cases.push((random_material(&mut rng), ri, ri + rng.random_range(0.1..1.0)));
    }
    for (m, ri, re) in cases {
        let sol = annulus_solution(&m, 0.7, ri, re).unwrap();
        let kt = stiffness_from_energy(&sol, &AnnulusQuadrature::new(ri, re)).unwrap();
        assert!((kt - sol.k_t).abs() < 1e-10 * sol.k_t.abs().max(1.0), "{kt} vs {}", sol.k_t);
        let doubled = sol.with_theta(1.4);
        let psi = |s: &TorsionSolution<f64>| {
            AnnulusQuadrature::new(ri, re).points().iter().map(|p| p.weight * s.fields_at(&p.x, None).unwrap().energy_density()).sum::<f64>()
        };
        assert!((psi(&doubled) - 4.0 * psi(&sol)).abs() < 1e-12 * psi(&sol).abs().max(1.0));
        let kt2 = stiffness_from_energy(&doubled, &AnnulusQuadrature::new(ri, re)).unwrap();
        assert!((kt2 - kt).abs() < 1e-12 * kt.abs().max(1.0));
        assert!((sol.energy() - 0.5 * sol.k_t * 0.49).abs() < 1e-14 * sol.k_t.abs().max(1.0));
    }
}

#[test]
fn annulus_stiffness_is_affine_in_the_edge_modulus() {
    let (ip, a) = annulus_moments(0.3f64, 0.9);
    for d in [-0.5, 0.0, 0.25, 1.0, 3.0] {
        let m = MaterialParams::new(0.0, 1.5, 0.0, 0.0, 0.0, 0.2 + d, 0.2);
        let sol = annulus_solution(&m, 1.0, 0.3, 0.9).unwrap();
        assert!((sol.k_t - (1.5 * ip + 2.0 * a * d)).abs() < 1e-13);
    }
}

#[test]
fn torsion_form_admissibility() {
    assert!(torsion_energy_form(&MaterialParams::<f64>::classical(0.0, 1.0)).check().is_ok());
    assert!(torsion_energy_form(&example_material()).check().is_ok());
    let soko = crate::constitutive::sokolowski(1.0, 0.0, 0.5);
    assert!(torsion_energy_form(&soko).check().is_ok());
    let negative = MaterialParams::new(0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0);
    assert!(matches!(torsion_energy_form(&negative).check(), Err(Error::IndefiniteEnergy(_))));
    let no_shear = MaterialParams::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    assert!(matches!(torsion_energy_form(&no_shear).check(), Err(Error::IndefiniteEnergy(_))));
    let mesh = CrossSectionMesh::rectangle(0.0, 0.0, 1.0, 1.0, 2, 2).unwrap();
    assert!(matches!(warp_solve(&mesh, &negative), Err(Error::IndefiniteEnergy(_))));
}

#[test]
fn torsion_does_not_see_the_coupling_modulus() {
    let iso = torsion_energy_form(&example_material());
    for c8 in [-0.4, 0.3, 2.0] {
        let hemi = torsion_energy_form(&example_material().hemitropic(c8));
        assert_eq!(hemi, iso);
        let sol = annulus_solution(&example_material().hemitropic(c8), 1.0, 0.5, 1.0).unwrap();
        let kt = stiffness_from_energy(&sol, &AnnulusQuadrature::new(0.5, 1.0)).unwrap();
        assert!((kt - 2.71875 * PI).abs() < 1e-10);
    }
}

/// `a⁴/3 (1 − 192/π⁵ Σ_{n odd} tanh(nπ/2)/n⁵)` for the square of side `a`.
fn square_torsion_constant() -> f64 {
    let s: f64 = (0..200).map(|k| 2 * k + 1).map(|n| ((n as f64) * PI / 2.0).tanh() / (n as f64).powi(5)).sum();
    (1.0 - 192.0 / PI.powi(5) * s) / 3.0
}

#[test]
fn classical_square_section() {
    let exact = square_torsion_constant();
    assert!((exact - 0.1406).abs() < 1e-4);
    let m = MaterialParams::<f64>::classical(0.25, 1.0);
    let mut last = f64::INFINITY;
    for n in [2, 4, 8] {
        let mesh = CrossSectionMesh::rectangle(-0.5, -0.5, 0.5, 0.5, n, n).unwrap();
        let sol = warp_solve(&mesh, &m).unwrap();
        let d = sol.diagnostics.unwrap();
        assert!((sol.k_t - 2.0 * d.energy).abs() < 1e-10 * sol.k_t);
        // nested spaces: the minimum energy never increases
        assert!(d.energy <= last + 1e-14);
        last = d.energy;
        if n == 8 {
            assert!((sol.k_t / exact - 1.0).abs() < 1e-5, "{} vs {exact}", sol.k_t);
        }
    }
    // side a scales as a⁴
    let mesh = CrossSectionMesh::rectangle(0.0, 0.0, 2.0, 2.0, 8, 8).unwrap();
    let sol = warp_solve(&mesh, &MaterialParams::<f64>::classical(0.25, 3.0)).unwrap();
    assert!((sol.k_t / (3.0 * 16.0 * exact) - 1.0).abs() < 1e-5);
}

#[test]
fn solver_energy_is_translation_invariant_and_gauged() {
    let m = MaterialParams::<f64>::new(0.4, 1.0, 0.05, 0.02, 0.03, 0.3, -0.1);
    let base = CrossSectionMesh::rectangle(-0.5, -0.3, 0.5, 0.3, 4, 3).unwrap();
    let shifted = CrossSectionMesh::rectangle(1.5, 0.7, 2.5, 1.3, 4, 3).unwrap();
    let a = warp_solve(&base, &m).unwrap();
    let b = warp_solve(&shifted, &m).unwrap();
    assert!((a.k_t - b.k_t).abs() < 1e-9 * a.k_t, "{} vs {}", a.k_t, b.k_t);
    for sol in [&a, &b] {
        let mean: f64 = MeshQuadrature::new(match &sol.section {
            Section::Mesh(mesh) => mesh,
            _ => unreachable!(),
        })
        .points()
        .iter()
        .map(|p| p.weight * sol.warp.jet(&p.x, p.element).unwrap().w)
        .sum();
        assert!(mean.abs() < 1e-12, "{mean}");
        assert!((sol.k_t - 2.0 * sol.diagnostics.unwrap().energy).abs() < 1e-10 * sol.k_t);
    }
}

#[test]
fn annulus_mesh_warping_vanishes_under_refinement() {
    let m = example_material();
    let exact = 2.71875 * PI;
    let mut prev: Option<(f64, f64, SolveDiagnostics)> = None;
    for (nr, na) in [(2, 16), (4, 32), (8, 64)] {
        let mesh = CrossSectionMesh::annulus(0.5, 1.0, nr, na).unwrap();
        let sol = warp_solve(&mesh, &m).unwrap();
        let d = sol.diagnostics.unwrap();
        let poly_area = mesh.area();
        // the polygonal section loses area O(h²); K_t follows it
        assert!((sol.k_t / exact - 1.0).abs() < 2.0 * (1.0 - poly_area / (0.75 * PI)) + 1e-6, "{}", sol.k_t);
        if let Some((h0, w0, d0)) = prev {
            let order = (w0 / d.w_max_abs).ln() / (h0 / d.h_max).ln();
            assert!(order >= 2.0, "order {order}");
            assert!(d.interior_residual_rms < d0.interior_residual_rms || d0.interior_residual_rms == 0.0);
            assert!(d.traction_residual_max < d0.traction_residual_max);
            assert!(d.double_traction_residual_max < d0.double_traction_residual_max);
        }
        prev = Some((d.h_max, d.w_max_abs, d));
    }
}

#[test]
fn isotropic_interior_operator() {
    // the generic Euler–Lagrange residual reduces to μΔw − (c₁₁+c₁₅+c₅)ΔΔw
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let m = MaterialParams::new(0.7, 1.3, 0.2, -0.1, 0.15, 0.6, 0.25);
    let form = torsion_energy_form(&m);
    let poly = ElementPoly { center: [0.1, -0.2], scale: 0.7, coeffs: std::array::from_fn(|_| rng.random_range(-1.0..1.0)) };
    let x = [0.3, 0.05];
    let d = |p, q| poly.derivative(&x, p, q);
    let lap = d(2, 0) + d(0, 2);
    let bilap = d(4, 0) + 2.0 * d(2, 2) + d(0, 4);
    let expected = m.mu * lap - (m.c11 + m.c15 + m.c5) * bilap;
    let got = warp::interior_residual(&form, &poly, &x);
    assert!((got - expected).abs() < 1e-10 * expected.abs().max(1.0), "{got} vs {expected}");
}

#[test]
fn mesh_quadrature_area_and_moment() {
    let mesh = CrossSectionMesh::rectangle(0.0, 0.0, 2.0, 1.0, 3, 2).unwrap();
    let pts = MeshQuadrature::new(&mesh).points();
    let area: f64 = pts.iter().map(|p| p.weight).sum();
    let ip: f64 = pts.iter().map(|p| p.weight * (p.x[0] * p.x[0] + p.x[1] * p.x[1])).sum();
    assert!((area - 2.0).abs() < 1e-14);
    assert!((ip - (8.0 / 3.0 + 2.0 / 3.0)).abs() < 1e-13);
}

#[test]
fn base_actions_are_a_pure_torque() {
    let m = example_material();
    let sol = annulus_solution(&m, 0.9, 0.5, 1.0).unwrap();
    let top = basis_actions(&sol).unwrap();
    let single = global_equilibrium_check(&[top]);
    let torque = sol.k_t * sol.theta;
    assert!(single.force_norm() < 1e-12 * torque);
    assert!((single.moment[2] - torque).abs() < 1e-10 * torque);
    assert!(single.moment[0].abs() < 1e-10 * torque && single.moment[1].abs() < 1e-10 * torque);
    let both = global_equilibrium_check(&[top, top.reaction(0.0)]);
    assert!(both.force_norm() < 1e-10 * torque);
    assert!(both.moment_norm() < 1e-10 * torque);
    // traction alone carries μΘI_P
    let no_edges = BoundaryActions { edge_modulus: 0.0, ..top };
    let (ip, _) = annulus_moments(0.5, 1.0);
    assert!((global_equilibrium_check(&[no_edges]).moment[2] - m.mu * 0.9 * ip).abs() < 1e-12);
    let zero = global_equilibrium_check::<f64>(&[]);
    assert_eq!(zero.force, [0.0; 3]);
    assert_eq!(zero.moment, [0.0; 3]);

    let same = MaterialParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.5, 0.5);
    let a = basis_actions(&annulus_solution(&same, 1.0, 0.5, 1.0).unwrap()).unwrap();
    for k in 0..10 {
        assert_eq!(a.edge_force(k as f64 * 0.7), [0.0; 3]);
    }
    let mesh = CrossSectionMesh::rectangle(0.0, 0.0, 1.0, 1.0, 2, 2).unwrap();
    let fe = warp_solve(&mesh, &MaterialParams::classical(0.0, 1.0)).unwrap();
    assert!(matches!(basis_actions(&fe), Err(Error::Unsupported(_))));
}

#[test]
fn elementary_states() {
    let m = MaterialParams::new(0.5, 1.0, 0.2, 0.1, 0.3, 0.4, 0.15);
    let zero = elementary_cube_state(&crate::tensor::Tensor3::zeros(), &m, 1.0).unwrap();
    assert_eq!(zero.p.max_abs(), 0.0);
    assert!(zero.face_double_forces.iter().all(|(_, t)| *t == [0.0; 3]));
    assert!(zero.edge_forces.iter().all(|(_, _, f)| *f == [0.0; 3]));
    for n in 0..18 {
        let c = elementary_basis::<f64>(n).unwrap();
        let st = elementary_cube_state(&c, &m, 0.5).unwrap();
        assert!(st.mean_strain.max_abs() < 1e-15);
        assert!(st.hyperstress_divergence.iter().flatten().all(|v| v.abs() < 1e-9));
        assert_eq!(st.face_double_forces.len(), 6);
        assert_eq!(st.edge_forces.len(), 12);
        // displacement gradient reproduces the strain
        let x = [0.1, -0.2, 0.3];
        let h = 1e-6;
        for i in 0..3 {
            for j in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += h;
                xm[j] -= h;
                let dij = (st.displacement(&xp)[i] - st.displacement(&xm)[i]) / (2.0 * h);
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let dji = (st.displacement(&xp)[j] - st.displacement(&xm)[j]) / (2.0 * h);
                assert!((0.5 * (dij + dji) - st.strain(&x).get(i, j)).abs() < 1e-8);
            }
        }
        for (nrm, tau) in &st.face_double_forces {
            let ax = nrm.iter().position(|v| *v != 0).unwrap();
            for (al, t) in tau.iter().enumerate() {
                assert_eq!(*t, st.p.get(al, ax, ax));
            }
        }
    }
    assert!(elementary_basis::<f64>(18).is_err());
    let mut bad = crate::tensor::Tensor3::zeros();
    bad.set([0, 1, 2], 1.0);
    assert!(matches!(elementary_cube_state(&bad, &m, 1.0), Err(Error::NotSymmetric { .. })));
}

#[test]
fn f32_annulus() {
    let m = example_material().cast::<f32>();
    let sol = annulus_solution(&m, 1.0f32, 0.5, 1.0).unwrap();
    let kt = stiffness_from_energy(&sol, &AnnulusQuadrature::new(0.5f32, 1.0)).unwrap();
    assert!((kt - 8.54124).abs() < 1e-4);
}
