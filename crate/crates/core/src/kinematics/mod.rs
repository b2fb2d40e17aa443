//! Finite-strain kinematics of analytic placements.
//!
//! Third-order arrays are [`Tensor3`] values indexed in the natural order of
//! their symbols: `F_{αi,j}` as `[α, i, j]`, `W_{flk}` as `[f, l, k]`.

mod probes;

pub use probes::{Affine, PlacementProbe, Quadratic, Rotated, Sinusoidal, Torsion};

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::tensor::{levi_civita, Mat3, SymMat3, SymTri3, Tensor3, Vec3};
use crate::Real;

/// Strain and its referential gradient at a material point.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainState<T: Real> {
    pub e: SymMat3<T>,
    /// `E_{ij,k}`
    pub grad_e: SymTri3<T>,
}

/// `F = R̄ U` with `R̄` proper orthogonal and `U` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors<T: Real> {
    pub r: Mat3<T>,
    pub u: SymMat3<T>,
}

/// Finite-difference step `ε^{1/3} · length`.
pub fn default_step<T: Real>(length: T) -> T {
    T::eps().cbrt() * length
}

fn check_jacobian<T: Real>(f: &Mat3<T>) -> Result<T> {
    let det = f.determinant();
    if det > T::zero() {
        Ok(det)
    } else {
        Err(Error::NonPositiveJacobian { det: det.to_f64_lossy() })
    }
}

fn unit<T: Real>(k: usize, h: T) -> Vec3<T> {
    let mut e = Vec3::zeros();
    e[k] = h;
    e
}

/// `E = (FᵀF − I)/2`.
pub fn green_lagrange<T: Real>(f: &Mat3<T>) -> Result<SymMat3<T>> {
    check_jacobian(f)?;
    let half = T::lit(0.5);
    Ok(SymMat3::from_fn(|i, k| {
        let mut s = T::zero();
        for a in 0..3 {
            s += f[(a, i)] * f[(a, k)];
        }
        if i == k {
            s -= T::one();
        }
        half * s
    }))
}

/// Strain at `x` and its gradient by central differences of step `h`.
pub fn strain_state<T: Real, P: PlacementProbe<T> + ?Sized>(probe: &P, x: &Vec3<T>, h: T) -> Result<StrainState<T>> {
    let e = green_lagrange(&probe.f(x))?;
    let mut grad = [SymMat3::zero(), SymMat3::zero(), SymMat3::zero()];
    let inv = T::one() / (h + h);
    for (k, g) in grad.iter_mut().enumerate() {
        let d = unit(k, h);
        let ep = green_lagrange(&probe.f(&(x + d)))?;
        let em = green_lagrange(&probe.f(&(x - d)))?;
        *g = ep.sub(&em).scale(inv);
    }
    Ok(StrainState { e, grad_e: SymTri3::from_fn(|i, j, k| grad[k].get(i, j)) })
}

/// Strain at `x` with the gradient from the analytic second derivatives,
/// `E_{ik,j} = (F_{αi,j}F_{αk} + F_{αi}F_{αk,j})/2`.
pub fn strain_state_exact<T: Real, P: PlacementProbe<T> + ?Sized>(probe: &P, x: &Vec3<T>) -> Result<StrainState<T>> {
    let f = probe.f(x);
    let e = green_lagrange(&f)?;
    let g = probe.grad_f(x);
    let half = T::lit(0.5);
    let grad_e = SymTri3::from_fn(|i, k, j| {
        let mut s = T::zero();
        for a in 0..3 {
            s += g.get([a, i, j]) * f[(a, k)] + f[(a, i)] * g.get([a, k, j]);
        }
        half * s
    });
    Ok(StrainState { e, grad_e })
}

/// Polar decomposition through the spectral square root of `FᵀF`.
pub fn polar<T: Real>(f: &Mat3<T>) -> Result<PolarFactors<T>> {
    check_jacobian(f)?;
    let eig = SymmetricEigen::new(f.transpose() * f);
    let v = eig.eigenvectors;
    let s = eig.eigenvalues.map(|l| l.max(T::zero()).sqrt());
    if s.min() <= T::zero() {
        return Err(Error::SingularStretch { det: (s[0] * s[1] * s[2]).to_f64_lossy() });
    }
    let u = v * Mat3::from_diagonal(&s) * v.transpose();
    let u_inv = v * Mat3::from_diagonal(&s.map(|x| T::one() / x)) * v.transpose();
    Ok(PolarFactors { r: f * u_inv, u: SymMat3::sym_part(&u) })
}

/// `W_{flk} = R̄_{αf} R̄_{αl,k}` with the rotation gradient by central
/// differences of step `h`.
pub fn rotation_gradient_pullback<T: Real, P: PlacementProbe<T> + ?Sized>(
    probe: &P,
    x: &Vec3<T>,
    h: T,
) -> Result<Tensor3<T>> {
    let r = polar(&probe.f(x))?.r;
    let inv = T::one() / (h + h);
    let mut dr = Vec::with_capacity(3);
    for k in 0..3 {
        let d = unit(k, h);
        let rp = polar(&probe.f(&(x + d)))?.r;
        let rm = polar(&probe.f(&(x - d)))?.r;
        dr.push((rp - rm) * inv);
    }
    Ok(Tensor3::from_fn(|[f, l, k]| {
        let mut s = T::zero();
        for a in 0..3 {
            s += r[(a, f)] * dr[k][(a, l)];
        }
        s
    }))
}

/// Closed-form compatibility tensor `A` with `W_{flk} = ε_{flm} A_{mk}`.
///
/// With `c = curl U`, `c_{nl} = ε_{lab} U_{na,b}`, this evaluates
/// `A_{mk} = Y_{mn} U_{nk}`, `Y_{mn} = (U_{ml} c_{nl} − ½ U_{ij} c_{ij} δ_{mn}) / det U`.
/// The stretch gradient is taken by central differences of step `h`.
pub fn compatibility_a<T: Real, P: PlacementProbe<T> + ?Sized>(probe: &P, x: &Vec3<T>, h: T) -> Result<Mat3<T>> {
    let u = polar(&probe.f(x))?.u.to_matrix();
    let det = u.determinant();
    if det.abs() <= T::eps() {
        return Err(Error::SingularStretch { det: det.to_f64_lossy() });
    }
    let inv = T::one() / (h + h);
    let mut du = Vec::with_capacity(3);
    for b in 0..3 {
        let d = unit(b, h);
        let up = polar(&probe.f(&(x + d)))?.u.to_matrix();
        let um = polar(&probe.f(&(x - d)))?.u.to_matrix();
        du.push((up - um) * inv);
    }
    let curl = Mat3::from_fn(|n, l| {
        let mut s = T::zero();
        for a in 0..3 {
            for b in 0..3 {
                s += levi_civita::<T>(l, a, b) * du[b][(n, a)];
            }
        }
        s
    });
    let trace_term = u.component_mul(&curl).sum() * T::lit(0.5);
    let y = (u * curl.transpose() - Mat3::identity() * trace_term) / det;
    Ok(y * u)
}

/// Eulerian stress and hyperstress:
/// `Σ_{αβ} = J⁻¹[S_{ij}F_{αi}F_{βj} + P_{ijk}(F_{αj}F_{βi,k} + F_{αi,k}F_{βj})]`,
/// `Π_{αβγ} = J⁻¹ P_{ijk}F_{αj}F_{βi}F_{γk}`.
pub fn push_forward<T: Real>(
    s: &SymMat3<T>,
    p: &SymTri3<T>,
    f: &Mat3<T>,
    grad_f: &Tensor3<T>,
) -> Result<(Mat3<T>, Tensor3<T>)> {
    let j_inv = T::one() / check_jacobian(f)?;
    let sigma = Mat3::from_fn(|a, b| {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += s.get(i, j) * f[(a, i)] * f[(b, j)];
                for k in 0..3 {
                    acc += p.get(i, j, k) * (f[(a, j)] * grad_f.get([b, i, k]) + grad_f.get([a, i, k]) * f[(b, j)]);
                }
            }
        }
        acc * j_inv
    });
    let pi = Tensor3::from_fn(|[a, b, c]| {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    acc += p.get(i, j, k) * f[(a, j)] * f[(b, i)] * f[(c, k)];
                }
            }
        }
        acc * j_inv
    });
    Ok((sigma, pi))
}

/// `κ_{ij} = −ε_{ipq} u_{p,qj}` from second displacement derivatives indexed
/// `[p, q, j]`. Equals `−2` times the linear part of the sym-skew strain
/// gradient `Ê`.
pub fn curl_gradient_linear<T: Real>(u2: &Tensor3<T>) -> Mat3<T> {
    Mat3::from_fn(|i, j| {
        let mut s = T::zero();
        for p in 0..3 {
            for q in 0..3 {
                s -= levi_civita::<T>(i, p, q) * u2.get([p, q, j]);
            }
        }
        s
    })
}
