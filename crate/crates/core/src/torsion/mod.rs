//! Saint-Venant torsion of a prismatic bar with axis `X₃`.
//!
//! The displacement is `u₁ = −ΘX₂X₃`, `u₂ = ΘX₁X₃`, `u₃ = Θw(X₁, X₂)`, so
//! the warping `w` carries length². Fields are linear in the twist `Θ`;
//! solutions are computed for a given `Θ` and `K_t` does not depend on it.

mod actions;
mod argyris;
mod mesh;
mod quadrature;
mod sparse;
mod warp;

#[cfg(test)]
mod tests;

pub use actions::{
    basis_actions, elementary_basis, elementary_cube_state, global_equilibrium_check, BoundaryActions, ElementaryState, EquilibriumResidual,
    LoadedBase,
};
pub use argyris::{ArgyrisElement, ElementGeometry, ElementPoly, MONOMIALS};
pub use mesh::{BoundaryEdge, CrossSectionMesh};
pub use quadrature::{gauss_legendre, triangle_rule, AnnulusQuadrature, QuadPoint, Quadrature2D};
pub use sparse::{nested_dissection, Cholesky, SymmetricCsc};
pub use warp::{interior_residual, torsion_energy_form, warp_solve, FeWarp, SolveDiagnostics, TorsionEnergyForm};

use crate::constitutive::{Hooke, MaterialParams};
use crate::error::{Error, Result};
use crate::stability::{self, Status};
use crate::tensor::{SymMat3, SymTri3};
use crate::Real;

/// Value and derivatives of a warping function at a point; `hess` is
/// `[w,₁₁, w,₁₂, w,₂₂]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpJet<T> {
    pub w: T,
    pub grad: [T; 2],
    pub hess: [T; 3],
}

impl<T: Real> WarpJet<T> {
    pub fn zero() -> Self {
        Self { w: T::zero(), grad: [T::zero(); 2], hess: [T::zero(); 3] }
    }
}

/// A warping function with two derivatives. `element` is an optional hint
/// naming the mesh triangle that contains `x`.
pub trait WarpField<T: Real>: Sync {
    fn jet(&self, x: &[T; 2], element: Option<usize>) -> Result<WarpJet<T>>;
}

impl<T: Real, W: WarpField<T> + ?Sized> WarpField<T> for &W {
    fn jet(&self, x: &[T; 2], element: Option<usize>) -> Result<WarpJet<T>> {
        (**self).jet(x, element)
    }
}

/// `w = w₀ + w₁X₁ + w₂X₂ + (w₁₁X₁² + 2w₁₂X₁X₂ + w₂₂X₂²)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticWarp<T> {
    pub coeffs: [T; 6],
}

impl<T: Real> WarpField<T> for QuadraticWarp<T> {
    fn jet(&self, x: &[T; 2], _: Option<usize>) -> Result<WarpJet<T>> {
        let [w0, w1, w2, w11, w12, w22] = self.coeffs;
        let half = T::lit(0.5);
        Ok(WarpJet {
            w: w0 + w1 * x[0] + w2 * x[1] + half * (w11 * x[0] * x[0] + T::lit(2.0) * w12 * x[0] * x[1] + w22 * x[1] * x[1]),
            grad: [w1 + w11 * x[0] + w12 * x[1], w2 + w12 * x[0] + w22 * x[1]],
            hess: [w11, w12, w22],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionFields<T: Real> {
    pub epsilon: SymMat3<T>,
    pub grad_eps: SymTri3<T>,
    pub s: SymMat3<T>,
    pub p: SymTri3<T>,
}

impl<T: Real> TorsionFields<T> {
    /// `½(S_ij ε_ij + P_ijk ε_ij,k)`.
    pub fn energy_density(&self) -> T {
        T::lit(0.5) * (self.s.ddot(&self.epsilon) + self.p.inner(&self.grad_eps))
    }
}

/// Reduced torsion variables `(w,₁ − X₂, w,₂ + X₁, w,₁₁, w,₁₂, w,₂₂, 1)` per
/// unit twist.
pub(crate) fn reduced_variables<T: Real>(jet: &WarpJet<T>, x: &[T; 2]) -> [T; 6] {
    [jet.grad[0] - x[1], jet.grad[1] + x[0], jet.hess[0], jet.hess[1], jet.hess[2], T::one()]
}

/// Strain and strain gradient of the `a`-th reduced variable at unit twist.
pub(crate) fn reduced_basis<T: Real>(a: usize) -> (SymMat3<T>, SymTri3<T>) {
    let half = T::lit(0.5);
    let mut e = SymMat3::zero();
    let mut g = SymTri3::zero();
    match a {
        0 => e.set(0, 2, half),
        1 => e.set(1, 2, half),
        2 => g.set(0, 2, 0, half),
        3 => {
            g.set(0, 2, 1, half);
            g.set(1, 2, 0, half);
        }
        4 => g.set(1, 2, 1, half),
        _ => {
            g.set(0, 2, 1, -half);
            g.set(1, 2, 0, half);
        }
    }
    (e, g)
}

/// Fields of the six reduced variables, superposed pointwise.
#[derive(Debug, Clone)]
pub(crate) struct TorsionKernel<T: Real> {
    basis: Vec<TorsionFields<T>>,
}

impl<T: Real> TorsionKernel<T> {
    pub(crate) fn new(m: &MaterialParams<T>) -> Self {
        let hooke = Hooke::new(m);
        let basis = (0..6)
            .map(|a| {
                let (epsilon, grad_eps) = reduced_basis(a);
                let st = hooke.apply(&epsilon, &grad_eps);
                TorsionFields { epsilon, grad_eps, s: st.s, p: st.p }
            })
            .collect();
        Self { basis }
    }

    pub(crate) fn fields(&self, theta: T, jet: &WarpJet<T>, x: &[T; 2]) -> TorsionFields<T> {
        let q = reduced_variables(jet, x);
        let mut out = TorsionFields { epsilon: SymMat3::zero(), grad_eps: SymTri3::zero(), s: SymMat3::zero(), p: SymTri3::zero() };
        for (b, qa) in self.basis.iter().zip(q) {
            let c = theta * qa;
            out.epsilon = out.epsilon.add(&b.epsilon.scale(c));
            out.grad_eps = out.grad_eps.add(&b.grad_eps.scale(c));
            out.s = out.s.add(&b.s.scale(c));
            out.p = out.p.add(&b.p.scale(c));
        }
        out
    }
}

/// Linearized strain, strain gradient, stress and hyperstress of the
/// torsion field at `x`:
/// `ε₁₃ = Θ(w,₁ − X₂)/2`, `ε₂₃ = Θ(w,₂ + X₁)/2`,
/// `ε₁₃,₁ = Θw,₁₁/2`, `ε₁₃,₂ = Θ(w,₁₂ − 1)/2`, `ε₂₃,₁ = Θ(w,₁₂ + 1)/2`, `ε₂₃,₂ = Θw,₂₂/2`.
pub fn torsion_fields<T: Real>(w: &impl WarpField<T>, theta: T, m: &MaterialParams<T>, x: &[T; 2]) -> Result<TorsionFields<T>> {
    let jet = w.jet(x, None)?;
    Ok(TorsionKernel::new(m).fields(theta, &jet, x))
}

/// Section the solution lives on.
#[derive(Debug, Clone)]
pub enum Section<T: Real> {
    Annulus { r_int: T, r_ext: T },
    Mesh(Box<CrossSectionMesh<T>>),
}

#[derive(Debug, Clone)]
pub enum Warp<T: Real> {
    Zero,
    Fe(Box<FeWarp<T>>),
}

impl<T: Real> WarpField<T> for Warp<T> {
    fn jet(&self, x: &[T; 2], element: Option<usize>) -> Result<WarpJet<T>> {
        match self {
            Warp::Zero => Ok(WarpJet::zero()),
            Warp::Fe(fe) => fe.jet(x, element),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TorsionSolution<T: Real> {
    pub theta: T,
    pub material: MaterialParams<T>,
    pub k_t: T,
    pub warp: Warp<T>,
    pub section: Section<T>,
    pub diagnostics: Option<SolveDiagnostics>,
    pub warnings: Vec<String>,
    kernel: TorsionKernel<T>,
}

impl<T: Real> TorsionSolution<T> {
    pub(crate) fn assemble(theta: T, material: MaterialParams<T>, k_t: T, warp: Warp<T>, section: Section<T>) -> Self {
        let kernel = TorsionKernel::new(&material);
        Self { theta, material, k_t, warp, section, diagnostics: None, warnings: Vec::new(), kernel }
    }

    /// The same solution at another twist.
    pub fn with_theta(&self, theta: T) -> Self {
        Self { theta, ..self.clone() }
    }

    pub fn fields_at(&self, x: &[T; 2], element: Option<usize>) -> Result<TorsionFields<T>> {
        let jet = self.warp.jet(x, element)?;
        Ok(self.kernel.fields(self.theta, &jet, x))
    }

    /// Warping at the mesh nodes (empty for the closed-form annulus).
    pub fn node_values(&self) -> Vec<T> {
        match &self.warp {
            Warp::Zero => Vec::new(),
            Warp::Fe(fe) => fe.node_values().to_vec(),
        }
    }

    /// Stored energy per unit length, `½K_tΘ²`.
    pub fn energy(&self) -> T {
        T::lit(0.5) * self.k_t * self.theta * self.theta
    }

    /// Closed-form polar moment and gradient parts of `K_t` for the annulus.
    pub fn annulus_split(&self) -> Option<(T, T)> {
        match self.section {
            Section::Annulus { r_int, r_ext } => {
                let (ip, a) = annulus_moments(r_int, r_ext);
                Some((self.material.mu * ip, T::lit(2.0) * (self.material.c11 - self.material.c15) * a))
            }
            Section::Mesh(_) => None,
        }
    }
}

/// `(I_P, A)` of the annulus.
pub fn annulus_moments<T: Real>(r_int: T, r_ext: T) -> (T, T) {
    let pi = T::pi();
    let (a2, b2) = (r_int * r_int, r_ext * r_ext);
    (pi * (b2 * b2 - a2 * a2) * T::lit(0.5), pi * (b2 - a2))
}

/// The closed-form solution on `R_int ≤ r ≤ R_ext`: `w = 0` and
/// `K_t = μI_P + 2(c₁₁ − c₁₅)A`. The coupling modulus `c₈` does not enter
/// the torsion energy.
pub fn annulus_solution<T: Real>(m: &MaterialParams<T>, theta: T, r_int: T, r_ext: T) -> Result<TorsionSolution<T>> {
    if !(r_int.is_finite() && r_ext.is_finite() && r_int >= T::zero() && r_int < r_ext) {
        return Err(Error::Geometry(format!("annulus radii must satisfy 0 <= r_int < r_ext, got {r_int}, {r_ext}")));
    }
    let (ip, a) = annulus_moments(r_int, r_ext);
    let k_t = m.mu * ip + T::lit(2.0) * (m.c11 - m.c15) * a;
    let mut sol = TorsionSolution::assemble(theta, *m, k_t, Warp::Zero, Section::Annulus { r_int, r_ext });
    let status = stability::report(m).status;
    if status != Status::Definite {
        sol.warnings.push(format!("material energy is {status:?}, not positive definite"));
    }
    Ok(sol)
}

/// `K_t = 2ψ/Θ²`, `ψ = ½∫(S_ij ε_ij + P_ijk ε_ij,k)` by the given rule.
pub fn stiffness_from_energy<T: Real>(sol: &TorsionSolution<T>, rule: &impl Quadrature2D<T>) -> Result<T> {
    let mut psi = T::zero();
    for p in rule.points() {
        psi += p.weight * sol.fields_at(&p.x, p.element)?.energy_density();
    }
    Ok(T::lit(2.0) * psi / (sol.theta * sol.theta))
}

/// The collapsed Gauss rule of order `n` on every triangle of a mesh.
#[derive(Debug, Clone, Copy)]
pub struct MeshQuadrature<'a, T> {
    pub mesh: &'a CrossSectionMesh<T>,
    pub order: usize,
}

impl<'a, T: Real> MeshQuadrature<'a, T> {
    pub fn new(mesh: &'a CrossSectionMesh<T>) -> Self {
        Self { mesh, order: 6 }
    }
}

impl<T: Real> Quadrature2D<T> for MeshQuadrature<'_, T> {
    fn points(&self) -> Vec<QuadPoint<T>> {
        let rule = triangle_rule(self.order);
        let mut out = Vec::with_capacity(rule.len() * self.mesh.triangles().len());
        for t in 0..self.mesh.triangles().len() {
            let [a, b, c] = self.mesh.vertices(t);
            let twice = T::lit(2.0) * self.mesh.triangle_area(t);
            for ([xi, eta], w) in &rule {
                let (xi, eta) = (T::lit(*xi), T::lit(*eta));
                let x = [a[0] + xi * (b[0] - a[0]) + eta * (c[0] - a[0]), a[1] + xi * (b[1] - a[1]) + eta * (c[1] - a[1])];
                out.push(QuadPoint { x, weight: T::lit(*w) * twice, element: Some(t) });
            }
        }
        out
    }
}
