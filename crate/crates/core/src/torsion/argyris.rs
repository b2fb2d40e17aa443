//! The 21-dof Argyris triangle (complete quintics, C¹ across elements).
//!
//! Degrees of freedom per triangle, in local order: at each vertex
//! `w, σw_x, σw_y, σ²w_xx, σ²w_xy, σ²w_yy` (σ a per-vertex length scale),
//! then for each edge `v₀v₁, v₁v₂, v₂v₀` the midpoint normal derivative
//! `σ_e ∂w/∂n`. Edge normals are oriented globally (the tangent runs from
//! the lower to the higher node index, the normal is the tangent turned
//! clockwise), which together with Cartesian vertex derivatives makes the
//! space conforming.
//!
//! The nodal basis of each element is obtained by inverting the matrix of
//! the 21 functionals applied to monomials in scaled local coordinates
//! `((x − x_c)/s, (y − y_c)/s)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::Real;

pub const NDOF: usize = 21;

/// Exponents `(a, b)` of `ξ^a η^b` with `a + b ≤ 5`, grouped by degree.
pub const MONOMIALS: [(u32, u32); NDOF] = {
    let mut out = [(0, 0); NDOF];
    let mut n = 0;
    let mut d = 0;
    while d <= 5 {
        let mut b = 0;
        while b <= d {
            out[n] = (d - b, b);
            n += 1;
            b += 1;
        }
        d += 1;
    }
    out
};

const VERTEX_DERIVS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

fn falling(a: u32, p: u32) -> f64 {
    (0..p).map(|k| (a - k) as f64).product()
}

/// A polynomial of degree ≤ 5 in scaled local coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPoly<T> {
    pub center: [T; 2],
    pub scale: T,
    pub coeffs: [T; NDOF],
}

impl<T: Real> ElementPoly<T> {
    /// `∂^{p+q} w / ∂x^p ∂y^q` at `x`.
    pub fn derivative(&self, x: &[T; 2], p: u32, q: u32) -> T {
        let xi = (x[0] - self.center[0]) / self.scale;
        let eta = (x[1] - self.center[1]) / self.scale;
        let mut acc = T::zero();
        for (c, &(a, b)) in self.coeffs.iter().zip(MONOMIALS.iter()) {
            if a >= p && b >= q && *c != T::zero() {
                acc += *c * T::lit(falling(a, p) * falling(b, q)) * xi.powi((a - p) as i32) * eta.powi((b - q) as i32);
            }
        }
        acc / self.scale.powi((p + q) as i32)
    }
}

/// Geometry and dof scaling of one triangle.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry<T> {
    pub vertices: [[T; 2]; 3],
    pub vertex_scales: [T; 3],
    /// Globally oriented unit normals of the edges `v₀v₁, v₁v₂, v₂v₀`.
    pub edge_normals: [[T; 2]; 3],
    pub edge_scales: [T; 3],
}

/// The element basis: column `d` holds the monomial coefficients of the
/// shape function dual to local dof `d`.
#[derive(Debug, Clone)]
pub struct ArgyrisElement<T: Real> {
    pub center: [T; 2],
    pub scale: T,
    basis: DMatrix<T>,
}

fn monomial_derivative<T: Real>(m: usize, xi: T, eta: T, p: u32, q: u32, scale: T) -> T {
    let (a, b) = MONOMIALS[m];
    if a < p || b < q {
        return T::zero();
    }
    T::lit(falling(a, p) * falling(b, q)) * xi.powi((a - p) as i32) * eta.powi((b - q) as i32) / scale.powi((p + q) as i32)
}

impl<T: Real> ArgyrisElement<T> {
    pub fn new(g: &ElementGeometry<T>) -> Result<Self> {
        let v = g.vertices;
        let third = T::one() / T::lit(3.0);
        let center = [(v[0][0] + v[1][0] + v[2][0]) * third, (v[0][1] + v[1][1] + v[2][1]) * third];
        let dist = |a: [T; 2], b: [T; 2]| ((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])).sqrt();
        let scale = dist(v[0], v[1]).max(dist(v[1], v[2])).max(dist(v[2], v[0]));
        let local = |x: [T; 2]| ((x[0] - center[0]) / scale, (x[1] - center[1]) / scale);
        let mut f = DMatrix::<T>::zeros(NDOF, NDOF);
        for (k, vk) in v.iter().enumerate() {
            let (xi, eta) = local(*vk);
            let sigma = g.vertex_scales[k];
            for (r, &(p, q)) in VERTEX_DERIVS.iter().enumerate() {
                let s = sigma.powi((p + q) as i32);
                for m in 0..NDOF {
                    f[(6 * k + r, m)] = s * monomial_derivative(m, xi, eta, p, q, scale);
                }
            }
        }
        for k in 0..3 {
            let (a, b) = (v[k], v[(k + 1) % 3]);
            let half = T::lit(0.5);
            let (xi, eta) = local([(a[0] + b[0]) * half, (a[1] + b[1]) * half]);
            let n = g.edge_normals[k];
            for m in 0..NDOF {
                let dn = n[0] * monomial_derivative(m, xi, eta, 1, 0, scale) + n[1] * monomial_derivative(m, xi, eta, 0, 1, scale);
                f[(18 + k, m)] = g.edge_scales[k] * dn;
            }
        }
        let basis = f.try_inverse().ok_or_else(|| Error::Mesh("degenerate Argyris element".into()))?;
        Ok(Self { center, scale, basis })
    }

    /// Values of `∂^{p+q}/∂x^p∂y^q` of all 21 shape functions at `x`.
    pub fn shape_derivatives(&self, x: &[T; 2], p: u32, q: u32) -> [T; NDOF] {
        let xi = (x[0] - self.center[0]) / self.scale;
        let eta = (x[1] - self.center[1]) / self.scale;
        let mono: Vec<T> = (0..NDOF).map(|m| monomial_derivative(m, xi, eta, p, q, self.scale)).collect();
        let mut out = [T::zero(); NDOF];
        for (d, o) in out.iter_mut().enumerate() {
            let mut s = T::zero();
            for (m, mv) in mono.iter().enumerate() {
                s += self.basis[(m, d)] * *mv;
            }
            *o = s;
        }
        out
    }

    /// The element polynomial for local dof values `q`.
    pub fn interpolant(&self, q: &[T; NDOF]) -> ElementPoly<T> {
        let mut coeffs = [T::zero(); NDOF];
        for (m, c) in coeffs.iter_mut().enumerate() {
            let mut s = T::zero();
            for (d, qd) in q.iter().enumerate() {
                s += self.basis[(m, d)] * *qd;
            }
            *c = s;
        }
        ElementPoly { center: self.center, scale: self.scale, coeffs }
    }
}
