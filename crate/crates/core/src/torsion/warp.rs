//! Warping of a general section by minimizing the stored energy per unit
//! length over the Argyris space.
//!
//! Per unit twist the energy density is `½ q̃ᵀ M q̃` with the reduced
//! variables `q̃ = (w,₁ − X₂, w,₂ + X₁, w,₁₁, w,₁₂, w,₂₂, 1)` and `M` the
//! constitutive form restricted to the torsion strains. Assembly and the
//! sparse solve run in `f64`; the resulting element polynomials are
//! converted to the caller's scalar type.

use std::collections::HashMap;

use nalgebra::{Matrix5, SymmetricEigen};
use rayon::prelude::*;

use super::argyris::{ArgyrisElement, ElementGeometry, ElementPoly, NDOF};
use super::mesh::CrossSectionMesh;
use super::quadrature::triangle_rule;
use super::sparse::{nested_dissection, Cholesky, SymmetricCsc};
use super::{reduced_basis, stiffness_from_energy, MeshQuadrature, Section, TorsionSolution, Warp, WarpField, WarpJet};
use crate::constitutive::{Hooke, MaterialParams};
use crate::error::{Error, Result};
use crate::Real;

/// The constitutive bilinear form on the six reduced torsion variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionEnergyForm {
    pub m: [[f64; 6]; 6],
}

pub fn torsion_energy_form<T: Real>(m: &MaterialParams<T>) -> TorsionEnergyForm {
    let hooke = Hooke::new(&m.cast::<f64>());
    let basis: Vec<_> = (0..6).map(reduced_basis::<f64>).collect();
    let mut out = [[0.0; 6]; 6];
    for (a, (ea, ga)) in basis.iter().enumerate() {
        let st = hooke.apply(ea, ga);
        for (b, (eb, gb)) in basis.iter().enumerate() {
            out[a][b] = st.s.ddot(eb) + st.p.inner(gb);
        }
    }
    for a in 0..6 {
        for b in 0..a {
            let s = 0.5 * (out[a][b] + out[b][a]);
            out[a][b] = s;
            out[b][a] = s;
        }
    }
    TorsionEnergyForm { m: out }
}

impl TorsionEnergyForm {
    pub fn density(&self, q: &[f64; 6]) -> f64 {
        let mut s = 0.0;
        for a in 0..6 {
            for b in 0..6 {
                s += q[a] * self.m[a][b] * q[b];
            }
        }
        0.5 * s
    }

    /// The functional is bounded below with minimizers unique up to a
    /// constant when the block on the first five variables is positive
    /// semidefinite and its null space leaves `∇w` controlled.
    pub fn check(&self) -> Result<()> {
        let m5 = Matrix5::from_fn(|a, b| self.m[a][b]);
        let scale = self.m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::IndefiniteEnergy("the torsion energy vanishes identically".into()));
        }
        let tol = 1e-12 * scale;
        let eig = SymmetricEigen::new(m5);
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam < -tol {
                return Err(Error::IndefiniteEnergy(format!("torsion energy has negative eigenvalue {lam:e}")));
            }
            let v = eig.eigenvectors.column(k);
            if lam <= tol && v[0].abs() + v[1].abs() > 1e-8 {
                return Err(Error::IndefiniteEnergy("torsion energy does not control the warping gradient".into()));
            }
        }
        Ok(())
    }
}

/// Finite-element warping: one quintic per triangle.
#[derive(Debug, Clone)]
pub struct FeWarp<T: Real> {
    mesh: CrossSectionMesh<T>,
    polys: Vec<ElementPoly<T>>,
    node_values: Vec<T>,
}

impl<T: Real> FeWarp<T> {
    pub fn mesh(&self) -> &CrossSectionMesh<T> {
        &self.mesh
    }

    pub fn polys(&self) -> &[ElementPoly<T>] {
        &self.polys
    }

    pub fn node_values(&self) -> &[T] {
        &self.node_values
    }
}

impl<T: Real> WarpField<T> for FeWarp<T> {
    fn jet(&self, x: &[T; 2], element: Option<usize>) -> Result<WarpJet<T>> {
        let t = match element {
            Some(t) if t < self.polys.len() => t,
            _ => self.mesh.locate(x).ok_or_else(|| Error::Geometry(format!("point ({}, {}) is outside the section", x[0], x[1])))?,
        };
        let p = &self.polys[t];
        Ok(WarpJet {
            w: p.derivative(x, 0, 0),
            grad: [p.derivative(x, 1, 0), p.derivative(x, 0, 1)],
            hess: [p.derivative(x, 2, 0), p.derivative(x, 1, 1), p.derivative(x, 0, 2)],
        })
    }
}

/// Size of the discrete problem and residuals of the Euler–Lagrange
/// equations of the discrete minimizer, per unit twist.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveDiagnostics {
    pub dofs: usize,
    pub factor_nnz: usize,
    pub h_max: f64,
    /// Minimum energy from the linear algebra, `ψ = E₀ + ½fᵀq`.
    pub energy: f64,
    /// Interior equation at the centroids of elements with no boundary
    /// vertex (corners of polygonal sections carry singular derivatives).
    pub interior_residual_max: f64,
    pub interior_residual_rms: f64,
    /// Traction condition (with the `d_S` term) at boundary segment midpoints.
    pub traction_residual_max: f64,
    /// Double-traction condition `m_AB n_A n_B` at boundary segment midpoints.
    pub double_traction_residual_max: f64,
    pub w_max_abs: f64,
}

struct Local {
    k: [[f64; NDOF]; NDOF],
    f: [f64; NDOF],
    mean: [f64; NDOF],
    e0: f64,
}

const DERIVS: [(u32, u32); 5] = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

fn element_matrices(el: &ArgyrisElement<f64>, v: &[[f64; 2]; 3], form: &TorsionEnergyForm, rule: &[([f64; 2], f64)]) -> Local {
    let m = &form.m;
    let twice = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    let mut out = Local { k: [[0.0; NDOF]; NDOF], f: [0.0; NDOF], mean: [0.0; NDOF], e0: 0.0 };
    for ([xi, eta], w) in rule {
        let x = [
            v[0][0] + xi * (v[1][0] - v[0][0]) + eta * (v[2][0] - v[0][0]),
            v[0][1] + xi * (v[1][1] - v[0][1]) + eta * (v[2][1] - v[0][1]),
        ];
        let wt = w * twice;
        let d: Vec<[f64; NDOF]> = DERIVS.iter().map(|&(p, q)| el.shape_derivatives(&x, p, q)).collect();
        let n = el.shape_derivatives(&x, 0, 0);
        let r = [-x[1], x[0], 0.0, 0.0, 0.0, 1.0];
        let mut mr = [0.0; 6];
        for a in 0..6 {
            mr[a] = (0..6).map(|b| m[a][b] * r[b]).sum();
        }
        out.e0 += wt * 0.5 * (0..6).map(|a| r[a] * mr[a]).sum::<f64>();
        let mut md = [[0.0; NDOF]; 5];
        for a in 0..5 {
            for b in 0..5 {
                if m[a][b] != 0.0 {
                    for j in 0..NDOF {
                        md[a][j] += m[a][b] * d[b][j];
                    }
                }
            }
        }
        for i in 0..NDOF {
            out.mean[i] += wt * n[i];
            let mut fi = 0.0;
            for a in 0..5 {
                fi += d[a][i] * mr[a];
            }
            out.f[i] += wt * fi;
            for j in 0..NDOF {
                let mut s = 0.0;
                for a in 0..5 {
                    s += d[a][i] * md[a][j];
                }
                out.k[i][j] += wt * s;
            }
        }
    }
    out
}

/// Derivatives of the reduced variables: `∂^α q̃` for the listed
/// multi-indices `α` (the `X`-dependent parts included).
fn reduced_derivative(p: &ElementPoly<f64>, x: &[f64; 2], a: (u32, u32)) -> [f64; 6] {
    let d = |i: u32, j: u32| p.derivative(x, i, j);
    let mut q = [d(a.0 + 1, a.1), d(a.0, a.1 + 1), d(a.0 + 2, a.1), d(a.0 + 1, a.1 + 1), d(a.0, a.1 + 2), 0.0];
    match a {
        (0, 0) => {
            q[0] -= x[1];
            q[1] += x[0];
            q[5] = 1.0;
        }
        (1, 0) => q[1] += 1.0,
        (0, 1) => q[0] -= 1.0,
        _ => {}
    }
    q
}

struct Residuals<'a> {
    m: &'a [[f64; 6]; 6],
}

impl Residuals<'_> {
    fn row(&self, a: usize, q: &[f64; 6]) -> f64 {
        (0..6).map(|b| self.m[a][b] * q[b]).sum()
    }

    /// `m_AB` from the hyperstress-like row combinations.
    fn moment(&self, a: usize, b: usize, q: &[f64; 6]) -> f64 {
        match (a.min(b), a.max(b)) {
            (0, 0) => self.row(2, q),
            (1, 1) => self.row(4, q),
            _ => 0.5 * self.row(3, q),
        }
    }

    fn interior(&self, p: &ElementPoly<f64>, x: &[f64; 2]) -> f64 {
        let q1 = reduced_derivative(p, x, (1, 0));
        let q2 = reduced_derivative(p, x, (0, 1));
        let q11 = reduced_derivative(p, x, (2, 0));
        let q12 = reduced_derivative(p, x, (1, 1));
        let q22 = reduced_derivative(p, x, (0, 2));
        self.row(0, &q1) + self.row(1, &q2) - (self.moment(0, 0, &q11) + 2.0 * self.moment(0, 1, &q12) + self.moment(1, 1, &q22))
    }

    /// `(traction, double traction)` on a straight segment with outward
    /// normal `n` and tangent `t = (−n₂, n₁)`.
    fn boundary(&self, p: &ElementPoly<f64>, x: &[f64; 2], n: [f64; 2]) -> (f64, f64) {
        let t = [-n[1], n[0]];
        let q = reduced_derivative(p, x, (0, 0));
        let dq = [reduced_derivative(p, x, (1, 0)), reduced_derivative(p, x, (0, 1))];
        let mut traction = 0.0;
        let mut double = 0.0;
        for a in 0..2 {
            let div_m: f64 = (0..2).map(|b| self.moment(a, b, &dq[b])).sum();
            traction += (self.row(a, &q) - div_m) * n[a];
            for b in 0..2 {
                double += self.moment(a, b, &q) * n[a] * n[b];
                let ds: f64 = (0..2).map(|c| t[c] * self.moment(a, b, &dq[c])).sum();
                traction -= ds * n[a] * t[b];
            }
        }
        (traction, double)
    }
}

/// Residual of the interior Euler–Lagrange equation of the energy form at `x`.
pub fn interior_residual(form: &TorsionEnergyForm, p: &ElementPoly<f64>, x: &[f64; 2]) -> f64 {
    Residuals { m: &form.m }.interior(p, x)
}

/// Minimizes the stored energy per unit length over the Argyris space on
/// `mesh`, at unit twist. The warping is normalized to zero mean.
pub fn warp_solve<T: Real>(mesh: &CrossSectionMesh<T>, m: &MaterialParams<T>) -> Result<TorsionSolution<T>> {
    m.validate()?;
    let form = torsion_energy_form(m);
    form.check()?;
    let nodes: Vec<[f64; 2]> = mesh.nodes().iter().map(|p| [p[0].to_f64_lossy(), p[1].to_f64_lossy()]).collect();
    let tris = mesh.triangles();
    let edges = mesh.edges();
    let tri_edges = mesh.triangle_edges();
    let (nv, ne) = (nodes.len(), edges.len());
    let mut used = vec![false; nv];
    tris.iter().flatten().for_each(|&v| used[v] = true);
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(Error::Mesh(format!("node {v} is not used by any triangle")));
    }

    let mut edge_len = vec![0.0; ne];
    let mut edge_normal = vec![[0.0; 2]; ne];
    let mut scale_sum = vec![0.0; nv];
    let mut scale_cnt = vec![0usize; nv];
    for (e, &[a, b]) in edges.iter().enumerate() {
        let (dx, dy) = (nodes[b][0] - nodes[a][0], nodes[b][1] - nodes[a][1]);
        let l = dx.hypot(dy);
        edge_len[e] = l;
        edge_normal[e] = [dy / l, -dx / l];
        for v in [a, b] {
            scale_sum[v] += l;
            scale_cnt[v] += 1;
        }
    }
    let vertex_scale: Vec<f64> = scale_sum.iter().zip(&scale_cnt).map(|(s, &c)| s / c as f64).collect();

    let ndof = 6 * nv + ne;
    let dof_map = |t: usize| -> [usize; NDOF] {
        let mut d = [0; NDOF];
        for (k, &v) in tris[t].iter().enumerate() {
            for r in 0..6 {
                d[6 * k + r] = 6 * v + r;
            }
        }
        for k in 0..3 {
            d[18 + k] = 6 * nv + tri_edges[t][k];
        }
        d
    };

    let rule = triangle_rule(6);
    let locals: Vec<(ArgyrisElement<f64>, Local)> = (0..tris.len())
        .into_par_iter()
        .map(|t| {
            let v = tris[t].map(|i| nodes[i]);
            let g = ElementGeometry {
                vertices: v,
                vertex_scales: tris[t].map(|i| vertex_scale[i]),
                edge_normals: tri_edges[t].map(|e| edge_normal[e]),
                edge_scales: tri_edges[t].map(|e| edge_len[e]),
            };
            let el = ArgyrisElement::new(&g)?;
            let local = element_matrices(&el, &v, &form, &rule);
            Ok((el, local))
        })
        .collect::<Result<_>>()?;

    // Fill-reducing order on the node graph (vertices, then edge midpoints).
    let mut coords = nodes.clone();
    coords.extend(edges.iter().map(|&[a, b]| [0.5 * (nodes[a][0] + nodes[b][0]), 0.5 * (nodes[a][1] + nodes[b][1])]));
    let mut adjacency = vec![Vec::new(); nv + ne];
    for (t, tri) in tris.iter().enumerate() {
        let group = [tri[0], tri[1], tri[2], nv + tri_edges[t][0], nv + tri_edges[t][1], nv + tri_edges[t][2]];
        for &a in &group {
            adjacency[a].extend(group.iter().filter(|&&b| b != a));
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
        adj.dedup();
    }
    let order = nested_dissection(&coords, &adjacency, 64);
    let mut perm = vec![0usize; ndof];
    let mut next = 0;
    for node in order {
        let dofs = if node < nv { 6 * node..6 * node + 6 } else { 6 * nv + node - nv..6 * nv + node - nv + 1 };
        for d in dofs {
            perm[d] = next;
            next += 1;
        }
    }

    let pinned = 6 * tris[0][0];
    let mut triplets = Vec::with_capacity(tris.len() * NDOF * (NDOF + 1) / 2 + 1);
    let mut rhs = vec![0.0; ndof];
    let mut mean = vec![0.0; ndof];
    let mut e0 = 0.0;
    for (t, (_, local)) in locals.iter().enumerate() {
        let d = dof_map(t);
        e0 += local.e0;
        for i in 0..NDOF {
            mean[d[i]] += local.mean[i];
            if d[i] == pinned {
                continue;
            }
            rhs[perm[d[i]]] -= local.f[i];
            for j in 0..NDOF {
                if d[j] != pinned && perm[d[i]] <= perm[d[j]] {
                    triplets.push((perm[d[i]], perm[d[j]], local.k[i][j]));
                }
            }
        }
    }
    triplets.push((perm[pinned], perm[pinned], 1.0));
    let a = SymmetricCsc::from_triplets(ndof, &triplets);
    drop(triplets);
    let chol = Cholesky::factor(&a)?;
    let mut sol = rhs.clone();
    chol.solve(&mut sol);
    // ψ_min = E₀ + ½fᵀq with f = −rhs
    let energy = e0 - 0.5 * rhs.iter().zip(&sol).map(|(r, q)| r * q).sum::<f64>();
    let mut q: Vec<f64> = (0..ndof).map(|d| sol[perm[d]]).collect();
    let area = mesh.area().to_f64_lossy();
    let shift = mean.iter().zip(&q).map(|(m, q)| m * q).sum::<f64>() / area;
    for v in 0..nv {
        q[6 * v] -= shift;
    }

    let polys64: Vec<ElementPoly<f64>> = locals
        .iter()
        .enumerate()
        .map(|(t, (el, _))| {
            let d = dof_map(t);
            el.interpolant(&d.map(|i| q[i]))
        })
        .collect();

    let res = Residuals { m: &form.m };
    let mut on_boundary = vec![false; nv];
    for b in mesh.boundary() {
        on_boundary[b.nodes[0]] = true;
        on_boundary[b.nodes[1]] = true;
    }
    let mut interior_max = 0.0f64;
    let (mut interior_sq, mut interior_area) = (0.0, 0.0);
    for (t, p) in polys64.iter().enumerate() {
        if tris[t].iter().any(|&v| on_boundary[v]) {
            continue;
        }
        let v = tris[t].map(|i| nodes[i]);
        let c = [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0];
        let r = res.interior(p, &c);
        let a = mesh.triangle_area(t).to_f64_lossy();
        interior_max = interior_max.max(r.abs());
        interior_sq += r * r * a;
        interior_area += a;
    }
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    let (mut traction_max, mut double_max) = (0.0f64, 0.0f64);
    for b in mesh.boundary() {
        let [i, j] = b.nodes;
        let t = owner[&(i, j)];
        let x = [0.5 * (nodes[i][0] + nodes[j][0]), 0.5 * (nodes[i][1] + nodes[j][1])];
        let n = [b.normal[0].to_f64_lossy(), b.normal[1].to_f64_lossy()];
        let (tr, dt) = res.boundary(&polys64[t], &x, n);
        traction_max = traction_max.max(tr.abs());
        double_max = double_max.max(dt.abs());
    }
    let node_values: Vec<T> = (0..nv).map(|v| T::lit(q[6 * v])).collect();
    let diagnostics = SolveDiagnostics {
        dofs: ndof,
        factor_nnz: chol.nnz(),
        h_max: mesh.h_max().to_f64_lossy(),
        energy,
        interior_residual_max: interior_max,
        interior_residual_rms: if interior_area > 0.0 { (interior_sq / interior_area).sqrt() } else { 0.0 },
        traction_residual_max: traction_max,
        double_traction_residual_max: double_max,
        w_max_abs: (0..nv).fold(0.0, |m, v| m.max(q[6 * v].abs())),
    };
    let polys = polys64
        .iter()
        .map(|p| ElementPoly { center: p.center.map(T::lit), scale: T::lit(p.scale), coeffs: p.coeffs.map(T::lit) })
        .collect();
    let warp = FeWarp { mesh: mesh.clone(), polys, node_values };
    let mut out = TorsionSolution::assemble(T::one(), *m, T::zero(), Warp::Fe(Box::new(warp)), Section::Mesh(Box::new(mesh.clone())));
    out.k_t = stiffness_from_energy(&out, &MeshQuadrature::new(mesh))?;
    out.diagnostics = Some(diagnostics);
    Ok(out)
}
