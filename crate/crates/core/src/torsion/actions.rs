//! Loads carried by the bases of the twisted bar, global statics, and the
//! elementary strain-gradient states of a cube.

use super::quadrature::{AnnulusQuadrature, Quadrature2D};
use super::{Section, TorsionSolution, Warp};
use crate::constitutive::{Hooke, MaterialParams};
use crate::error::{Error, Result};
use crate::tensor::{levi_civita, SymMat3, SymTri3, Tensor3};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadedBase {
    /// `X₃ = 0`, outward normal `−e₃`.
    Bottom,
    /// `X₃ = L`, outward normal `+e₃`.
    Top,
}

/// Surface tractions `t`, double forces `τ` and edge line forces `f`
/// applied on one base of the hollow circular bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryActions<T> {
    pub base: LoadedBase,
    pub x3: T,
    pub theta: T,
    pub mu: T,
    /// `c₁₁ − c₁₅`.
    pub edge_modulus: T,
    pub r_int: T,
    pub r_ext: T,
}

impl<T: Real> BoundaryActions<T> {
    fn sign(&self) -> T {
        match self.base {
            LoadedBase::Top => T::one(),
            LoadedBase::Bottom => -T::one(),
        }
    }

    pub fn normal(&self) -> [T; 3] {
        [T::zero(), T::zero(), self.sign()]
    }

    /// `t = ±(−μΘX₂, μΘX₁, 0)`.
    pub fn traction(&self, x: &[T; 2]) -> [T; 3] {
        let k = self.sign() * self.mu * self.theta;
        [-k * x[1], k * x[0], T::zero()]
    }

    pub fn double_force(&self, _x: &[T; 2]) -> [T; 3] {
        [T::zero(); 3]
    }

    /// `f = ±Θ(c₁₁ − c₁₅)(−sin ϑ, cos ϑ, 0)`, `ϑ` the angle of the outward
    /// normal of the section at the edge point.
    pub fn edge_force(&self, normal_angle: T) -> [T; 3] {
        let k = self.sign() * self.theta * self.edge_modulus;
        [-k * normal_angle.sin(), k * normal_angle.cos(), T::zero()]
    }

    /// The same loading mirrored onto the opposite base at `x3`.
    pub fn reaction(&self, x3: T) -> Self {
        let base = match self.base {
            LoadedBase::Top => LoadedBase::Bottom,
            LoadedBase::Bottom => LoadedBase::Top,
        };
        Self { base, x3, ..*self }
    }

    /// Edge circles as `(radius, +1 outer | −1 inner)`.
    fn circles(&self) -> Vec<(T, T)> {
        let mut c = vec![(self.r_ext, T::one())];
        if self.r_int > T::zero() {
            c.push((self.r_int, -T::one()));
        }
        c
    }
}

/// Actions on `𝓑_L` (at `X₃ = 1`) of the closed-form annulus solution.
pub fn basis_actions<T: Real>(sol: &TorsionSolution<T>) -> Result<BoundaryActions<T>> {
    let (r_int, r_ext) = match (&sol.section, &sol.warp) {
        (Section::Annulus { r_int, r_ext }, Warp::Zero) => (*r_int, *r_ext),
        _ => return Err(Error::Unsupported("the closed-form annulus solution".into())),
    };
    Ok(BoundaryActions {
        base: LoadedBase::Top,
        x3: T::one(),
        theta: sol.theta,
        mu: sol.material.mu,
        edge_modulus: sol.material.c11 - sol.material.c15,
        r_int,
        r_ext,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResidual<T> {
    pub force: [T; 3],
    pub moment: [T; 3],
}

impl<T: Real> EquilibriumResidual<T> {
    pub fn force_norm(&self) -> T {
        self.force.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt()
    }

    pub fn moment_norm(&self) -> T {
        self.moment.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt()
    }
}

fn cross<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Resultant force `Σ(∫t + ∮f)` and moment `Σ(∫x×t + ∫ε_kαβ τ_α m_β + ∮x×f)`
/// about the origin of all the given actions (no body forces).
pub fn global_equilibrium_check<T: Real>(actions: &[BoundaryActions<T>]) -> EquilibriumResidual<T> {
    let mut force = [T::zero(); 3];
    let mut moment = [T::zero(); 3];
    let n_line = 64;
    for a in actions {
        let m = a.normal();
        let rule = AnnulusQuadrature { r_int: a.r_int, r_ext: a.r_ext, n_radial: 8, n_angular: n_line };
        for p in rule.points() {
            let x = [p.x[0], p.x[1], a.x3];
            let t = a.traction(&p.x);
            let tau = a.double_force(&p.x);
            let xt = cross(&x, &t);
            for k in 0..3 {
                force[k] += p.weight * t[k];
                let mut couple = T::zero();
                for al in 0..3 {
                    for be in 0..3 {
                        couple += levi_civita::<T>(k, al, be) * tau[al] * m[be];
                    }
                }
                moment[k] += p.weight * (xt[k] + couple);
            }
        }
        let dphi = T::two_pi() / T::lit(n_line as f64);
        for (r, side) in a.circles() {
            for j in 0..n_line {
                let phi = dphi * T::lit(j as f64);
                let angle = if side > T::zero() { phi } else { phi + T::pi() };
                let x = [r * phi.cos(), r * phi.sin(), a.x3];
                let f = a.edge_force(angle);
                let xf = cross(&x, &f);
                let w = r * dphi;
                for k in 0..3 {
                    force[k] += w * f[k];
                    moment[k] += w * xf[k];
                }
            }
        }
    }
    EquilibriumResidual { force, moment }
}

/// One of the 18 basis tensors `C` (symmetric in the last two indices) for
/// the elementary states: `n = 6i + p` sets `C_{i j k} = C_{i k j} = 1` for
/// the `p`-th index pair `(j, k)` in packed order.
pub fn elementary_basis<T: Real>(n: usize) -> Result<Tensor3<T>> {
    if n >= 18 {
        return Err(Error::Unsupported(format!("a basis index below 18, got {n}")));
    }
    let (i, (j, k)) = (n / 6, crate::tensor::PAIRS[n % 6]);
    let mut c = Tensor3::zeros();
    c.set([i, j, k], T::one());
    c.set([i, k, j], T::one());
    Ok(c)
}

/// The cube `[−a, a]³` under `u_i = C_ijk X_j X_k / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryState<T: Real> {
    pub c: Tensor3<T>,
    pub half_width: T,
    /// Constant strain gradient, the part of `C` symmetric in its first two indices.
    pub grad_eps: SymTri3<T>,
    pub p: SymTri3<T>,
    /// Stress at the centre of the cube (from the coupling moduli only).
    pub s_center: SymMat3<T>,
    /// `(outward normal, τ)` for the six faces, `τ_α = P_αjk n_j n_k`.
    pub face_double_forces: Vec<([i8; 3], [T; 3])>,
    /// `(normal a, normal b, f)` for the twelve edges,
    /// `f_α = P_αjk(n^a_j n^b_k + n^b_j n^a_k)`.
    pub edge_forces: Vec<([i8; 3], [i8; 3], [T; 3])>,
    /// Volume average of `ε` over the cube.
    pub mean_strain: SymMat3<T>,
    /// `P_ijk,k` by central differences, the hyperstress part of the face
    /// tractions.
    pub hyperstress_divergence: [[T; 3]; 3],
}

impl<T: Real> ElementaryState<T> {
    pub fn displacement(&self, x: &[T; 3]) -> [T; 3] {
        let mut u = [T::zero(); 3];
        for (i, ui) in u.iter_mut().enumerate() {
            for j in 0..3 {
                for k in 0..3 {
                    *ui += self.c.get([i, j, k]) * x[j] * x[k];
                }
            }
            *ui *= T::lit(0.5);
        }
        u
    }

    pub fn strain(&self, x: &[T; 3]) -> SymMat3<T> {
        SymMat3::from_fn(|i, j| (0..3).fold(T::zero(), |s, k| s + self.grad_eps.get(i, j, k) * x[k]))
    }
}

pub fn elementary_cube_state<T: Real>(c: &Tensor3<T>, m: &MaterialParams<T>, half_width: T) -> Result<ElementaryState<T>> {
    let deviation = c.asymmetry([0, 2, 1]);
    if deviation > T::lit(1e-12) * (T::one() + c.max_abs()) {
        return Err(Error::NotSymmetric { deviation: deviation.to_f64_lossy() });
    }
    if !(half_width > T::zero() && half_width.is_finite()) {
        return Err(Error::Geometry(format!("cube half-width must be positive, got {half_width}")));
    }
    let hooke = Hooke::new(m);
    let half = T::lit(0.5);
    let grad_eps = SymTri3::from_fn(|i, j, k| half * (c.get([i, j, k]) + c.get([j, i, k])));
    let center = hooke.apply(&SymMat3::zero(), &grad_eps);
    let p = center.p;

    let mut face_double_forces = Vec::with_capacity(6);
    let mut normals = Vec::with_capacity(6);
    for axis in 0..3 {
        for sign in [1i8, -1] {
            let mut n = [0i8; 3];
            n[axis] = sign;
            normals.push(n);
            let tau = std::array::from_fn(|al| p.get(al, axis, axis));
            face_double_forces.push((n, tau));
        }
    }
    let mut edge_forces = Vec::with_capacity(12);
    for (ia, na) in normals.iter().enumerate() {
        for nb in normals.iter().skip(ia + 1) {
            let (ax, bx) = (na.iter().position(|v| *v != 0).unwrap(), nb.iter().position(|v| *v != 0).unwrap());
            if ax == bx {
                continue;
            }
            let (sa, sb) = (T::lit(na[ax] as f64), T::lit(nb[bx] as f64));
            let f = std::array::from_fn(|al| sa * sb * (p.get(al, ax, bx) + p.get(al, bx, ax)));
            edge_forces.push((*na, *nb, f));
        }
    }

    // Two-point Gauss rule per axis integrates the linear strain exactly.
    let g = half_width / T::lit(3.0).sqrt();
    let mut mean_strain = SymMat3::zero();
    for sx in [-g, g] {
        for sy in [-g, g] {
            for sz in [-g, g] {
                let x = [sx, sy, sz];
                let e = SymMat3::from_fn(|i, j| (0..3).fold(T::zero(), |s, k| s + grad_eps.get(i, j, k) * x[k]));
                mean_strain = mean_strain.add(&e.scale(T::lit(0.125)));
            }
        }
    }

    let h = half_width * T::lit(1e-3);
    let p_at = |x: &[T; 3]| {
        let e = SymMat3::from_fn(|i, j| (0..3).fold(T::zero(), |s, k| s + grad_eps.get(i, j, k) * x[k]));
        hooke.apply(&e, &grad_eps).p
    };
    let mut hyperstress_divergence = [[T::zero(); 3]; 3];
    for k in 0..3 {
        let (mut fwd, mut bwd) = ([T::zero(); 3], [T::zero(); 3]);
        fwd[k] = h;
        bwd[k] = -h;
        let (pf, pb) = (p_at(&fwd), p_at(&bwd));
        for (i, row) in hyperstress_divergence.iter_mut().enumerate() {
            for (j, d) in row.iter_mut().enumerate() {
                *d += (pf.get(i, j, k) - pb.get(i, j, k)) / (T::lit(2.0) * h);
            }
        }
    }

    Ok(ElementaryState {
        c: c.clone(),
        half_width,
        grad_eps,
        p,
        s_center: center.s,
        face_double_forces,
        edge_forces,
        mean_strain,
        hyperstress_divergence,
    })
}
