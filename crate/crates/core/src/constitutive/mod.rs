//! Isotropic strain-gradient Hooke's law.
//!
//! The stored energy is
//! `ψ = ½ C_{ijkl}E_{ij}E_{kl} + H_{ijklp}E_{ij,k}E_{lp} + ½ G_{ijklpq}E_{ij,k}E_{lp,q}`
//! with `S = ∂ψ/∂E` and `P = ∂ψ/∂∇E`. Every contraction runs over all index
//! values.

mod blocks;

pub use blocks::{
    coupled_coordinates, gamma_blocks, gammas, sokolowski, sokolowski_fit, voigt_blocks, CoupledCoordinates,
    GammaParams, SokolowskiFit, VOIGT_BLOCKS,
};

use crate::error::{Error, Result};
use crate::tensor::{delta, levi_civita, SymMat3, SymTri3, Tensor4, Tensor5, Tensor6};
use crate::Real;

/// The seven isotropic moduli plus the hemitropic coefficient `c₈`.
///
/// `lambda`, `mu` carry stress units; the `c` moduli carry stress × length².
/// `c8` is zero for a fully isotropic material and must be opted into with
/// [`MaterialParams::hemitropic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams<T> {
    pub lambda: T,
    pub mu: T,
    pub c2: T,
    pub c3: T,
    pub c5: T,
    pub c11: T,
    pub c15: T,
    pub c8: T,
}

impl<T: Real> MaterialParams<T> {
    pub fn new(lambda: T, mu: T, c2: T, c3: T, c5: T, c11: T, c15: T) -> Self {
        Self { lambda, mu, c2, c3, c5, c11, c15, c8: T::zero() }
    }

    /// First-gradient material: all gradient moduli zero.
    pub fn classical(lambda: T, mu: T) -> Self {
        let z = T::zero();
        Self::new(lambda, mu, z, z, z, z, z)
    }

    pub fn hemitropic(self, c8: T) -> Self {
        Self { c8, ..self }
    }

    pub fn with_lambda(self, lambda: T) -> Self {
        Self { lambda, ..self }
    }

    pub fn is_hemitropic(&self) -> bool {
        self.c8 != T::zero()
    }

    /// `[c₂, c₃, c₅, c₁₁, c₁₅]`
    pub fn gradient_moduli(&self) -> [T; 5] {
        [self.c2, self.c3, self.c5, self.c11, self.c15]
    }

    fn all(&self) -> [T; 8] {
        [self.lambda, self.mu, self.c2, self.c3, self.c5, self.c11, self.c15, self.c8]
    }

    /// Euclidean norm of all eight parameters (used for relative bands).
    pub fn norm(&self) -> T {
        self.all().iter().fold(T::zero(), |s, v| s + *v * *v).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let names = ["lambda", "mu", "c2", "c3", "c5", "c11", "c15", "c8"];
        for (v, n) in self.all().iter().zip(names) {
            if !v.is_finite() {
                return Err(Error::Unsupported(format!("finite value for material parameter {n}")));
            }
        }
        Ok(())
    }

    /// Multiplies the gradient moduli (including `c₈`) by `t`.
    pub fn scale_gradient(&self, t: T) -> Self {
        Self {
            c2: self.c2 * t,
            c3: self.c3 * t,
            c5: self.c5 * t,
            c11: self.c11 * t,
            c15: self.c15 * t,
            c8: self.c8 * t,
            ..*self
        }
    }

    pub fn cast<U: Real>(&self) -> MaterialParams<U> {
        let c = |v: T| U::lit(v.to_f64_lossy());
        MaterialParams {
            lambda: c(self.lambda),
            mu: c(self.mu),
            c2: c(self.c2),
            c3: c(self.c3),
            c5: c(self.c5),
            c11: c(self.c11),
            c15: c(self.c15),
            c8: c(self.c8),
        }
    }
}

/// Referential stress and hyperstress.
#[derive(Debug, Clone, PartialEq)]
pub struct StressState<T: Real> {
    pub s: SymMat3<T>,
    pub p: SymTri3<T>,
}

/// `C_{ijkl} = λδ_{ij}δ_{kl} + μ(δ_{ik}δ_{jl} + δ_{il}δ_{jk})`
pub fn build_c<T: Real>(m: &MaterialParams<T>) -> Tensor4<T> {
    Tensor4::from_fn(|[i, j, k, l]| {
        let d = delta::<T>;
        m.lambda * d(i, j) * d(k, l) + m.mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k))
    })
}

/// The isotropic sixth-order tensor in `c₂, c₃, c₅, c₁₁, c₁₅`.
///
/// The `c₃` basis element is `δ_{ij}δ_{kq}δ_{lp}`, the contraction that
/// pairs the divergence-like traces `E_{ik,i}` and `E_{lq,q}`.
pub fn build_g<T: Real>(m: &MaterialParams<T>) -> Tensor6<T> {
    Tensor6::from_fn(|[i, j, k, l, p, q]| {
        let d = |a: usize, b: usize| if a == b { 1i32 } else { 0 };
        let t2 = d(i, j) * d(k, l) * d(p, q) + d(i, j) * d(k, p) * d(l, q) + d(i, k) * d(j, q) * d(l, p) + d(i, q) * d(j, k) * d(l, p);
        let t3 = d(i, j) * d(k, q) * d(l, p);
        let t5 = d(i, k) * d(j, l) * d(p, q) + d(i, k) * d(j, p) * d(l, q) + d(i, l) * d(j, k) * d(p, q) + d(i, p) * d(j, k) * d(l, q);
        let t11 = d(i, l) * d(j, p) * d(k, q) + d(i, p) * d(j, l) * d(k, q);
        let t15 = d(i, l) * d(j, q) * d(k, p) + d(i, p) * d(j, q) * d(k, l) + d(i, q) * d(j, l) * d(k, p) + d(i, q) * d(j, p) * d(k, l);
        let f = |n: i32| T::lit(n as f64);
        m.c2 * f(t2) + m.c3 * f(t3) + m.c5 * f(t5) + m.c11 * f(t11) + m.c15 * f(t15)
    })
}

/// `H_{ijklp} = c₈(ε_{ikl}δ_{jp} + ε_{ikp}δ_{jl} + ε_{jkl}δ_{ip} + ε_{jkp}δ_{il})`,
/// symmetric in `(i, j)` and in `(l, p)`.
pub fn build_h<T: Real>(m: &MaterialParams<T>) -> Tensor5<T> {
    Tensor5::from_fn(|[i, j, k, l, p]| {
        let e = levi_civita::<T>;
        let d = delta::<T>;
        m.c8 * (e(i, k, l) * d(j, p) + e(i, k, p) * d(j, l) + e(j, k, l) * d(i, p) + e(j, k, p) * d(i, l))
    })
}

/// Assembled elasticity tensors of one material.
#[derive(Debug, Clone)]
pub struct Hooke<T: Real> {
    pub c: Tensor4<T>,
    pub g: Tensor6<T>,
    pub h: Tensor5<T>,
    hemitropic: bool,
}

impl<T: Real> Hooke<T> {
    pub fn new(m: &MaterialParams<T>) -> Self {
        Self { c: build_c(m), g: build_g(m), h: build_h(m), hemitropic: m.is_hemitropic() }
    }

    /// `S_{ij} = C_{ijkl}E_{kl} + H_{klpij}E_{kl,p}`, `P_{ijk} = H_{ijklp}E_{lp} + G_{ijklpq}E_{lp,q}`.
    pub fn apply(&self, e: &SymMat3<T>, grad_e: &SymTri3<T>) -> StressState<T> {
        let ge = grad_e.to_array();
        let s = SymMat3::from_fn(|i, j| {
            let mut acc = T::zero();
            for k in 0..3 {
                for l in 0..3 {
                    acc += self.c.get([i, j, k, l]) * e.get(k, l);
                    if self.hemitropic {
                        for p in 0..3 {
                            acc += self.h.get([k, l, p, i, j]) * ge[k][l][p];
                        }
                    }
                }
            }
            acc
        });
        let p = SymTri3::from_fn(|i, j, k| {
            let mut acc = T::zero();
            for l in 0..3 {
                for p in 0..3 {
                    if self.hemitropic {
                        acc += self.h.get([i, j, k, l, p]) * e.get(l, p);
                    }
                    for q in 0..3 {
                        acc += self.g.get([i, j, k, l, p, q]) * ge[l][p][q];
                    }
                }
            }
            acc
        });
        StressState { s, p }
    }

    /// Stored energy by direct full-index summation of the quadratic form.
    pub fn energy(&self, e: &SymMat3<T>, grad_e: &SymTri3<T>) -> T {
        let ge = grad_e.to_array();
        let mut first = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        first += self.c.get([i, j, k, l]) * e.get(i, j) * e.get(k, l);
                    }
                }
            }
        }
        let mut coupling = T::zero();
        let mut second = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let a = ge[i][j][k];
                    for l in 0..3 {
                        for p in 0..3 {
                            coupling += self.h.get([i, j, k, l, p]) * a * e.get(l, p);
                            for q in 0..3 {
                                second += self.g.get([i, j, k, l, p, q]) * a * ge[l][p][q];
                            }
                        }
                    }
                }
            }
        }
        T::lit(0.5) * (first + second) + coupling
    }
}

pub fn apply_hooke<T: Real>(m: &MaterialParams<T>, e: &SymMat3<T>, grad_e: &SymTri3<T>) -> StressState<T> {
    Hooke::new(m).apply(e, grad_e)
}

pub fn energy<T: Real>(m: &MaterialParams<T>, e: &SymMat3<T>, grad_e: &SymTri3<T>) -> T {
    Hooke::new(m).energy(e, grad_e)
}
