//! Packed block forms of the gradient law: Voigt-type blocks, the γ
//! parameterization, coupled coordinates and the couple-stress special case.

use nalgebra::{Matrix3, SMatrix};

use crate::tensor::{decompose, recompose, triple_index, DevMat3, FullSymTri3, SymTri3};
use crate::Real;

use super::MaterialParams;

/// Row/column index triples `(i, j, k)` (0-based) of the four Voigt blocks:
/// three 5×5 blocks sharing the matrix `G₁`, then the 3×3 block of `G₂`.
/// Rows label `P_{ijk}`, columns the strict strain-gradient component
/// `E_{ij,k}` with the same triple.
pub const VOIGT_BLOCKS: ([[(usize, usize, usize); 5]; 3], [(usize, usize, usize); 3]) = (
    [
        [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 0), (2, 2, 0)],
        [(1, 1, 1), (0, 1, 0), (1, 2, 2), (0, 0, 1), (2, 2, 1)],
        [(2, 2, 2), (0, 2, 0), (1, 2, 1), (0, 0, 2), (1, 1, 2)],
    ],
    [(0, 1, 2), (0, 2, 1), (1, 2, 0)],
);

/// The five moduli of the decoupled form of the gradient law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams<T> {
    pub gamma1: T,
    pub gamma2: T,
    pub gamma3: T,
    pub gamma4: T,
    pub gamma5: T,
}

impl<T: Real> GammaParams<T> {
    pub fn as_array(&self) -> [T; 5] {
        [self.gamma1, self.gamma2, self.gamma3, self.gamma4, self.gamma5]
    }
}

pub fn gammas<T: Real>(m: &MaterialParams<T>) -> GammaParams<T> {
    let l = T::lit;
    GammaParams {
        gamma1: l(2.0) * (m.c11 + l(2.0) * m.c15) + l(4.0) * m.c2 + m.c3 + l(4.0) * m.c5,
        gamma2: l(4.0) * (m.c11 + l(2.0) * m.c15),
        gamma3: l(2.0) / l(3.0) * (l(4.0) * m.c5 - l(2.0) * m.c2 - l(2.0) * m.c3),
        gamma4: l(8.0) / l(9.0) * (l(3.0) * m.c11 - l(3.0) * m.c15 - l(4.0) * m.c2 + l(2.0) * m.c3 + l(2.0) * m.c5),
        gamma5: l(4.0) / l(9.0) * (m.c11 - m.c15),
    }
}

/// The matrices `G₁` (5×5) and `G₂` (3×3) in the orderings of
/// [`VOIGT_BLOCKS`].
///
/// They are the Hessian of the energy with respect to the strict
/// components, so entry `(a, b)` is `m_a m_b G_{ab}` where `m = 2` for an
/// off-diagonal pair and `1` otherwise; row `a` of `G₁ e` equals `m_a P_a`.
pub fn voigt_blocks<T: Real>(m: &MaterialParams<T>) -> (SMatrix<T, 5, 5>, Matrix3<T>) {
    let l = T::lit;
    let (c2, c3, c5, c11, c15) = (m.c2, m.c3, m.c5, m.c11, m.c15);
    let a = l(4.0) * c2 + c3 + l(4.0) * c5 + l(2.0) * c11 + l(4.0) * c15;
    let b = l(2.0) * c2 + l(4.0) * c5;
    let d = l(2.0) * c2 + c3;
    let e = l(4.0) * (c5 + c11 + c15);
    let f = l(4.0) * c5;
    let g = l(2.0) * c2 + l(4.0) * c15;
    let h = l(2.0) * c2;
    let k = c3 + l(2.0) * c11;
    #[rustfmt::skip]
    let g1 = SMatrix::<T, 5, 5>::from_row_slice(&[
        a, b, b, d, d,
        b, e, f, g, h,
        b, f, e, h, g,
        d, g, h, k, c3,
        d, h, g, c3, k,
    ]);
    let (p, q) = (l(4.0) * c11, l(4.0) * c15);
    let g2 = Matrix3::new(p, q, q, q, p, q, q, q, p);
    (g1, g2)
}

/// `Γ₁` and `Γ₂`.
pub fn gamma_blocks<T: Real>(g: &GammaParams<T>) -> (Matrix3<T>, Matrix3<T>) {
    let l = T::lit;
    let (g1, g2, g3, g4, g5) = (g.gamma1, g.gamma2, g.gamma3, g.gamma4, g.gamma5);
    let off = l(2.0) * g1 - g2;
    let gamma1 = Matrix3::new(g1, off, g3, off, l(4.0) * g1 + g2, l(2.0) * g3, g3, l(2.0) * g3, g4);
    let two = l(2.0) * g5;
    let gamma2 = Matrix3::new(two, -g5, -g5, -g5, two, -g5, -g5, -g5, two);
    (gamma1, gamma2)
}

/// Gradient moduli of the couple-stress law with shear modulus `mu`,
/// characteristic length `ell` and coupling ratio `eta`. `λ` is left at zero
/// (see [`MaterialParams::with_lambda`]).
pub fn sokolowski<T: Real>(mu: T, eta: T, ell: T) -> MaterialParams<T> {
    let l2 = ell * ell;
    let a = l2 * eta * mu;
    let base = l2 * (eta + T::one()) * mu;
    let half = T::lit(0.5);
    MaterialParams::new(T::zero(), mu, a, -(a + a), -(a * half), base, -(base * half))
}

/// Couple-stress parameters recovered from a material with
/// `γ₁ = γ₂ = γ₃ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SokolowskiFit<T> {
    pub mu: T,
    pub eta: T,
    pub ell_sq: T,
}

/// Inverts the couple-stress reduction:
/// `ℓ²μ = (γ₄/4 + 3γ₅/2)/2`, `η = (3γ₅/2 − γ₄/4)/(γ₄/4 + 3γ₅/2)`.
/// Returns `None` unless `γ₁, γ₂, γ₃` vanish to `rel_tol` relative to the
/// largest γ, or when `μ` or `ℓ²μ` is zero.
pub fn sokolowski_fit<T: Real>(m: &MaterialParams<T>, rel_tol: f64) -> Option<SokolowskiFit<T>> {
    let g = gammas(m);
    let scale = g.as_array().iter().fold(T::zero(), |s, v| s.max(v.abs()));
    let tol = T::lit(rel_tol) * scale;
    if scale == T::zero() || g.gamma1.abs() > tol || g.gamma2.abs() > tol || g.gamma3.abs() > tol {
        return None;
    }
    let q4 = g.gamma4 * T::lit(0.25);
    let q5 = g.gamma5 * T::lit(1.5);
    let sum = q4 + q5;
    if m.mu == T::zero() || sum == T::zero() {
        return None;
    }
    Some(SokolowskiFit { mu: m.mu, eta: (q5 - q4) / sum, ell_sq: sum * T::lit(0.5) / m.mu })
}

/// The 19 scalar combinations (18 independent) of the parts `K̃`, `K̂` of a
/// strain gradient or hyperstress that decouple the isotropic law.
///
/// For `a` in `1, 2, 3` with `(a, b, c)` cyclic:
/// `triples[a] = (K̃_{aaa}, K̃_{abb} + K̃_{acc}, K̂_{cb} − K̂_{bc})`,
/// `tilde_differences[a] = K̃_{abb} − K̃_{acc}`,
/// `hat_sums[a] = K̂_{cb} + K̂_{bc}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledCoordinates<T> {
    pub triples: [[T; 3]; 3],
    pub tilde_differences: [T; 3],
    pub hat_sums: [T; 3],
    pub hat_diagonal: [T; 3],
    pub tilde_123: T,
}

const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

pub fn coupled_coordinates<T: Real>(k: &SymTri3<T>) -> CoupledCoordinates<T> {
    let (t, h) = decompose(k);
    let mut out = CoupledCoordinates {
        triples: [[T::zero(); 3]; 3],
        tilde_differences: [T::zero(); 3],
        hat_sums: [T::zero(); 3],
        hat_diagonal: [h.get(0, 0), h.get(1, 1), h.get(2, 2)],
        tilde_123: t.get(0, 1, 2),
    };
    for (n, &(a, b, c)) in CYCLIC.iter().enumerate() {
        out.triples[n] = [t.get(a, a, a), t.get(a, b, b) + t.get(a, c, c), h.get(c, b) - h.get(b, c)];
        out.tilde_differences[n] = t.get(a, b, b) - t.get(a, c, c);
        out.hat_sums[n] = h.get(c, b) + h.get(b, c);
    }
    out
}

impl<T: Real> CoupledCoordinates<T> {
    /// Rebuilds the tensor; the trace of `hat_diagonal` is discarded.
    pub fn to_tensor(&self) -> SymTri3<T> {
        let half = T::lit(0.5);
        let mut tilde = [T::zero(); 10];
        let mut hat = [[T::zero(); 3]; 3];
        let mut put = |i: usize, j: usize, k: usize, v: T| tilde[triple_index(i, j, k)] = v;
        for (n, &(a, b, c)) in CYCLIC.iter().enumerate() {
            let [aaa, sum, skew] = self.triples[n];
            let diff = self.tilde_differences[n];
            put(a, a, a, aaa);
            put(a, b, b, half * (sum + diff));
            put(a, c, c, half * (sum - diff));
            hat[c][b] = half * (self.hat_sums[n] + skew);
            hat[b][c] = half * (self.hat_sums[n] - skew);
        }
        put(0, 1, 2, self.tilde_123);
        let [d1, d2, d3] = self.hat_diagonal;
        let mean = (d1 + d2 + d3) / T::lit(3.0);
        hat[0][0] = d1 - mean;
        hat[1][1] = d2 - mean;
        hat[2][2] = d3 - mean;
        let hat = DevMat3::new([hat[0][0], hat[0][1], hat[0][2], hat[1][0], hat[1][1], hat[1][2], hat[2][0], hat[2][1]]);
        recompose(&FullSymTri3::new(tilde), &hat)
    }

    /// Image of these strain-gradient coordinates under the isotropic law,
    /// i.e. the coordinates of `P` for `∇E` with these coordinates:
    /// `p = diag(1, ⅓, 3/2) Γ₁ diag(1, ½, ½) e` on each triple, `γ₂/2` on
    /// the tilde differences and on `K̃₁₂₃`, `9γ₅/2` on the hat sums and
    /// `(3/2)Γ₂` on the hat diagonal.
    pub fn respond(&self, g: &GammaParams<T>) -> Self {
        let (gamma1, gamma2) = gamma_blocks(g);
        let l = T::lit;
        let left = Matrix3::from_diagonal(&nalgebra::Vector3::new(l(1.0), l(1.0) / l(3.0), l(1.5)));
        let right = Matrix3::from_diagonal(&nalgebra::Vector3::new(l(1.0), l(0.5), l(0.5)));
        let map = left * gamma1 * right;
        let half_g2 = g.gamma2 * l(0.5);
        let mut out = *self;
        for n in 0..3 {
            let v = map * nalgebra::Vector3::from(self.triples[n]);
            out.triples[n] = [v[0], v[1], v[2]];
            out.tilde_differences[n] = half_g2 * self.tilde_differences[n];
            out.hat_sums[n] = g.gamma5 * l(4.5) * self.hat_sums[n];
        }
        let d = gamma2 * nalgebra::Vector3::from(self.hat_diagonal) * l(1.5);
        out.hat_diagonal = [d[0], d[1], d[2]];
        out.tilde_123 = half_g2 * self.tilde_123;
        out
    }
}
