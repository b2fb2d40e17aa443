use crate::error::Result;
use crate::Real;

use super::sym::{pair_index, PAIRS};
use super::{check_orthogonal, levi_civita, DevMat3, Mat3};

/// Sorted index triples of the packed totally symmetric order.
pub const TRIPLES: [(usize, usize, usize); 10] = [
    (0, 0, 0),
    (0, 0, 1),
    (0, 0, 2),
    (0, 1, 1),
    (0, 1, 2),
    (0, 2, 2),
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 2),
    (2, 2, 2),
];

pub(crate) fn triple_index(i: usize, j: usize, k: usize) -> usize {
    let mut s = [i, j, k];
    s.sort_unstable();
    TRIPLES.iter().position(|&(a, b, c)| [a, b, c] == s).expect("index out of range")
}

/// Third-order tensor symmetric in its first two indices, `K_ijk = K_jik`.
///
/// Holds strain gradients `E_ij,k` and hyperstresses `P_ijk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTri3<T> {
    packed: [T; 18],
}

impl<T: Real> SymTri3<T> {
    pub fn new(packed: [T; 18]) -> Self {
        Self { packed }
    }

    pub fn zero() -> Self {
        Self { packed: [T::zero(); 18] }
    }

    /// Builds from `f(i, j, k)` evaluated for `i <= j` only.
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut packed = [T::zero(); 18];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            for k in 0..3 {
                packed[3 * p + k] = f(i, j, k);
            }
        }
        Self { packed }
    }

    /// Symmetrizes an arbitrary array over its first two indices.
    pub fn sym_part(a: &[[[T; 3]; 3]; 3]) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(|i, j, k| (a[i][j][k] + a[j][i][k]) * half)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.packed[3 * pair_index(i, j) + k]
    }

    /// Sets `K_ijk` and, implicitly, `K_jik`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        self.packed[3 * pair_index(i, j) + k] = v;
    }

    pub fn packed(&self) -> &[T; 18] {
        &self.packed
    }

    pub fn to_array(&self) -> [[[T; 3]; 3]; 3] {
        let mut a = [[[T::zero(); 3]; 3]; 3];
        for (i, ai) in a.iter_mut().enumerate() {
            for (j, aij) in ai.iter_mut().enumerate() {
                for (k, v) in aij.iter_mut().enumerate() {
                    *v = self.get(i, j, k);
                }
            }
        }
        a
    }

    /// Full contraction `Σ_ijk K_ijk L_ijk` over all 27 index triples.
    pub fn inner(&self, other: &Self) -> T {
        let mut s = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += self.get(i, j, k) * other.get(i, j, k);
                }
            }
        }
        s
    }

    pub fn norm(&self) -> T {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.packed.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { packed: self.packed.map(|v| v * s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut packed = self.packed;
        for (a, b) in packed.iter_mut().zip(other.packed.iter()) {
            *a += *b;
        }
        Self { packed }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// `(rotate3 K)_ijk = Q_hi Q_mj Q_nk K_hmn`, by explicit summation.
    ///
    /// With this convention `rotate3(K, Q₁Q₂) = rotate3(rotate3(K, Q₁), Q₂)`.
    pub fn rotate3(&self, q: &Mat3<T>, tol: f64) -> Result<Self> {
        check_orthogonal(q, tol)?;
        Ok(self.rotate3_unchecked(q))
    }

    pub(crate) fn rotate3_unchecked(&self, q: &Mat3<T>) -> Self {
        Self::from_fn(|i, j, k| {
            let mut s = T::zero();
            for h in 0..3 {
                for m in 0..3 {
                    for n in 0..3 {
                        s += q[(h, i)] * q[(m, j)] * q[(n, k)] * self.get(h, m, n);
                    }
                }
            }
            s
        })
    }

    pub fn cast<U: Real>(&self) -> SymTri3<U> {
        SymTri3 { packed: self.packed.map(|v| U::lit(v.to_f64_lossy())) }
    }
}

/// Totally symmetric third-order tensor (ten components).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSymTri3<T> {
    packed: [T; 10],
}

impl<T: Real> FullSymTri3<T> {
    pub fn new(packed: [T; 10]) -> Self {
        Self { packed }
    }

    pub fn zero() -> Self {
        Self { packed: [T::zero(); 10] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.packed[triple_index(i, j, k)]
    }

    pub fn packed(&self) -> &[T; 10] {
        &self.packed
    }

    pub fn to_sym_tri(&self) -> SymTri3<T> {
        SymTri3::from_fn(|i, j, k| self.get(i, j, k))
    }

    pub fn max_abs(&self) -> T {
        self.packed.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Splits `K` into its totally symmetric part and the deviatoric generator
/// of its sym-skew part:
///
/// `K̃_ijk = (K_ijk + K_jki + K_kij)/3`, `K̂_li = ε_ljk K_ijk`.
pub fn decompose<T: Real>(k: &SymTri3<T>) -> (FullSymTri3<T>, DevMat3<T>) {
    let third = T::lit(1.0 / 3.0);
    let mut tilde = [T::zero(); 10];
    for (p, &(i, j, l)) in TRIPLES.iter().enumerate() {
        tilde[p] = (k.get(i, j, l) + k.get(j, l, i) + k.get(l, i, j)) * third;
    }
    let hat = Mat3::from_fn(|l, i| {
        let mut s = T::zero();
        for j in 0..3 {
            for m in 0..3 {
                s += levi_civita::<T>(l, j, m) * k.get(i, j, m);
            }
        }
        s
    });
    (FullSymTri3::new(tilde), DevMat3::from_matrix_unchecked(&hat))
}

/// Inverse of [`decompose`]:
/// `K_ijk = K̃_ijk + (ε_jkl K̂_li + ε_ikl K̂_lj)/3`.
pub fn recompose<T: Real>(tilde: &FullSymTri3<T>, hat: &DevMat3<T>) -> SymTri3<T> {
    let third = T::lit(1.0 / 3.0);
    SymTri3::from_fn(|i, j, k| {
        let mut s = T::zero();
        for l in 0..3 {
            s += levi_civita::<T>(j, k, l) * hat.get(l, i) + levi_civita::<T>(i, k, l) * hat.get(l, j);
        }
        tilde.get(i, j, k) + s * third
    })
}

/// Sym-skew part generated by a deviatoric tensor, `recompose(0, hat)`.
pub fn sym_skew<T: Real>(hat: &DevMat3<T>) -> SymTri3<T> {
    recompose(&FullSymTri3::zero(), hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{random_orthogonal, Tolerances};
    use proptest::prelude::*;

    fn arb_symtri() -> impl Strategy<Value = SymTri3<f64>> {
        prop::array::uniform18(-10.0f64..10.0).prop_map(SymTri3::new)
    }

    #[test]
    fn zero_decomposes_to_zero() {
        let (t, h) = decompose(&SymTri3::<f64>::zero());
        assert_eq!(t, FullSymTri3::zero());
        assert_eq!(h, DevMat3::zero());
        assert_eq!(recompose(&t, &h), SymTri3::zero());
    }

    #[test]
    fn totally_symmetric_input_has_no_hat_part() {
        let full = FullSymTri3::<f64>::new([1.0, -2.0, 0.5, 3.0, 0.25, -1.0, 2.0, 4.0, -0.75, 1.5]);
        let (t, h) = decompose(&full.to_sym_tri());
        assert_eq!(h.max_abs(), 0.0);
        for (a, b) in t.packed().iter().zip(full.packed()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn hat_of_single_mixed_component_matches_brute_force() {
        let mut k = SymTri3::<f64>::zero();
        k.set(0, 1, 2, 1.0); // K_123 = K_213 = 1
        let full = k.to_array();
        let (_, hat) = decompose(&k);
        for l in 0..3 {
            for i in 0..3 {
                let mut brute = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            if a == i {
                                brute += levi_civita::<f64>(l, b, c) * full[a][b][c];
                            }
                        }
                    }
                }
                assert_eq!(hat.get(l, i), brute, "hat[{l}][{i}]");
            }
        }
        // ε_1jk K_1jk = ε_123 K_123 = 1 and ε_2jk K_2jk = ε_213 K_213 = -1.
        assert_eq!(hat.get(0, 0), 1.0);
        assert_eq!(hat.get(1, 1), -1.0);
        assert_eq!(hat.get(2, 2), 0.0);
    }

    #[test]
    fn alternator_annihilates_totally_symmetric_tensors() {
        let full = FullSymTri3::new([0.3, 1.0, -2.0, 0.7, 5.0, 1.1, -0.2, 0.9, 2.2, -4.0]);
        for l in 0..3 {
            for i in 0..3 {
                let mut s = 0.0;
                for j in 0..3 {
                    for k in 0..3 {
                        s += levi_civita::<f64>(l, j, k) * full.get(i, j, k);
                    }
                }
                assert_eq!(s, 0.0);
            }
        }
    }

    #[test]
    fn rotate3_identity_and_inversion() {
        let k = SymTri3::new(core::array::from_fn(|p| p as f64 - 7.5));
        let tol = Tolerances::default().orthogonality;
        assert_eq!(k.rotate3(&Mat3::identity(), tol).unwrap(), k);
        assert_eq!(k.rotate3(&(-Mat3::<f64>::identity()), tol).unwrap(), k.scale(-1.0));
        let bad = Mat3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(k.rotate3(&bad, tol).is_err());
    }

    #[test]
    fn rotate3_composition_order() {
        let k = SymTri3::new(core::array::from_fn(|p| (p as f64).sin()));
        let q1 = random_orthogonal::<f64>(1, true);
        let q2 = random_orthogonal::<f64>(2, false);
        let lhs = k.rotate3_unchecked(&(q1 * q2));
        let rhs = k.rotate3_unchecked(&q1).rotate3_unchecked(&q2);
        assert!(lhs.sub(&rhs).max_abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn decompose_recompose_round_trip(k in arb_symtri()) {
            let (t, h) = decompose(&k);
            prop_assert!(h.trace().abs() < 1e-12);
            let back = recompose(&t, &h);
            prop_assert!(back.sub(&k).max_abs() <= 1e-13 * k.max_abs().max(1.0));
            let (t2, h2) = decompose(&back);
            prop_assert!(t2.to_sym_tri().sub(&t.to_sym_tri()).max_abs() <= 1e-13 * k.max_abs().max(1.0));
            prop_assert!((h2.to_matrix() - h.to_matrix()).amax() <= 1e-13 * k.max_abs().max(1.0));
        }

        #[test]
        fn parts_are_orthogonal(k in arb_symtri()) {
            let (t, h) = decompose(&k);
            let ip = t.to_sym_tri().inner(&sym_skew(&h));
            prop_assert!(ip.abs() <= 1e-12 * k.inner(&k).max(1.0));
            prop_assert!(k.inner(&k) >= 0.0);
            prop_assert_eq!(k.inner(&SymTri3::zero()), 0.0);
        }

        #[test]
        fn rotation_preserves_norm(k in arb_symtri(), seed in 0u64..1000) {
            let q = random_orthogonal::<f64>(seed, seed % 2 == 0);
            let r = k.rotate3_unchecked(&q);
            prop_assert!((r.norm() - k.norm()).abs() <= 1e-12 * k.norm().max(1.0));
        }
    }
}
