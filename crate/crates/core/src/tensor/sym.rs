use crate::error::{Error, Result};
use crate::Real;

use super::Mat3;

/// Index pairs of the packed symmetric order `(11, 22, 33, 23, 13, 12)`.
pub const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

#[inline]
pub(crate) fn pair_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        (0, 1) => 5,
        _ => panic!("index out of range: ({i}, {j})"),
    }
}

/// Symmetric 3×3 tensor stored as six components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat3<T> {
    packed: [T; 6],
}

impl<T: Real> SymMat3<T> {
    pub fn new(packed: [T; 6]) -> Self {
        Self { packed }
    }

    pub fn zero() -> Self {
        Self { packed: [T::zero(); 6] }
    }

    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one(), T::one())
    }

    pub fn diagonal(a: T, b: T, c: T) -> Self {
        Self { packed: [a, b, c, T::zero(), T::zero(), T::zero()] }
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym_part(a: &Mat3<T>) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(|i, j| (a[(i, j)] + a[(j, i)]) * half)
    }

    /// Builds from `f(i, j)` evaluated for `i <= j` only.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut packed = [T::zero(); 6];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            packed[p] = f(i, j);
        }
        Self { packed }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.packed[pair_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.packed[pair_index(i, j)] = v;
    }

    pub fn packed(&self) -> &[T; 6] {
        &self.packed
    }

    pub fn to_matrix(&self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.get(i, j))
    }

    pub fn trace(&self) -> T {
        self.packed[0] + self.packed[1] + self.packed[2]
    }

    /// Full double contraction `A_ij B_ij` (nine terms).
    pub fn ddot(&self, other: &Self) -> T {
        let mut s = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                s += self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    pub fn norm(&self) -> T {
        self.ddot(self).sqrt()
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

    pub fn max_abs(&self) -> T {
        self.packed.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn cast<U: Real>(&self) -> SymMat3<U> {
        SymMat3 { packed: self.packed.map(|v| U::lit(v.to_f64_lossy())) }
    }
}

/// Traceless 3×3 tensor stored as eight components.
///
/// The `33` entry is `-(a11 + a22)`, so the trace vanishes exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevMat3<T> {
    packed: [T; 8],
}

impl<T: Real> DevMat3<T> {
    pub fn new(packed: [T; 8]) -> Self {
        Self { packed }
    }

    pub fn zero() -> Self {
        Self { packed: [T::zero(); 8] }
    }

    /// Accepts a matrix whose trace is below `tol` in magnitude.
    pub fn from_matrix(a: &Mat3<T>, tol: f64) -> Result<Self> {
        let trace = a.trace();
        if trace.abs() > T::lit(tol) {
            return Err(Error::NotTraceless { trace: trace.to_f64_lossy() });
        }
        Ok(Self::from_matrix_unchecked(a))
    }

    /// Drops the `33` entry without checking the trace.
    pub(crate) fn from_matrix_unchecked(a: &Mat3<T>) -> Self {
        let mut packed = [T::zero(); 8];
        for (p, v) in packed.iter_mut().enumerate() {
            *v = a[(p / 3, p % 3)];
        }
        Self { packed }
    }

    /// Deviatoric part `A - tr(A) I / 3`.
    pub fn dev_part(a: &Mat3<T>) -> Self {
        let m = a - Mat3::identity() * (a.trace() / T::lit(3.0));
        Self::from_matrix_unchecked(&m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == 2 && j == 2 {
            -(self.packed[0] + self.packed[4])
        } else {
            self.packed[3 * i + j]
        }
    }

    pub fn packed(&self) -> &[T; 8] {
        &self.packed
    }

    pub fn to_matrix(&self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.get(i, j))
    }

    pub fn trace(&self) -> T {
        self.get(0, 0) + self.get(1, 1) + self.get(2, 2)
    }

    pub fn max_abs(&self) -> T {
        let m = self.to_matrix();
        m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}
