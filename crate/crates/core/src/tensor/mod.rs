//! Dense second- and third-order tensor algebra in three dimensions.
//!
//! Packed storage orders are fixed and used by every serializer:
//!
//! * [`SymMat3`]: `(11, 22, 33, 23, 13, 12)`
//! * [`DevMat3`]: row-major with the `33` entry omitted
//! * [`SymTri3`]: pair `(ij)` in [`SymMat3`] order, then `k = 1, 2, 3`
//! * [`FullSymTri3`]: sorted index triples `111, 112, 113, 122, 123, 133, 222, 223, 233, 333`
//!
//! Packed forms are storage only. Every contraction sums over all index
//! values so that off-diagonal multiplicities never need special handling.

mod dense;
mod orth;
mod sym;
mod tri;

pub use dense::{Tensor, Tensor3, Tensor4, Tensor5, Tensor6};
pub use orth::{check_orthogonal, random_orthogonal};
pub use sym::{DevMat3, SymMat3, PAIRS};
pub use tri::{decompose, recompose, sym_skew, FullSymTri3, SymTri3, TRIPLES};
pub(crate) use tri::triple_index;

use crate::Real;

pub type Mat3<T> = nalgebra::Matrix3<T>;
pub type Vec3<T> = nalgebra::Vector3<T>;

/// Tolerances used by algebraic checks; callers may pass their own.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative tolerance for algebraic identities.
    pub identity: f64,
    /// Relative tolerance for round trips.
    pub round_trip: f64,
    /// Absolute tolerance on the trace of deviatoric input.
    pub traceless: f64,
    /// Absolute tolerance on `QᵀQ - I`.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity: 1e-12, round_trip: 1e-13, traceless: 1e-12, orthogonality: 1e-10 }
    }
}

/// Levi-Civita alternator `ε_ijk` (0-based indices).
#[inline]
pub fn levi_civita<T: Real>(i: usize, j: usize, k: usize) -> T {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => T::one(),
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -T::one(),
        _ => T::zero(),
    }
}

/// Kronecker delta.
#[inline]
pub fn delta<T: Real>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}
