//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra as na;
use num_traits as nt;

/// Floating point types the library is instantiated with (`f32`, `f64`).
///
/// Built on [`nalgebra::RealField`] so that small dense factorizations
/// (symmetric eigen, LU, Cholesky) are available generically; the
/// `num-traits` conversions are used for literals and for I/O.
pub trait Real:
    na::RealField
    + Copy
    + nt::FromPrimitive
    + nt::ToPrimitive
    + nt::FloatConst
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Infallible for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Machine epsilon of the type.
    #[inline]
    fn eps() -> Self {
        Self::default_epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(<f64 as Real>::lit(0.25), 0.25);
        assert_eq!(<f32 as Real>::lit(0.25), 0.25f32);
        assert_eq!(<f64 as Real>::eps(), f64::EPSILON);
    }
}
