//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar used for every matrix entry and entropy value.
///
/// Implemented for `f32` and `f64`. Tolerances in this crate are stated for
/// `f64`; [`tol`] widens them to a small multiple of machine epsilon when the
/// scalar cannot resolve the requested value.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Tolerance `t` clamped from below to `64 * epsilon` of the scalar type.
#[inline]
pub fn tol<T: Real>(t: f64) -> T {
    T::lit(t).max(T::epsilon() * T::lit(64.0))
}

/// Base-2 logarithm with the `0 * log 0 = 0` convention folded in: returns
/// `-p log2 p`, or zero when `p <= 0`.
#[inline]
pub fn neg_p_log2_p<T: Real>(p: T) -> T {
    if p > T::zero() {
        -p * p.log2()
    } else {
        T::zero()
    }
}
