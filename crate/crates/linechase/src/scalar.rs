use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Scalar type the whole library is generic over: `f32`, `f64`, or anything
/// else that behaves like an IEEE float. The crate-root aliases fix `f64`,
/// which is what the stated tolerances are calibrated for.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static> Scalar for T {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn real<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("constant not representable in scalar type")
}

/// `1/sqrt(2)`, the drift coefficient.
#[inline]
pub(crate) fn inv_sqrt2<S: Scalar>() -> S {
    S::one() / real::<S>(2.0).sqrt()
}

/// `sqrt(3)`, the potential-function weight.
#[inline]
pub(crate) fn sqrt3<S: Scalar>() -> S {
    real::<S>(3.0).sqrt()
}
