//! Scalar abstraction for the math core.

use std::fmt::{Debug, Display};

/// Floating-point scalar the energy-space math is generic over: `f32` or `f64`.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + Debug + Display + Default + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lossy cast from an `f64` literal into the working scalar.
#[inline]
pub fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}
