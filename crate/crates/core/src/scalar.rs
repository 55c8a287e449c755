//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar backing the complex amplitudes: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Widening conversion used for reporting and sampling.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }

    /// Default absolute tolerance for unitarity and equality checks at this precision.
    fn default_tol() -> Self;

    /// Tolerance for normalization preconditions on caller-supplied amplitudes.
    fn norm_tol() -> Self;
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-5
    }

    fn norm_tol() -> Self {
        1e-4
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-12
    }

    fn norm_tol() -> Self {
        1e-10
    }
}

/// `e^{i·phase}`.
#[inline]
pub fn cis<T: Real>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}
