//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the calculus is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Relative spacing below which breakpoints are considered coincident.
    fn merge_tol() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    #[inline]
    fn merge_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    #[inline]
    fn merge_tol() -> Self {
        1e-5
    }
}

/// Lossy conversion for diagnostics.
#[inline]
pub(crate) fn diag<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
