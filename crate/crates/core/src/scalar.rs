//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the physics is generic over (`f32` or `f64`).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Structural tolerance for Hermiticity, trace and unitarity checks at
    /// this precision.
    fn structural_tol() -> Self;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f64 {
    #[inline]
    fn structural_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    #[inline]
    fn structural_tol() -> Self {
        1e-5
    }
}
