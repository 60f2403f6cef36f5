//! Scalar abstraction: every algorithm in this crate is generic over a
//! floating-point type through [`Real`].

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion of an `f64` constant.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// Conversion of a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    /// Widening back to `f64`, for error reports.
    fn lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}
