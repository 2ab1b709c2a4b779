use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar used by the transform and exponential-sum kernels.
///
/// Blanket-implemented for anything float-like with the needed conversions,
/// in particular `f32` and `f64`. Exact subsystems (polynomials, residue
/// trees, integer convolutions) do not go through this trait; they stay on
/// integers.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless or best-effort conversion from `f64` constants.
    fn from_f64_c(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant must convert into the scalar type")
    }

    /// Conversion from integer term counts and moduli.
    fn from_u64_c(value: u64) -> Self {
        Self::from_u64(value).expect("u64 must convert into the scalar type")
    }

    fn pi() -> Self {
        Self::from_f64_c(std::f64::consts::PI)
    }

    fn two_pi() -> Self {
        Self::from_f64_c(std::f64::consts::TAU)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssignOps
        + AddAssign
        + SubAssign
        + MulAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn takes_real<T: Real>(x: T) -> T {
        x + T::pi()
    }

    #[test]
    fn f32_and_f64_are_real() {
        assert!((takes_real(1.0f64) - (1.0 + std::f64::consts::PI)).abs() < 1e-15);
        assert!((takes_real(1.0f32) - (1.0 + std::f32::consts::PI)).abs() < 1e-6);
    }
}
