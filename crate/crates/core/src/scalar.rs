use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used by every numerical kernel in the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Euler–Mascheroni constant.
    const EULER_GAMMA: Self;

    /// Smallest absolute error a certified evaluation may be asked for.
    fn error_floor() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }
}

impl Real for f32 {
    const EULER_GAMMA: Self = 0.577_215_7;

    fn error_floor() -> Self {
        1e-6
    }
}

impl Real for f64 {
    const EULER_GAMMA: Self = 0.577_215_664_901_532_9;

    fn error_floor() -> Self {
        1e-14
    }
}
