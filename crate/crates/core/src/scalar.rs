//! Numeric traits the rest of the crate is generic over.
//!
//! [`Weight`] is the minimal arithmetic needed for exact bookkeeping (point
//! masses, transport sums, walk counts) and is implemented by `f32`, `f64`
//! and the rational types from `num-rational`. [`Scalar`] adds the
//! floating-point operations needed by power iteration and Rayleigh
//! quotients.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, Num, NumCast, ToPrimitive};

/// Field-like numbers used for measures and exact sums.
pub trait Weight:
    Num
    + Clone
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Display
    + Debug
    + Sum
    + Send
    + Sync
{
}

impl<T> Weight for T where
    T: Num
        + Clone
        + PartialOrd
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Display
        + Debug
        + Sum
        + Send
        + Sync
{
}

/// Floating point scalars (`f32`, `f64`).
pub trait Scalar: Weight + Float + Copy + Default + 'static {
    fn cast<U: NumCast>(x: U) -> Self {
        <Self as NumCast>::from(x).expect("numeric cast out of range")
    }

    fn from_f64_lossy(x: f64) -> Self {
        <Self as NumCast>::from(x).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
