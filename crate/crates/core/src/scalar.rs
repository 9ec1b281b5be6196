//! Floating-point abstraction used throughout the crate.
//!
//! All numerical kernels are generic over [`Scalar`], which is implemented
//! for `f32` and `f64`. The trait bundles the `num-traits` float surface
//! with conversion helpers and the two random draws the samplers need, so
//! generic code never has to name `rand` distribution types in its bounds.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::float::{Float, FloatConst};
use num_traits::NumAssign;
use rand::Rng;

/// Real scalar type for the numerical kernels (`f32` or `f64`).
///
/// `NumAssign` is part of the bundle so that `num_complex::Complex<T>`
/// gets its compound-assignment operators.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn from_f64(v: f64) -> Self;

    /// Widens to `f64` (exact for both implementors).
    fn to_f64(self) -> f64;

    /// Converts a count into this scalar type.
    fn from_usize(n: usize) -> Self;

    /// Draws one standard normal variate.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draws one uniform variate from `[0, 1)`.
    fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn from_usize(n: usize) -> Self {
                n as $t
            }

            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.sample::<$t, _>(rand_distr::StandardNormal)
            }

            #[inline]
            fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.gen::<$t>()
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);
