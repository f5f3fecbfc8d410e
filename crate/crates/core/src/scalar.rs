use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar underlying every complex matrix in the crate.
///
/// Implemented for `f32` and `f64`. All contract tolerances are written for
/// double precision; [`Real::tol`] widens them to a few ulps of the actual
/// type so that single-precision callers get meaningful checks.
pub trait Real:
    Float
    + NumAssign
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance of `x`, floored at 128 machine epsilons.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(128.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for a complex number over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cz<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// Unit-modulus phase of `z`; `1` for `z == 0`.
#[inline]
pub(crate) fn phase<T: Real>(z: C<T>) -> C<T> {
    let r = z.norm();
    if r == T::zero() {
        cone()
    } else {
        z / r
    }
}

/// `sqrt(a^2 + b^2)` without destructive overflow or underflow.
#[inline]
pub(crate) fn pythag<T: Real>(a: T, b: T) -> T {
    a.hypot(b)
}
