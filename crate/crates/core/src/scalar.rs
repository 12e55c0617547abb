//! Floating point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the simulator is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when validating normalization, Hermiticity and traces.
    fn validation_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the value is unrepresentable,
    /// which cannot happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

macro_rules! impl_real {
    ($t:ty, $tol:expr) => {
        impl Real for $t {
            #[inline]
            fn validation_tol() -> Self {
                $tol
            }
        }
    };
}

impl_real!(f64, 1e-10);
impl_real!(f32, 1e-5);

/// Complex amplitude over a [`Real`] scalar.
pub type C<R> = Complex<R>;

#[inline]
pub(crate) fn c<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub(crate) fn i_unit<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::one())
}

/// `e^{i x}`.
#[inline]
pub(crate) fn cis<R: Real>(x: R) -> C<R> {
    Complex::new(x.cos(), x.sin())
}
