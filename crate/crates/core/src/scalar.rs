//! Real scalar abstraction used throughout the numeric core.
//!
//! Every routine is written against [`Real`], which is implemented for `f32`
//! and `f64`. Tolerances are specified as `f64` literals and pass through
//! [`tol`], which raises them to a small multiple of the scalar's machine
//! epsilon so single-precision builds do not compare below their resolution.

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Floating-point scalar the library can be instantiated with.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Machine epsilon of the scalar, as `f64`.
    const EPS: f64;
}

impl Real for f32 {
    const EPS: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;
}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

/// Dense square complex matrix over `T`.
pub type CMat<T> = DMatrix<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an `f64` tolerance into `T`, floored at `64·eps(T)`.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    lit(x.max(64.0 * T::EPS))
}

/// Widens `x` to `f64`.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("finite scalar")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Real number `x` as a complex scalar.
#[inline]
pub fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}
