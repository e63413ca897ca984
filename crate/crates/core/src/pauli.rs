//! Pauli matrices and small operator builders.

use crate::scalar::{lit, re, CMat, Real};
use num_complex::Complex;

pub fn x<T: Real>() -> CMat<T> {
    let (o, l) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
    CMat::from_row_slice(2, 2, &[o, l, l, o])
}

pub fn y<T: Real>() -> CMat<T> {
    let o = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    CMat::from_row_slice(2, 2, &[o, -i, i, o])
}

pub fn z<T: Real>() -> CMat<T> {
    let (o, l) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
    CMat::from_row_slice(2, 2, &[l, o, o, -l])
}

/// `I/2 + r·σ` for a Bloch-type vector `r`.
pub fn bloch_state<T: Real>(r: [T; 3]) -> CMat<T> {
    let half = lit::<T>(0.5);
    CMat::identity(2, 2) * re(half) + x::<T>() * re(r[0]) + y::<T>() * re(r[1]) + z::<T>() * re(r[2])
}

/// Kronecker product.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

/// Embeds a single-site operator at `site` of an `n`-site chain of qubits.
/// Site 0 is the most significant tensor factor.
pub fn site_operator<T: Real>(op: &CMat<T>, site: usize, n: usize) -> CMat<T> {
    let mut out = CMat::identity(1, 1);
    for s in 0..n {
        out = if s == site { kron(&out, op) } else { kron(&out, &CMat::identity(2, 2)) };
    }
    out
}
