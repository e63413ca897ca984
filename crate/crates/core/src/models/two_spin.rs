//! Two coupled spins in antiparallel or parallel local fields.
//!
//! With `H0 = 2J s1·s2` and fields `B1`, `B2` along `z`, the spinor
//! components `(v1, v4)` and `(v2, v3)` decouple. Opposed fields
//! (`B1 = −B2 = B`) drive the `(v2, v3)` block, which reduces to the
//! two-level battery `H0 = Jσx − J/2`, `V = 2Bσz`.

use crate::closed::ClosedBattery;
use crate::error::{Error, Result};
use crate::pauli;
use crate::scalar::{lit, re, CMat, Real};
use num_complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinParams<T: Real> {
    pub j: T,
    pub b: T,
    /// Bloch components of the reduced state `ρ0 = I/2 + ε·σ`.
    pub eps: [T; 3],
}

impl<T: Real> TwoSpinParams<T> {
    pub fn new(j: T, b: T, eps: [T; 3]) -> Result<Self> {
        let p = Self { j, b, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.b.is_finite() && self.eps.iter().all(|e| e.is_finite())) {
            return Err(Error::InvalidParameter("two-spin parameters must be finite".into()));
        }
        let e2 = self.eps_norm_sqr();
        if e2 > lit::<T>(0.25 + 1e-12) {
            return Err(Error::InvalidParameter(format!("|eps|^2 = {e2} exceeds 1/4")));
        }
        Ok(())
    }

    fn eps_norm_sqr(&self) -> T {
        self.eps.iter().fold(T::zero(), |s, &e| s + e * e)
    }

    /// `a = sqrt(J² + 4B²)`.
    pub fn a(&self) -> T {
        (self.j * self.j + lit::<T>(4.0) * self.b * self.b).sqrt()
    }

    /// `(2Bε1 − Jε3)² + a²ε2²`, the numerator of the coherence of `ρ0` in
    /// the basis of the reduced evolution operator.
    fn coherence_numerator(&self) -> T {
        let [e1, e2, e3] = self.eps;
        let d = lit::<T>(2.0) * self.b * e1 - self.j * e3;
        d * d + self.a().powi(2) * e2 * e2
    }
}

/// Field orientation of the quench.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// `B1 = B2 = B` (protocol 1): the field commutes with `H0`.
    Aligned,
    /// `B1 = −B2 = B` (protocol 2): the reduced two-level battery.
    Opposed,
}

impl TryFrom<u8> for Protocol {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Protocol::Aligned),
            2 => Ok(Protocol::Opposed),
            _ => Err(Error::InvalidParameter(format!("protocol must be 1 or 2, got {v}"))),
        }
    }
}

fn reduced_state<T: Real>(p: &TwoSpinParams<T>) -> CMat<T> {
    pauli::bloch_state(p.eps)
}

/// Builds the battery for the given protocol.
///
/// `Opposed` returns the reduced two-level battery. `Aligned` returns the
/// full 4-level battery in the basis `(v1, v2, v3, v4)`, with the reduced
/// state placed on the `(v2, v3)` block.
pub fn two_spin_build<T: Real>(p: &TwoSpinParams<T>, protocol: Protocol) -> Result<ClosedBattery<T>> {
    p.validate()?;
    let half_j = p.j * lit::<T>(0.5);
    match protocol {
        Protocol::Opposed => {
            let h0 = pauli::x::<T>() * re(p.j) - CMat::identity(2, 2) * re(half_j);
            let v = pauli::z::<T>() * re(lit::<T>(2.0) * p.b);
            ClosedBattery::new(h0, v, reduced_state(p))
        }
        Protocol::Aligned => {
            let zero = Complex::new(T::zero(), T::zero());
            let mut h0 = CMat::from_element(4, 4, zero);
            h0[(0, 0)] = re(half_j);
            h0[(1, 1)] = re(-half_j);
            h0[(2, 2)] = re(-half_j);
            h0[(3, 3)] = re(half_j);
            h0[(1, 2)] = re(p.j);
            h0[(2, 1)] = re(p.j);
            let b_plus = lit::<T>(2.0) * p.b;
            let mut v = CMat::from_element(4, 4, zero);
            v[(0, 0)] = re(b_plus);
            v[(3, 3)] = re(-b_plus);
            let mut rho0 = CMat::from_element(4, 4, zero);
            rho0.view_mut((1, 1), (2, 2)).copy_from(&reduced_state(p));
            ClosedBattery::new(h0, v, rho0)
        }
    }
}

/// Work of the reduced battery,
/// `W(t) = 4BJ[(2Jε3 − 4Bε1) sin²(at)/a² − 2ε2 sin(at)cos(at)/a]`.
pub fn two_spin_work<T: Real>(p: &TwoSpinParams<T>, t: T) -> T {
    let a = p.a();
    if a == T::zero() {
        return T::zero();
    }
    let [e1, e2, e3] = p.eps;
    let (two, four) = (lit::<T>(2.0), lit::<T>(4.0));
    let (s, c) = (a * t).sin_cos();
    four * p.b * p.j * ((two * p.j * e3 - four * p.b * e1) * s * s / (a * a) - two * e2 * s * c / a)
}

/// Power of the reduced battery,
/// `P(t) = 8BJ[(Jε3 − 2Bε1) sin(2at)/a − ε2 cos(2at)]`.
pub fn two_spin_power<T: Real>(p: &TwoSpinParams<T>, t: T) -> T {
    let a = p.a();
    if a == T::zero() {
        return T::zero();
    }
    let [e1, e2, e3] = p.eps;
    let two = lit::<T>(2.0);
    let (s, c) = (two * a * t).sin_cos();
    lit::<T>(8.0) * p.b * p.j * ((p.j * e3 - two * p.b * e1) * s / a - e2 * c)
}

/// Bound A on the work of the reduced battery,
/// `2‖H0‖ sqrt(2ℂ_U(ρ0)) = 6|J| sqrt((2Bε1 − Jε3)² + a²ε2²) / a`.
///
/// The rank factor is `min(2r(ρ0), 2) = 2` for every state, and the
/// coherence of `ρ0` in the eigenbasis of `U_t` does not depend on `t`
/// except where `sin(at) = 0`, at which `U_t` is a multiple of the identity
/// and the bound collapses to zero.
pub fn two_spin_bound_a<T: Real>(p: &TwoSpinParams<T>) -> T {
    let a = p.a();
    if a == T::zero() {
        return T::zero();
    }
    lit::<T>(6.0) * p.j.abs() * p.coherence_numerator().sqrt() / a
}

/// `12|BJ| sqrt(ε1² + ε2²)`, the power bound at `t = 0` from
/// `ℂ_V(ρ0) = 2(ε1² + ε2²)` and `r([V, ρ0]) = 2`.
///
/// This bounds `|P(0)|` only. At later times `ℂ_V(ρ_t)` replaces
/// `ℂ_V(ρ0)`, and for `ε1 = ε2 = 0` the power is nonzero while this value is.
pub fn two_spin_power_bound_c<T: Real>(p: &TwoSpinParams<T>) -> T {
    let [e1, e2, _] = p.eps;
    lit::<T>(12.0) * (p.b * p.j).abs() * (e1 * e1 + e2 * e2).sqrt()
}
