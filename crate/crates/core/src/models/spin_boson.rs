//! Two-level system dephasing through `σz` into a Markovian bath:
//!
//! `ρ̇11 = −(i/2)Δ0(ρ12 − ρ21)`,
//! `ρ̇12 = −γρ12 − (i/2)Δ0(ρ11 − ρ22) − (i/2)ω0ρ12`,
//!
//! with energy measured by `H0 = ½(ω0σz − Δ0σx)`.

use std::collections::BTreeMap;

use crate::closed::BoundReport;
use crate::error::{Error, Result};
use crate::linalg::ensure_density;
use crate::open::{open_energy_bound, open_energy_bound_series, LindbladModel, OpenBoundSeries, Trajectory};
use crate::pauli;
use crate::scalar::{lit, re, CMat, Cx, Real};
use nalgebra::ComplexField;
use num_complex::Complex;

/// Minimum ratios `γ/Δ0` and `Δ0/|ω0|` for the specialized bound.
pub const REGIME_RATIO: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinBosonParams<T: Real> {
    pub omega0: T,
    pub delta0: T,
    pub gamma: T,
    pub rho0: CMat<T>,
}

impl<T: Real> SpinBosonParams<T> {
    pub fn new(omega0: T, delta0: T, gamma: T, rho0: CMat<T>) -> Result<Self> {
        let p = Self { omega0, delta0, gamma, rho0 };
        p.validate()?;
        Ok(p)
    }

    /// Equal populations with coherence `ρ12`.
    pub fn with_rho12(omega0: T, delta0: T, gamma: T, rho12: Cx<T>) -> Result<Self> {
        let half = re(lit::<T>(0.5));
        let rho0 = CMat::from_row_slice(2, 2, &[half, rho12, rho12.conj(), half]);
        Self::new(omega0, delta0, gamma, rho0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0.is_finite() && self.delta0.is_finite() && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter("spin-boson parameters must be finite".into()));
        }
        if self.gamma < T::zero() {
            return Err(Error::InvalidParameter(format!("gamma must be nonnegative, got {}", self.gamma)));
        }
        if self.rho0.nrows() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.rho0.nrows() });
        }
        ensure_density(&self.rho0)
    }

    /// Whether `γ ≫ Δ0 ≫ ω0` holds by at least [`REGIME_RATIO`].
    pub fn in_regime(&self) -> bool {
        let r = lit::<T>(REGIME_RATIO);
        self.delta0 > T::zero() && self.gamma >= r * self.delta0 && self.delta0 >= r * self.omega0.abs()
    }
}

impl SpinBosonParams<f64> {
    /// `γ = 10`, `Δ0 = 1`, `ω0 = 0.1`, `ρ0 = ½(I + 0.6σx)`.
    pub fn defaults() -> Self {
        Self::with_rho12(0.1, 1.0, 10.0, Complex::new(0.3, 0.0)).expect("default parameters are valid")
    }
}

/// `H0 = ½(ω0σz − Δ0σx)` with the quench `V = −(ω0/4)σz` and the single
/// dissipator `(γ/2, σz)`.
///
/// The dissipator rate `γ/2` gives the coherence decay rate `γ`, and `V`
/// brings the precession of `ρ12` to `ω0/2`, as in the reduced equations.
pub fn spin_boson_build<T: Real>(p: &SpinBosonParams<T>) -> Result<LindbladModel<T>> {
    p.validate()?;
    let half = lit::<T>(0.5);
    let h0 = (pauli::z::<T>() * re(p.omega0) - pauli::x::<T>() * re(p.delta0)) * re(half);
    let v = pauli::z::<T>() * re(-p.omega0 * lit::<T>(0.25));
    LindbladModel::new(h0, v, vec![(p.gamma * half, pauli::z::<T>())])
}

/// `E = (ω0/2)(ρ11 − ρ22) − (Δ0/2)(ρ12 + ρ21)`.
pub fn spin_boson_energy<T: Real>(rho: &CMat<T>, p: &SpinBosonParams<T>) -> T {
    let half = lit::<T>(0.5);
    half * p.omega0 * (rho[(0, 0)].re - rho[(1, 1)].re) - half * p.delta0 * (rho[(0, 1)] + rho[(1, 0)]).re
}

/// `dE/dt = Δ0γ Re ρ12 + (Δ0ω0/2) Im ρ12`.
pub fn spin_boson_energy_rate<T: Real>(rho: &CMat<T>, p: &SpinBosonParams<T>) -> T {
    let r12 = rho[(0, 1)];
    p.delta0 * p.gamma * r12.re + p.delta0 * p.omega0 * lit::<T>(0.5) * r12.im
}

/// Which bound [`spin_boson_bound`] evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPath {
    /// `t·3√2·Δ0·γ·sup_τ|ρ12(τ)|`.
    Specialized,
    /// The general open-system bound.
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinBosonBound<T: Real> {
    pub report: BoundReport<T>,
    pub path: BoundPath,
}

/// `|E(t) − E(0)| ≤ t·3√2·Δ0·γ·sup_{τ≤t}|ρ12(τ)|` when
/// [`SpinBosonParams::in_regime`] holds, and the general open-system bound
/// otherwise. In the regime `|dE/dt| ≤ Δ0(γ + ω0/2)|ρ12|`, which the
/// specialized form dominates.
pub fn spin_boson_bound<T: Real>(p: &SpinBosonParams<T>, traj: &Trajectory<T>, t: T) -> Result<SpinBosonBound<T>> {
    let k = traj.index_at(t)?;
    if !p.in_regime() {
        let m = spin_boson_build(p)?;
        return Ok(SpinBosonBound { report: open_energy_bound(&m, traj, t)?, path: BoundPath::General });
    }
    let t = traj.times[k];
    let sup = traj.states[..=k].iter().fold(T::zero(), |s, rho| s.max(rho[(0, 1)].modulus()));
    let bound = t * lit::<T>(3.0 * std::f64::consts::SQRT_2) * p.delta0 * p.gamma * sup;
    let mut aux = BTreeMap::new();
    aux.insert("sup_rho12".into(), sup);
    aux.insert("t".into(), t);
    let quantity = (traj.energies[k] - traj.energies[0]).abs();
    Ok(SpinBosonBound { report: BoundReport::new(quantity, bound, bound, bound, aux), path: BoundPath::Specialized })
}

/// [`spin_boson_bound`] at every grid time, next to the general bound terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBosonSeries<T: Real> {
    pub path: BoundPath,
    /// Bound on `|E(t) − E(0)|` along the chosen path.
    pub bound: Vec<T>,
    pub general: OpenBoundSeries<T>,
}

pub fn spin_boson_bound_series<T: Real>(p: &SpinBosonParams<T>, traj: &Trajectory<T>) -> Result<SpinBosonSeries<T>> {
    let general = open_energy_bound_series(&spin_boson_build(p)?, traj)?;
    if !p.in_regime() {
        return Ok(SpinBosonSeries { path: BoundPath::General, bound: general.bound.clone(), general });
    }
    let c = lit::<T>(3.0 * std::f64::consts::SQRT_2) * p.delta0 * p.gamma;
    let mut sup = T::zero();
    let bound = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| {
            sup = sup.max(rho[(0, 1)].modulus());
            t * c * sup
        })
        .collect();
    Ok(SpinBosonSeries { path: BoundPath::Specialized, bound, general })
}
