//! Quench of the periodic anisotropic XY chain,
//! `H(h) = −½ Σ_i [(1+η)/2 σx_i σx_{i+1} + (1−η)/2 σy_i σy_{i+1} + h σz_i]`,
//! from the ground state of `H(h1)` under `H(h2)`.
//!
//! After a Jordan–Wigner transform the chain splits into two fermion-parity
//! sectors. The antiperiodic sector has momenta `k = (2m−1)π/N`, all paired
//! as `(k, −k)`. The periodic sector has paired momenta `k = 2πm/N`,
//! `0 < k < π`, plus the unpaired modes `k = 0` and `k = π`, which commute
//! with the quench and carry no work. Each pair has energy
//! `Λ_k = sqrt(ε_k² + η² sin²k)`, `ε_k = h − cos k`, and Bogoliubov angle
//! `θ_k = atan(η sin k / (ε_k + Λ_k))`.

use crate::error::{Error, Result};
use crate::pauli;
use crate::scalar::{from_usize, lit, re, CMat, Real};

/// Largest chain handled by [`xy_h0_coherence_smallN`].
pub const SMALL_N_MAX: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYChainParams<T: Real> {
    pub n: usize,
    pub eta: T,
    pub h1: T,
    pub h2: T,
}

impl<T: Real> XYChainParams<T> {
    pub fn new(n: usize, eta: T, h1: T, h2: T) -> Result<Self> {
        let p = Self { n, eta, h1, h2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("chain length must be even and at least 2, got {}", self.n)));
        }
        if !(self.eta.is_finite() && self.h1.is_finite() && self.h2.is_finite()) {
            return Err(Error::InvalidParameter("XY parameters must be finite".into()));
        }
        Ok(())
    }
}

/// Fermion boundary condition of a parity sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermionSector {
    Antiperiodic,
    Periodic,
}

/// Paired modes of the sector holding the initial ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct XYModeData<T: Real> {
    pub sector: FermionSector,
    pub k: Vec<T>,
    pub lambda1: Vec<T>,
    pub lambda2: Vec<T>,
    pub theta1: Vec<T>,
    pub theta2: Vec<T>,
    pub chi: Vec<T>,
    /// Ground-state energy of `H(h1)`.
    pub ground_energy: T,
}

impl<T: Real> XYModeData<T> {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

fn dispersion<T: Real>(k: T, eta: T, h: T) -> T {
    let e = h - k.cos();
    let s = eta * k.sin();
    (e * e + s * s).sqrt()
}

/// `θ_k ∈ [−π/2, π/2]`; the hole branch `ε_k + Λ_k = 0` maps to `π/2`.
fn bogoliubov_angle<T: Real>(k: T, eta: T, h: T) -> T {
    let e = h - k.cos();
    let s = eta * k.sin();
    let lam = (e * e + s * s).sqrt();
    if lam == T::zero() {
        return T::zero();
    }
    let x = e + lam;
    if x == T::zero() && s == T::zero() {
        return T::frac_pi_2();
    }
    s.atan2(x)
}

fn sector_momenta<T: Real>(n: usize, sector: FermionSector) -> Vec<T> {
    let pi_n = T::pi() / from_usize::<T>(n);
    match sector {
        FermionSector::Antiperiodic => (1..=n / 2).map(|m| from_usize::<T>(2 * m - 1) * pi_n).collect(),
        FermionSector::Periodic => (1..n / 2).map(|m| from_usize::<T>(2 * m) * pi_n).collect(),
    }
}

fn sector_energy<T: Real>(n: usize, eta: T, h: T, sector: FermionSector) -> T {
    let paired = sector_momenta::<T>(n, sector).into_iter().fold(T::zero(), |s, k| s + dispersion(k, eta, h));
    match sector {
        FermionSector::Antiperiodic => -paired,
        // the unpaired k = 0 and k = π modes contribute ±(ε_0 − ε_π)/2 = ∓1
        FermionSector::Periodic => -paired - T::one(),
    }
}

/// Ground-state energy of `H(h)` and the sector it lies in. Ties go to the
/// antiperiodic sector.
pub fn xy_ground_energy<T: Real>(n: usize, eta: T, h: T) -> (FermionSector, T) {
    let ap = sector_energy(n, eta, h, FermionSector::Antiperiodic);
    let p = sector_energy(n, eta, h, FermionSector::Periodic);
    if p < ap - lit::<T>(1e-12) * ap.abs() {
        (FermionSector::Periodic, p)
    } else {
        (FermionSector::Antiperiodic, ap)
    }
}

/// Operator norm of `H(h)`. The map `σx,σy → −σx,−σy` on every other site
/// followed by a global spin flip sends `H(h)` to `−H(−h)`, so the top of
/// the spectrum is `−E_gs(−h)`.
pub fn xy_hamiltonian_norm<T: Real>(n: usize, eta: T, h: T) -> T {
    xy_ground_energy(n, eta, h).1.abs().max(xy_ground_energy(n, eta, -h).1.abs())
}

fn modes_in<T: Real>(p: &XYChainParams<T>, sector: FermionSector) -> XYModeData<T> {
    let k = sector_momenta::<T>(p.n, sector);
    let lambda1: Vec<T> = k.iter().map(|&k| dispersion(k, p.eta, p.h1)).collect();
    let lambda2: Vec<T> = k.iter().map(|&k| dispersion(k, p.eta, p.h2)).collect();
    let theta1: Vec<T> = k.iter().map(|&k| bogoliubov_angle(k, p.eta, p.h1)).collect();
    let theta2: Vec<T> = k.iter().map(|&k| bogoliubov_angle(k, p.eta, p.h2)).collect();
    let chi = theta2.iter().zip(&theta1).map(|(a, b)| *a - *b).collect();
    let ground_energy = sector_energy(p.n, p.eta, p.h1, sector);
    XYModeData { sector, k, lambda1, lambda2, theta1, theta2, chi, ground_energy }
}

/// Paired modes of the parity sector that contains the ground state of `H(h1)`.
pub fn xy_modes<T: Real>(p: &XYChainParams<T>) -> XYModeData<T> {
    modes_in(p, xy_ground_energy(p.n, p.eta, p.h1).0)
}

/// `W(t) = 2 Σ_k Λ_k^(1) sin²2χ_k sin²(Λ_k^(2) t)`.
pub fn xy_work<T: Real>(p: &XYChainParams<T>, t: T) -> T {
    xy_work_from_modes(&xy_modes(p), t)
}

pub fn xy_work_from_modes<T: Real>(m: &XYModeData<T>, t: T) -> T {
    let two = lit::<T>(2.0);
    (0..m.len()).fold(T::zero(), |s, i| {
        let s2 = (two * m.chi[i]).sin();
        let st = (m.lambda2[i] * t).sin();
        s + two * m.lambda1[i] * s2 * s2 * st * st
    })
}

/// `P(t) = 2 Σ_k Λ_k^(1) Λ_k^(2) sin²2χ_k sin(2Λ_k^(2) t)`.
pub fn xy_power<T: Real>(p: &XYChainParams<T>, t: T) -> T {
    xy_power_from_modes(&xy_modes(p), t)
}

pub fn xy_power_from_modes<T: Real>(m: &XYModeData<T>, t: T) -> T {
    let two = lit::<T>(2.0);
    (0..m.len()).fold(T::zero(), |s, i| {
        let s2 = (two * m.chi[i]).sin();
        s + two * m.lambda1[i] * m.lambda2[i] * s2 * s2 * (two * m.lambda2[i] * t).sin()
    })
}

/// `ℂ_{U_t}(ρ0) = 1 − Π_k (cos⁴χ_k + sin⁴χ_k)` for the quenched ground state.
pub fn xy_state_coherence<T: Real>(p: &XYChainParams<T>) -> T {
    state_coherence_from_modes(&xy_modes(p))
}

fn state_coherence_from_modes<T: Real>(m: &XYModeData<T>) -> T {
    let prod = m.chi.iter().fold(T::one(), |acc, &c| {
        let (s, co) = c.sin_cos();
        acc * (co.powi(4) + s.powi(4))
    });
    T::one() - prod
}

/// Bound A for the pure initial state, `2√2 ‖H(h1)‖ sqrt(ℂ_{U_t}(ρ0))`.
/// At zero initial field `‖H(h1)‖` is the magnitude of the ground-state
/// energy.
pub fn xy_work_bound_a<T: Real>(p: &XYChainParams<T>) -> T {
    let norm = xy_hamiltonian_norm(p.n, p.eta, p.h1);
    lit::<T>(2.0 * std::f64::consts::SQRT_2) * norm * xy_state_coherence(p).max(T::zero()).sqrt()
}

/// Number of occupation patterns of `pairs` mode pairs and `singles` unpaired
/// modes with a fixed total fermion parity.
fn parity_count<T: Real>(pairs: usize, singles: usize) -> T {
    let bits = 2 * pairs + singles;
    if bits == 0 {
        T::one()
    } else {
        lit::<T>(2.0).powi(bits as i32 - 1)
    }
}

/// `ℂ_{U_t}(H(h1))` over the full `2^N`-dimensional space, in the eigenbasis
/// of the quenched Hamiltonian.
///
/// In the quenched eigenbasis `H(h1)` couples the empty and doubly occupied
/// states of each pair with amplitude `Λ_k^(1) sin 2χ_k`, independently of
/// the other modes. Each pair therefore contributes `2(Λ_k^(1) sin 2χ_k)²`
/// once per spectator pattern of the remaining modes with the parity of its
/// sector. The count grows as `2^(N−2)`; beyond [`SMALL_N_MAX`] spins the
/// value is not cross-checkable against the full matrix and is refused.
#[allow(non_snake_case)]
pub fn xy_h0_coherence_smallN<T: Real>(p: &XYChainParams<T>) -> Result<T> {
    p.validate()?;
    if p.n > SMALL_N_MAX {
        return Err(Error::TooLarge { n: p.n, max: SMALL_N_MAX });
    }
    let two = lit::<T>(2.0);
    let mut total = T::zero();
    for (sector, singles) in [(FermionSector::Antiperiodic, 0), (FermionSector::Periodic, 2)] {
        let m = modes_in(p, sector);
        if m.is_empty() {
            continue;
        }
        let weight = m.lambda1.iter().zip(&m.chi).fold(T::zero(), |s, (&l, &c)| {
            let x = l * (two * c).sin();
            s + x * x
        });
        total += two * weight * parity_count::<T>(m.len() - 1, singles);
    }
    Ok(total)
}

/// Spin-basis matrix of `H(h)` on `n` periodic sites.
pub fn xy_spin_hamiltonian<T: Real>(n: usize, eta: T, h: T) -> CMat<T> {
    let dim = 1usize << n;
    let half = lit::<T>(0.5);
    let cx = (T::one() + eta) * half;
    let cy = (T::one() - eta) * half;
    let (sx, sy, sz) = (pauli::x::<T>(), pauli::y::<T>(), pauli::z::<T>());
    let mut m = CMat::zeros(dim, dim);
    for i in 0..n {
        let j = (i + 1) % n;
        m += pauli::site_operator(&sx, i, n) * pauli::site_operator(&sx, j, n) * re(cx);
        m += pauli::site_operator(&sy, i, n) * pauli::site_operator(&sy, j, n) * re(cy);
        m += pauli::site_operator(&sz, i, n) * re(h);
    }
    m * re(-half)
}
