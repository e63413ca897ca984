//! Open batteries: Kraus channels, Lindblad evolution and the associated
//! energy-exchange bounds.
//!
//! `dE = tr((ρ0 − ℰ(ρ0)) H0)` is the energy given up by the battery, the
//! opposite sign of the closed-system work.

use std::collections::BTreeMap;

use crate::closed::BoundReport;
use crate::coherence::{generalized_coherence, CoherenceBasis};
use crate::error::{Error, Result};
use crate::linalg::{
    comm, ensure_density, ensure_hermitian, ensure_same_dim, ensure_square, frobenius_norm, hermitian_residual,
    identity, numerical_rank, operator_norm, trace_product, DEFAULT_RANK_TOL,
};
use crate::scalar::{from_usize, lit, re, to_f64, tol, CMat, Real};
use nalgebra::ComplexField;
use num_complex::Complex;

/// Completeness tolerance for channels built directly from operators.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Largest accepted `dt·(‖H‖ + Σγ‖L‖²)` for the fixed-step integrator.
pub const STABILITY_LIMIT: f64 = 0.1;

const HERMITIAN_KRAUS_TOL: f64 = 1e-10;

/// Kraus representation `ℰ(ρ) = Σ_a A_a ρ A_a†`.
#[derive(Debug, Clone)]
pub struct KrausChannel<T: Real> {
    operators: Vec<CMat<T>>,
    hermitian: Vec<bool>,
}

impl<T: Real> KrausChannel<T> {
    /// Requires `‖Σ A_a†A_a − I‖_F ≤ 1e-8`.
    pub fn new(operators: Vec<CMat<T>>) -> Result<Self> {
        Self::with_tolerance(operators, tol(COMPLETENESS_TOL))
    }

    pub fn with_tolerance(operators: Vec<CMat<T>>, tolerance: T) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::InvalidParameter("channel needs at least one operator".into()))?;
        let n = ensure_square(first)?;
        for a in &operators {
            ensure_same_dim(first, a)?;
            if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let residual = completeness_residual(&operators, n);
        if residual > tolerance {
            return Err(Error::IncompleteChannel { residual: to_f64(residual) });
        }
        let hermitian = operators
            .iter()
            .map(|a| hermitian_residual(a) <= tol::<T>(HERMITIAN_KRAUS_TOL) * frobenius_norm(a).max(T::one()))
            .collect();
        Ok(Self { operators, hermitian })
    }

    pub fn operators(&self) -> &[CMat<T>] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn is_hermitian(&self) -> &[bool] {
        &self.hermitian
    }

    /// `‖Σ A_a†A_a − I‖_F`.
    pub fn completeness_residual(&self) -> T {
        completeness_residual(&self.operators, self.dim())
    }

    fn require_hermitian(&self) -> Result<()> {
        match self.hermitian.iter().position(|h| !h) {
            Some(index) => Err(Error::NonHermitianKraus { index }),
            None => Ok(()),
        }
    }

    /// Heisenberg-picture dual `ℰ_*(X) = Σ_a A_a† X A_a`.
    pub fn dual(&self, x: &CMat<T>) -> CMat<T> {
        let n = self.dim();
        self.operators.iter().fold(CMat::zeros(n, n), |acc, a| acc + a.adjoint() * x * a)
    }
}

fn completeness_residual<T: Real>(ops: &[CMat<T>], n: usize) -> T {
    let s = ops.iter().fold(CMat::<T>::zeros(n, n), |acc, a| acc + a.adjoint() * a);
    frobenius_norm(&(s - identity::<T>(n)))
}

fn check_state<T: Real>(ch: &KrausChannel<T>, rho: &CMat<T>) -> Result<()> {
    let n = ensure_square(rho)?;
    if n != ch.dim() {
        return Err(Error::DimensionMismatch { expected: ch.dim(), found: n });
    }
    Ok(())
}

/// `ℰ(ρ) = Σ_a A_a ρ A_a†`.
pub fn apply_channel<T: Real>(ch: &KrausChannel<T>, rho: &CMat<T>) -> Result<CMat<T>> {
    check_state(ch, rho)?;
    let n = ch.dim();
    Ok(ch.operators.iter().fold(CMat::zeros(n, n), |acc, a| acc + a * rho * a.adjoint()))
}

/// Energy change of a channel and its three commutator forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausEnergy<T: Real> {
    /// `tr((ρ0 − ℰ(ρ0)) H0)`.
    pub de: T,
    /// `Σ_a tr(A_a H0 [ρ0, A_a†])`.
    pub de_a: T,
    /// `Σ_a tr(A_a† [A_a H0, ρ0])`.
    pub de_b: T,
    /// `Σ_a tr(ρ0 [A_a†, A_a H0])`.
    pub de_c: T,
}

/// Energy released by the channel.
///
/// The three commutator forms all equal `tr(ρ0 H0) − tr(ρ0 ℰ(H0))`, which is
/// `de` whenever `ℰ(H0) = ℰ_*(H0)`, in particular for Hermitian Kraus operators.
pub fn kraus_energy_change<T: Real>(ch: &KrausChannel<T>, rho0: &CMat<T>, h0: &CMat<T>) -> Result<KrausEnergy<T>> {
    check_state(ch, rho0)?;
    ensure_same_dim(rho0, h0)?;
    let evolved = apply_channel(ch, rho0)?;
    let de = trace_product(&(rho0 - &evolved), h0).re;
    debug_assert!({
        let direct = trace_product(&evolved, h0).re;
        let dual = trace_product(rho0, &ch.dual(h0)).re;
        (direct - dual).abs() <= tol::<T>(1e-10) * direct.abs().max(T::one())
    });
    let zero = Complex::new(T::zero(), T::zero());
    let (mut a_sum, mut b_sum, mut c_sum) = (zero, zero, zero);
    for a in &ch.operators {
        let ad = a.adjoint();
        let ah = a * h0;
        a_sum += trace_product(&ah, &comm(rho0, &ad));
        b_sum += trace_product(&ad, &comm(&ah, rho0));
        c_sum += trace_product(rho0, &comm(&ad, &ah));
    }
    Ok(KrausEnergy { de, de_a: a_sum.re, de_b: b_sum.re, de_c: c_sum.re })
}

/// Bounds on `|dE|` for a channel with Hermitian Kraus operators:
/// (A) `2‖H0‖ Σ_a ‖A_a‖² sqrt(R¹_a ℂ_{A_a}(ρ0))`, `R¹_a = r([A_a†, ρ0])`;
/// (B) `2‖ρ0‖ Σ_a ‖A_a‖ sqrt(R²_a ℂ_ρ0(A_a H0))`, `R²_a = r([ρ0, A_a H0])`;
/// (C) `2‖ρ0‖_F Σ_a ‖A_a‖² sqrt(ℂ_{A_a}(H0))`.
///
/// Form B carries no `‖H0‖` factor: the coherence of `A_a H0` already scales
/// with `H0`.
pub fn kraus_bounds<T: Real>(ch: &KrausChannel<T>, rho0: &CMat<T>, h0: &CMat<T>) -> Result<BoundReport<T>> {
    ch.require_hermitian()?;
    check_state(ch, rho0)?;
    ensure_density(rho0)?;
    ensure_hermitian(h0)?;
    ensure_same_dim(rho0, h0)?;
    let energy = kraus_energy_change(ch, rho0, h0)?;
    let two = lit::<T>(2.0);
    let rank_tol = lit::<T>(DEFAULT_RANK_TOL);
    let rho_basis = CoherenceBasis::of_hermitian(rho0)?;
    let h0_norm = operator_norm(h0);
    let rho_norm = operator_norm(rho0);
    let rho_fro = frobenius_norm(rho0);
    let mut aux = BTreeMap::new();
    let (mut a, mut b, mut c) = (T::zero(), T::zero(), T::zero());
    for (k, op) in ch.operators.iter().enumerate() {
        let basis = CoherenceBasis::of_hermitian(op)?;
        let norm = operator_norm(op);
        let ah = op * h0;
        let r1 = numerical_rank(&comm(&op.adjoint(), rho0), rank_tol);
        let r2 = numerical_rank(&comm(rho0, &ah), rank_tol);
        let coh_a_rho = generalized_coherence(rho0, &basis)?;
        let coh_rho_ah = generalized_coherence(&ah, &rho_basis)?;
        let coh_a_h0 = generalized_coherence(h0, &basis)?;
        a += norm * norm * (from_usize::<T>(r1) * coh_a_rho).sqrt();
        b += norm * (from_usize::<T>(r2) * coh_rho_ah).sqrt();
        c += norm * norm * coh_a_h0.sqrt();
        aux.insert(format!("R1_{k}"), from_usize(r1));
        aux.insert(format!("R2_{k}"), from_usize(r2));
        aux.insert(format!("coh_A{k}_rho0"), coh_a_rho);
        aux.insert(format!("coh_rho0_A{k}H0"), coh_rho_ah);
        aux.insert(format!("coh_A{k}_H0"), coh_a_h0);
        aux.insert(format!("norm_A{k}"), norm);
    }
    aux.insert("norm_H0".into(), h0_norm);
    aux.insert("norm_rho0".into(), rho_norm);
    aux.insert("fro_rho0".into(), rho_fro);
    Ok(BoundReport::new(energy.de, two * h0_norm * a, two * rho_norm * b, two * rho_fro * c, aux))
}

/// Non-interacting batteries, each with its own channel, Hamiltonian and state.
///
/// The quantity is the total stored energy `Σ_i tr((ℰ_i(ρ_i) − ρ_i) H0_i)` and
/// each bound is the sum of the per-subsystem [`kraus_bounds`].
pub fn ensemble_bound<T: Real>(subsystems: &[(KrausChannel<T>, CMat<T>, CMat<T>)]) -> Result<BoundReport<T>> {
    let mut total = T::zero();
    let (mut a, mut b, mut c) = (T::zero(), T::zero(), T::zero());
    let mut aux = BTreeMap::new();
    for (i, (ch, h0, rho)) in subsystems.iter().enumerate() {
        let r = kraus_bounds(ch, rho, h0)?;
        total -= r.quantity;
        a += r.bound_a;
        b += r.bound_b;
        c += r.bound_c;
        aux.insert(format!("bound_c_{i}"), r.bound_c);
        aux.insert(format!("stored_{i}"), -r.quantity);
    }
    aux.insert("subsystems".into(), from_usize(subsystems.len()));
    Ok(BoundReport::new(total, a, b, c, aux))
}

/// `ρ̇ = −i[H0 + V, ρ] + Σ_n γ_n (L_n ρ L_n† − ½{L_n†L_n, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladModel<T: Real> {
    h0: CMat<T>,
    v: CMat<T>,
    dissipators: Vec<(T, CMat<T>)>,
}

impl<T: Real> LindbladModel<T> {
    pub fn new(h0: CMat<T>, v: CMat<T>, dissipators: Vec<(T, CMat<T>)>) -> Result<Self> {
        ensure_hermitian(&h0)?;
        ensure_hermitian(&v)?;
        ensure_same_dim(&h0, &v)?;
        for (gamma, l) in &dissipators {
            ensure_same_dim(&h0, l)?;
            if !(*gamma >= T::zero()) {
                return Err(Error::InvalidParameter(format!("rate must be non-negative, got {gamma}")));
            }
        }
        Ok(Self { h0, v, dissipators })
    }

    pub fn h0(&self) -> &CMat<T> {
        &self.h0
    }

    pub fn v(&self) -> &CMat<T> {
        &self.v
    }

    pub fn dissipators(&self) -> &[(T, CMat<T>)] {
        &self.dissipators
    }

    pub fn dim(&self) -> usize {
        self.h0.nrows()
    }

    pub fn hamiltonian(&self) -> CMat<T> {
        &self.h0 + &self.v
    }

    /// Checks `tr(L_p L_t†) = δ_pt` to 1e-8.
    pub fn check_normalized(&self) -> Result<()> {
        for (p, (_, lp)) in self.dissipators.iter().enumerate() {
            for (q, (_, lq)) in self.dissipators.iter().enumerate() {
                let target = if p == q { T::one() } else { T::zero() };
                let overlap = trace_product(lp, &lq.adjoint());
                if (overlap - re(target)).modulus() > tol::<T>(1e-8) {
                    return Err(Error::InvalidParameter(format!("dissipators {p} and {q} are not orthonormal")));
                }
            }
        }
        Ok(())
    }

    /// `dt·(‖H‖ + Σ_n γ_n ‖L_n‖²)`.
    pub fn stiffness(&self, dt: T) -> T {
        let rates = self.dissipators.iter().fold(T::zero(), |s, (g, l)| s + *g * operator_norm(l).powi(2));
        dt * (operator_norm(&self.hamiltonian()) + rates)
    }

    fn require_hermitian_dissipators(&self) -> Result<()> {
        for (index, (_, l)) in self.dissipators.iter().enumerate() {
            if hermitian_residual(l) > tol::<T>(HERMITIAN_KRAUS_TOL) * frobenius_norm(l).max(T::one()) {
                return Err(Error::NonHermitianLindblad { index });
            }
        }
        Ok(())
    }
}

/// Right-hand side of the master equation.
pub fn lindblad_rhs<T: Real>(m: &LindbladModel<T>, rho: &CMat<T>) -> Result<CMat<T>> {
    ensure_same_dim(&m.h0, rho)?;
    Ok(rhs(m, &m.hamiltonian(), rho))
}

fn rhs<T: Real>(m: &LindbladModel<T>, h: &CMat<T>, rho: &CMat<T>) -> CMat<T> {
    let minus_i = Complex::new(T::zero(), -T::one());
    let half = re(lit::<T>(0.5));
    let mut out = comm(h, rho) * minus_i;
    for (g, l) in &m.dissipators {
        if *g == T::zero() {
            continue;
        }
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += (l * rho * &ld - (&ldl * rho + rho * &ldl) * half) * re(*g);
    }
    out
}

/// States of a fixed-step integration on a uniform grid.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<CMat<T>>,
    /// `tr(ρ(t) H0)`.
    pub energies: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> T {
        *self.times.last().expect("trajectory has at least the initial state")
    }

    /// Index of the last grid time not after `t`.
    pub fn index_at(&self, t: T) -> Result<usize> {
        let end = self.t_end();
        let slack = tol::<T>(1e-12) * end.max(T::one());
        if t < -slack || t > end + slack {
            return Err(Error::TOutsideTrajectory { t: to_f64(t), t_end: to_f64(end) });
        }
        Ok(self.times.partition_point(|&s| s <= t + slack).saturating_sub(1))
    }

    /// Largest deviation from unit trace, Hermiticity and positivity along the grid.
    pub fn invariant_residuals(&self) -> (T, T, T) {
        let mut tr = T::zero();
        let mut herm = T::zero();
        let mut neg = T::zero();
        for s in &self.states {
            let t = crate::linalg::trace(s);
            tr = tr.max((t.re - T::one()).abs().max(t.im.abs()));
            herm = herm.max(hermitian_residual(s));
            let (vals, _) = crate::linalg::hermitian_eigen(s);
            neg = neg.max(-vals[0]);
        }
        (tr, herm, neg)
    }
}

/// Classical RK4 from `0` to `t_end`. The number of steps is `t_end/dt`
/// rounded to the nearest integer, and the step is adjusted so the grid ends
/// exactly at `t_end`.
pub fn lindblad_evolve<T: Real>(m: &LindbladModel<T>, rho0: &CMat<T>, t_end: T, dt: T) -> Result<Trajectory<T>> {
    ensure_same_dim(&m.h0, rho0)?;
    if !(dt > T::zero()) || !(t_end >= dt) {
        return Err(Error::InvalidParameter(format!("need 0 < dt <= t_end, got dt={dt}, t_end={t_end}")));
    }
    let product = m.stiffness(dt);
    if product > lit::<T>(STABILITY_LIMIT) {
        return Err(Error::StepTooLarge { dt: to_f64(dt), product: to_f64(product) });
    }
    let steps = to_f64(t_end / dt).round().max(1.0) as usize;
    let h = t_end / from_usize::<T>(steps);
    let ham = m.hamiltonian();
    let half = re(lit::<T>(0.5));
    let sixth = re(h / lit::<T>(6.0));
    let hc = re(h);

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let mut rho = rho0.clone();
    times.push(T::zero());
    energies.push(trace_product(&rho, &m.h0).re);
    states.push(rho.clone());
    for k in 1..=steps {
        let k1 = rhs(m, &ham, &rho);
        let k2 = rhs(m, &ham, &(&rho + &k1 * (hc * half)));
        let k3 = rhs(m, &ham, &(&rho + &k2 * (hc * half)));
        let k4 = rhs(m, &ham, &(&rho + &k3 * hc));
        rho += (k1 + (k2 + k3) * re(lit::<T>(2.0)) + k4) * sixth;
        times.push(h * from_usize::<T>(k));
        energies.push(trace_product(&rho, &m.h0).re);
        states.push(rho.clone());
    }
    Ok(Trajectory { times, states, energies })
}

/// Smallest `W_A` form with its index, and the `W_B` root per dissipator.
type StateTerms<T> = (Option<(usize, T)>, Vec<T>);

/// Per-state terms of the open-system bound.
struct OpenBoundTerms<T: Real> {
    h0_basis: CoherenceBasis<T>,
    h0_norm: T,
    v_norm: T,
    v_basis: Option<CoherenceBasis<T>>,
    coh_h0_v: T,
    /// `(γ, ‖L‖, r(L), basis of L)`.
    l_data: Vec<(T, T, usize, CoherenceBasis<T>)>,
}

impl<T: Real> OpenBoundTerms<T> {
    fn new(m: &LindbladModel<T>) -> Result<Self> {
        m.require_hermitian_dissipators()?;
        let rank_tol = lit::<T>(DEFAULT_RANK_TOL);
        let h0_basis = CoherenceBasis::of_hermitian(&m.h0)?;
        let v_norm = operator_norm(&m.v);
        let (v_basis, coh_h0_v) = if v_norm > T::zero() {
            (Some(CoherenceBasis::of_hermitian(&m.v)?), generalized_coherence(&m.v, &h0_basis)?)
        } else {
            (None, T::zero())
        };
        let l_data = m
            .dissipators
            .iter()
            .map(|(g, l)| Ok((*g, operator_norm(l), numerical_rank(l, rank_tol), CoherenceBasis::of_hermitian(l)?)))
            .collect::<Result<_>>()?;
        Ok(Self { h0_norm: operator_norm(&m.h0), h0_basis, v_norm, v_basis, coh_h0_v, l_data })
    }

    fn eval(&self, m: &LindbladModel<T>, rho: &CMat<T>) -> Result<StateTerms<T>> {
        let rank_tol = lit::<T>(DEFAULT_RANK_TOL);
        let wa = match &self.v_basis {
            Some(vb) => {
                let f1 = self.v_norm
                    * (from_usize::<T>(numerical_rank(&comm(rho, &m.v), rank_tol)) * generalized_coherence(rho, vb)?)
                        .sqrt();
                let f2 = frobenius_norm(rho) * self.coh_h0_v.sqrt();
                let f3 = self.v_norm
                    * (from_usize::<T>(numerical_rank(&comm(rho, &m.h0), rank_tol))
                        * generalized_coherence(rho, &self.h0_basis)?)
                    .sqrt();
                let forms = [f1, f2, f3];
                Some(forms.iter().enumerate().fold((0, forms[0]), |acc, (i, &f)| if f < acc.1 { (i, f) } else { acc }))
            }
            None => None,
        };
        let r_rho = numerical_rank(rho, rank_tol);
        let wb = self
            .l_data
            .iter()
            .map(|(_, _, r_l, basis)| Ok((from_usize::<T>(r_rho + r_l) * generalized_coherence(rho, basis)?).sqrt()))
            .collect::<Result<_>>()?;
        Ok((wa, wb))
    }

    fn wb(&self, sups: &[T]) -> T {
        lit::<T>(3.0) * self.l_data.iter().zip(sups).fold(T::zero(), |s, ((g, norm, _, _), sup)| s + *g * *norm * *norm * *sup)
    }
}

/// Bound on the exchanged energy, `|E(t) − E(0)| ≤ t‖H0‖(W_A + W_B)`, with
///
/// * `W_A = 2 sup_τ min(‖V‖ sqrt(r([ρ,V]) ℂ_V(ρ)), ‖ρ‖_F sqrt(ℂ_H0(V)), ‖V‖ sqrt(r([ρ,H0]) ℂ_H0(ρ)))`,
/// * `W_B = 3 Σ_n γ_n ‖L_n‖² sup_τ sqrt((r(ρ) + r(L_n)) ℂ_{L_n}(ρ))`,
///
/// where `ρ = ρ(τ)` and `τ` runs over the trajectory grid up to `t`. The
/// supremum (rather than an infimum) over `τ` is what bounds the integral of
/// the energy rate. `t` is taken as the last grid time not after it.
pub fn open_energy_bound<T: Real>(m: &LindbladModel<T>, traj: &Trajectory<T>, t: T) -> Result<BoundReport<T>> {
    let terms = OpenBoundTerms::new(m)?;
    let k = traj.index_at(t)?;
    let t = traj.times[k];

    let mut wa_sup = T::zero();
    let mut form_counts = [0usize; 3];
    let mut wb_sups = vec![T::zero(); terms.l_data.len()];
    for rho in &traj.states[..=k] {
        let (wa, wb) = terms.eval(m, rho)?;
        if let Some((arg, best)) = wa {
            form_counts[arg] += 1;
            wa_sup = wa_sup.max(best);
        }
        for (s, v) in wb_sups.iter_mut().zip(wb) {
            *s = s.max(v);
        }
    }
    let wa = lit::<T>(2.0) * wa_sup;
    let wb = terms.wb(&wb_sups);
    let bound = t * terms.h0_norm * (wa + wb);

    let mut aux = BTreeMap::new();
    aux.insert("W_A".into(), wa);
    aux.insert("W_B".into(), wb);
    aux.insert("t".into(), t);
    aux.insert("norm_H0".into(), terms.h0_norm);
    for (i, c) in form_counts.iter().enumerate() {
        aux.insert(format!("W_A_form{}_count", i + 1), from_usize(*c));
    }
    for (n, (_, _, r_l, _)) in terms.l_data.iter().enumerate() {
        aux.insert(format!("rank_L{n}"), from_usize(*r_l));
    }
    let quantity = (traj.energies[k] - traj.energies[0]).abs();
    Ok(BoundReport::new(quantity, bound, bound, bound, aux))
}

/// [`open_energy_bound`] at every grid time, from running suprema.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenBoundSeries<T: Real> {
    pub times: Vec<T>,
    /// `|E(t) − E(0)|`.
    pub quantity: Vec<T>,
    pub wa: Vec<T>,
    pub wb: Vec<T>,
    pub bound: Vec<T>,
}

pub fn open_energy_bound_series<T: Real>(m: &LindbladModel<T>, traj: &Trajectory<T>) -> Result<OpenBoundSeries<T>> {
    let terms = OpenBoundTerms::new(m)?;
    let len = traj.len();
    let mut out = OpenBoundSeries {
        times: traj.times.clone(),
        quantity: Vec::with_capacity(len),
        wa: Vec::with_capacity(len),
        wb: Vec::with_capacity(len),
        bound: Vec::with_capacity(len),
    };
    let mut wa_sup = T::zero();
    let mut wb_sups = vec![T::zero(); terms.l_data.len()];
    for (k, rho) in traj.states.iter().enumerate() {
        let (wa, wb) = terms.eval(m, rho)?;
        if let Some((_, best)) = wa {
            wa_sup = wa_sup.max(best);
        }
        for (s, v) in wb_sups.iter_mut().zip(wb) {
            *s = s.max(v);
        }
        let wa = lit::<T>(2.0) * wa_sup;
        let wb = terms.wb(&wb_sups);
        out.quantity.push((traj.energies[k] - traj.energies[0]).abs());
        out.wa.push(wa);
        out.wb.push(wb);
        out.bound.push(traj.times[k] * terms.h0_norm * (wa + wb));
    }
    Ok(out)
}

/// First-order channel of one step of the master equation:
/// `A_0 = I − dt(iH + ½Σ_n γ_n L_n†L_n)`, `A_n = sqrt(γ_n dt) L_n`.
///
/// Completeness holds to second order; the channel is accepted when the
/// residual is below `10·dt²·sqrt(n)·(‖H‖ + Σγ_n‖L_n‖²)²`.
pub fn kraus_from_lindblad<T: Real>(m: &LindbladModel<T>, dt: T) -> Result<KrausChannel<T>> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    let n = m.dim();
    let h = m.hamiltonian();
    let i = Complex::new(T::zero(), T::one());
    let mut k = CMat::<T>::zeros(n, n);
    let mut ops = Vec::with_capacity(m.dissipators.len() + 1);
    for (g, l) in &m.dissipators {
        k += l.adjoint() * l * re(*g * lit::<T>(0.5));
    }
    ops.push(identity::<T>(n) - (h * i + k) * re(dt));
    for (g, l) in &m.dissipators {
        ops.push(l * re((*g * dt).sqrt()));
    }
    let scale = m.stiffness(dt);
    let tolerance = lit::<T>(10.0) * from_usize::<T>(n).sqrt() * scale * scale + tol::<T>(1e-14);
    KrausChannel::with_tolerance(ops, tolerance)
}
