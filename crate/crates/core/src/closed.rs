//! Closed batteries: work and power under a constant quench and their
//! coherence bounds.
//!
//! Evolution follows `ρ̇ = −i[H, ρ]` with `H = H0 + V` switched on at `t = 0`,
//! so `ρ_t = U_t ρ0 U_t†` with `U_t = exp(−iHt)`.

use std::collections::BTreeMap;

use crate::coherence::{generalized_coherence, CoherenceBasis};
use crate::error::{Error, Result};
use crate::ineq::InequalityCheck;
use crate::linalg::{
    comm, ensure_density, ensure_hermitian, ensure_same_dim, exp_from_eigen, frobenius_norm, hermitian_eigen,
    hermitian_projectors, numerical_rank, operator_norm, trace_product, SpectralDecomposition, SpectralKind,
    DEFAULT_RANK_TOL,
};
use crate::scalar::{cis, from_usize, lit, CMat, Real};

/// A measured quantity next to its three bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T: Real> {
    pub quantity: T,
    pub bound_a: T,
    pub bound_b: T,
    pub bound_c: T,
    /// Intermediate values (ranks, coherences, norms) keyed by name.
    pub auxiliary: BTreeMap<String, T>,
    pub all_hold: bool,
}

impl<T: Real> BoundReport<T> {
    pub fn new(quantity: T, bound_a: T, bound_b: T, bound_c: T, auxiliary: BTreeMap<String, T>) -> Self {
        let mut r = Self { quantity, bound_a, bound_b, bound_c, auxiliary, all_hold: true };
        r.all_hold = r.checks("").iter().all(|c| c.holds);
        r
    }

    /// `|quantity| ≤ bound` for each of the three bounds.
    pub fn checks(&self, prefix: &str) -> Vec<InequalityCheck<T>> {
        let q = self.quantity.abs();
        vec![
            InequalityCheck::new(format!("{prefix}A"), q, self.bound_a),
            InequalityCheck::new(format!("{prefix}B"), q, self.bound_b),
            InequalityCheck::new(format!("{prefix}C"), q, self.bound_c),
        ]
    }

    /// Smallest of the three bounds.
    pub fn tightest(&self) -> T {
        self.bound_a.min(self.bound_b).min(self.bound_c)
    }
}

/// Battery Hamiltonian `H0`, quench `V` and initial state `ρ0`.
#[derive(Debug, Clone)]
pub struct ClosedBattery<T: Real> {
    h0: CMat<T>,
    v: CMat<T>,
    rho0: CMat<T>,
    vals: Vec<T>,
    vecs: CMat<T>,
    h_dec: SpectralDecomposition<T>,
    h0_basis: CoherenceBasis<T>,
    v_basis: CoherenceBasis<T>,
    rho0_basis: CoherenceBasis<T>,
}

impl<T: Real> ClosedBattery<T> {
    pub fn new(h0: CMat<T>, v: CMat<T>, rho0: CMat<T>) -> Result<Self> {
        ensure_same_dim(&h0, &v)?;
        ensure_same_dim(&h0, &rho0)?;
        ensure_hermitian(&h0)?;
        ensure_hermitian(&v)?;
        ensure_density(&rho0)?;
        let h = &h0 + &v;
        let (vals, vecs) = hermitian_eigen(&h);
        let h_dec = hermitian_projectors(&h)?;
        let h0_basis = CoherenceBasis::of_hermitian(&h0)?;
        let v_basis = CoherenceBasis::of_hermitian(&v)?;
        let rho0_basis = CoherenceBasis::of_hermitian(&rho0)?;
        Ok(Self { h0, v, rho0, vals, vecs, h_dec, h0_basis, v_basis, rho0_basis })
    }

    pub fn h0(&self) -> &CMat<T> {
        &self.h0
    }

    pub fn v(&self) -> &CMat<T> {
        &self.v
    }

    pub fn rho0(&self) -> &CMat<T> {
        &self.rho0
    }

    pub fn dim(&self) -> usize {
        self.h0.nrows()
    }

    pub fn unitary(&self, t: T) -> CMat<T> {
        if t == T::zero() {
            return CMat::identity(self.dim(), self.dim());
        }
        exp_from_eigen(&self.vals, &self.vecs, t)
    }

    pub fn state(&self, t: T) -> CMat<T> {
        let u = self.unitary(t);
        &u * &self.rho0 * u.adjoint()
    }

    /// Spectral projectors of `U_t`, inherited from those of `H0 + V`.
    pub fn unitary_basis(&self, t: T) -> Result<CoherenceBasis<T>> {
        Ok(CoherenceBasis::new(self.h_dec.map_spectrum(SpectralKind::Unitary, |l| cis(-l.re * t))?))
    }

    fn energy(&self, rho: &CMat<T>) -> T {
        trace_product(rho, &self.h0).re
    }

    /// `W(t) = tr((ρ_t − ρ0) H0)`.
    pub fn work(&self, t: T) -> T {
        self.energy(&self.state(t)) - self.energy(&self.rho0)
    }

    /// The three commutator forms of the work:
    /// `tr(U†H0[U,ρ0])`, `tr(U[ρ0,U†H0])`, `tr(ρ0[U†H0,U])`.
    pub fn work_identities(&self, t: T) -> (T, T, T) {
        let u = self.unitary(t);
        let uh = u.adjoint() * &self.h0;
        let a = trace_product(&uh, &comm(&u, &self.rho0)).re;
        let b = trace_product(&u, &comm(&self.rho0, &uh)).re;
        let c = trace_product(&self.rho0, &comm(&uh, &u)).re;
        (a, b, c)
    }

    /// Coherence bounds on `|W(t)|`:
    /// (A) `2‖H0‖ sqrt(min(2r(ρ0), n) ℂ_U(ρ0))`,
    /// (B) `2‖ρ0‖ sqrt(ℂ_ρ0(U†H0))`,
    /// (C) `2‖ρ0‖_F sqrt(ℂ_U(H0))`.
    pub fn work_bounds(&self, t: T) -> Result<BoundReport<T>> {
        let n = self.dim();
        let u = self.unitary(t);
        let ub = self.unitary_basis(t)?;
        let two = lit::<T>(2.0);
        let rank = numerical_rank(&self.rho0, lit(DEFAULT_RANK_TOL));
        let rank_cap = (2 * rank).min(n);
        let coh_u_rho = generalized_coherence(&self.rho0, &ub)?;
        let coh_rho_uh = generalized_coherence(&(u.adjoint() * &self.h0), &self.rho0_basis)?;
        let coh_u_h0 = generalized_coherence(&self.h0, &ub)?;
        let h0_norm = operator_norm(&self.h0);
        let rho_norm = operator_norm(&self.rho0);
        let rho_fro = frobenius_norm(&self.rho0);

        let a = two * h0_norm * (from_usize::<T>(rank_cap) * coh_u_rho).sqrt();
        let b = two * rho_norm * coh_rho_uh.sqrt();
        let c = two * rho_fro * coh_u_h0.sqrt();

        let mut aux = BTreeMap::new();
        aux.insert("rank_rho0".into(), from_usize(rank));
        aux.insert("rank_cap".into(), from_usize(rank_cap));
        aux.insert("dim".into(), from_usize(n));
        aux.insert("coh_U_rho0".into(), coh_u_rho);
        aux.insert("coh_rho0_UdagH0".into(), coh_rho_uh);
        aux.insert("coh_U_H0".into(), coh_u_h0);
        aux.insert("norm_H0".into(), h0_norm);
        aux.insert("norm_rho0".into(), rho_norm);
        aux.insert("fro_rho0".into(), rho_fro);
        Ok(BoundReport::new(self.work(t), a, b, c, aux))
    }

    /// `P(t) = dW/dt = −i tr(H0[V, ρ_t])`.
    pub fn power(&self, t: T) -> T {
        self.power_at(&self.state(t))
    }

    fn power_at(&self, rho: &CMat<T>) -> T {
        // −i·z has real part Im z
        trace_product(&self.h0, &comm(&self.v, rho)).im
    }

    /// `−i tr(H0[V,ρ_t])`, `−i tr(V[ρ_t,H0])`, `−i tr(ρ_t[H0,V])`.
    pub fn power_identities(&self, t: T) -> (T, T, T) {
        let rho = self.state(t);
        let a = trace_product(&self.h0, &comm(&self.v, &rho)).im;
        let b = trace_product(&self.v, &comm(&rho, &self.h0)).im;
        let c = trace_product(&rho, &comm(&self.h0, &self.v)).im;
        (a, b, c)
    }

    /// Coherence bounds on `|P(t)|`:
    /// (A) `2‖H0‖‖V‖ sqrt(r([V,ρ_t]) ℂ_V(ρ_t))`,
    /// (B) `2‖H0‖‖V‖ sqrt(r([ρ_t,H0]) ℂ_H0(ρ_t))`,
    /// (C) the smaller of `2‖ρ0‖_F‖V‖ sqrt(ℂ_V(H0))` and `2‖H0‖‖ρ0‖_F sqrt(ℂ_H0(V))`.
    pub fn power_bounds(&self, t: T) -> Result<BoundReport<T>> {
        let rho = self.state(t);
        let two = lit::<T>(2.0);
        let rank_tol = lit::<T>(DEFAULT_RANK_TOL);
        let h0_norm = operator_norm(&self.h0);
        let v_norm = operator_norm(&self.v);
        let rho_fro = frobenius_norm(&self.rho0);
        let r_v = numerical_rank(&comm(&self.v, &rho), rank_tol);
        let r_h = numerical_rank(&comm(&rho, &self.h0), rank_tol);
        let coh_v_rho = generalized_coherence(&rho, &self.v_basis)?;
        let coh_h_rho = generalized_coherence(&rho, &self.h0_basis)?;
        let coh_v_h0 = generalized_coherence(&self.h0, &self.v_basis)?;
        let coh_h_v = generalized_coherence(&self.v, &self.h0_basis)?;

        let a = two * h0_norm * v_norm * (from_usize::<T>(r_v) * coh_v_rho).sqrt();
        let b = two * h0_norm * v_norm * (from_usize::<T>(r_h) * coh_h_rho).sqrt();
        let c1 = two * rho_fro * v_norm * coh_v_h0.sqrt();
        let c2 = two * h0_norm * rho_fro * coh_h_v.sqrt();

        let mut aux = BTreeMap::new();
        aux.insert("rank_comm_V_rho".into(), from_usize(r_v));
        aux.insert("rank_comm_rho_H0".into(), from_usize(r_h));
        aux.insert("coh_V_rho".into(), coh_v_rho);
        aux.insert("coh_H0_rho".into(), coh_h_rho);
        aux.insert("coh_V_H0".into(), coh_v_h0);
        aux.insert("coh_H0_V".into(), coh_h_v);
        aux.insert("bound_c_V_basis".into(), c1);
        aux.insert("bound_c_H0_basis".into(), c2);
        aux.insert("norm_H0".into(), h0_norm);
        aux.insert("norm_V".into(), v_norm);
        aux.insert("fro_rho0".into(), rho_fro);
        Ok(BoundReport::new(self.power_at(&rho).abs(), a, b, c1.min(c2), aux))
    }

    /// `(P/(‖H0‖‖V‖))² ≤ min(𝒬/‖H0‖², 𝒯/‖V‖²)` with
    /// `𝒬 = r([ρ_t,H0])‖[ρ_t,H0]‖_F²` and `𝒯 = r([ρ_t,V])‖[ρ_t,V]‖_F²`.
    ///
    /// The norms in the minimum keep the bound homogeneous in `H0` and `V`;
    /// `min(𝒬, 𝒯)` alone fails when either norm is below one.
    pub fn power_combined_bound(&self, t: T) -> Result<InequalityCheck<T>> {
        let h0_norm = operator_norm(&self.h0);
        let v_norm = operator_norm(&self.v);
        let floor = lit::<T>(1e-14);
        if h0_norm < floor {
            return Err(Error::ZeroNorm { which: "H0" });
        }
        if v_norm < floor {
            return Err(Error::ZeroNorm { which: "V" });
        }
        let rho = self.state(t);
        let rank_tol = lit::<T>(DEFAULT_RANK_TOL);
        let ch = comm(&rho, &self.h0);
        let cv = comm(&rho, &self.v);
        let q = from_usize::<T>(numerical_rank(&ch, rank_tol)) * frobenius_norm(&ch).powi(2);
        let tt = from_usize::<T>(numerical_rank(&cv, rank_tol)) * frobenius_norm(&cv).powi(2);
        let lhs = (self.power_at(&rho) / (h0_norm * v_norm)).powi(2);
        let rhs = (q / (h0_norm * h0_norm)).min(tt / (v_norm * v_norm));
        Ok(InequalityCheck::new("power_combined", lhs, rhs))
    }

    /// Trapezoid integral of `P` over `[0, t]` on `grid` points, and `t·max|P|`.
    pub fn energy_from_power(&self, t: T, grid: usize) -> Result<(T, T)> {
        if grid < 2 {
            return Err(Error::InvalidParameter(format!("grid must be at least 2, got {grid}")));
        }
        if t <= T::zero() {
            return Err(Error::InvalidParameter("t must be positive".into()));
        }
        let h = t / from_usize::<T>(grid - 1);
        let half = lit::<T>(0.5);
        let mut integral = T::zero();
        let mut sup = T::zero();
        for k in 0..grid {
            let p = self.power(h * from_usize::<T>(k));
            let w = if k == 0 || k == grid - 1 { half } else { T::one() };
            integral += w * p * h;
            sup = sup.max(p.abs());
        }
        Ok((integral, t * sup))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::generalized_coherence;
    use crate::linalg::{evolve_unitary, identity, trace};
    use crate::pauli;
    use crate::sample::{random_density, random_hermitian, random_unitary, rng};
    use crate::scalar::re;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_battery(seed: u64, n: usize) -> ClosedBattery<f64> {
        let mut r = rng(seed);
        let h0 = random_hermitian::<f64>(&mut r, n);
        let v = random_hermitian::<f64>(&mut r, n);
        let k = 1 + r.random_range(0..n);
        ClosedBattery::new(h0, v, random_density(&mut r, n, k)).unwrap()
    }

    fn commuting_battery() -> ClosedBattery<f64> {
        let h0 = pauli::z::<f64>() * re(0.7);
        let v = pauli::z::<f64>() * re(-0.2) + identity(2) * re(0.1);
        ClosedBattery::new(h0, v, pauli::bloch_state([0.2, -0.1, 0.3])).unwrap()
    }

    #[test]
    fn rejects_invalid_inputs() {
        let rho = pauli::bloch_state([0.0, 0.0, 0.5]);
        let bad = random_hermitian::<f64>(&mut rng(1), 2) + CMat::from_element(2, 2, num_complex::Complex::new(0.0, 0.3));
        assert!(ClosedBattery::new(bad, pauli::x(), rho.clone()).is_err());
        assert!(ClosedBattery::<f64>::new(pauli::z(), pauli::x(), pauli::z()).is_err());
        assert!(ClosedBattery::new(pauli::z(), identity(3), rho).is_err());
    }

    #[test]
    fn work_and_power_vanish_at_start_and_for_commuting_quench() {
        let b = random_battery(61, 4);
        assert_eq!(b.work(0.0), 0.0);
        let (a, bb, c) = b.work_identities(0.0);
        assert!(a.abs() < 1e-14 && bb.abs() < 1e-14 && c.abs() < 1e-14);
        let cb = commuting_battery();
        for t in [0.3, 1.1, 4.0] {
            assert!(cb.work(t).abs() < 1e-14);
            assert!(cb.power(t).abs() < 1e-14);
            let wb = cb.work_bounds(t).unwrap();
            assert!(wb.bound_c < 1e-7, "{}", wb.bound_c);
            assert!(cb.power_bounds(t).unwrap().bound_c < 1e-14);
        }
    }

    #[test]
    fn identities_agree_with_direct_values() {
        let b = random_battery(62, 4);
        let w = b.work(1.3);
        let (a, bb, c) = b.work_identities(1.3);
        for x in [a, bb, c] {
            assert!((x - w).abs() < 1e-10);
        }
        let p = b.power(1.3);
        let (a, bb, c) = b.power_identities(1.3);
        for x in [a, bb, c] {
            assert!((x - p).abs() < 1e-10);
        }
        let rho = b.rho0();
        let direct = (trace(&(b.h0() * comm(b.v(), rho))) * num_complex::Complex::new(0.0, -1.0)).re;
        assert!((b.power(0.0) - direct).abs() < 1e-14);
    }

    #[test]
    fn power_matches_finite_difference() {
        let b = random_battery(63, 5);
        let h = 1e-5;
        for t in [0.2, 0.9, 2.4] {
            let fd = (b.work(t + h) - b.work(t - h)) / (2.0 * h);
            assert!((fd - b.power(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn unitary_basis_matches_direct_decomposition() {
        let b = random_battery(64, 4);
        let u = b.unitary(0.8);
        assert!(frobenius_norm(&(&u - evolve_unitary(&(b.h0() + b.v()), 0.8).unwrap())) < 1e-12);
        let x = random_hermitian::<f64>(&mut rng(65), 4);
        let inherited = generalized_coherence(&x, &b.unitary_basis(0.8).unwrap()).unwrap();
        let direct = generalized_coherence(&x, &CoherenceBasis::of_unitary(&u).unwrap()).unwrap();
        assert!((inherited - direct).abs() < 1e-10);
    }

    #[test]
    fn unitary_basis_merges_aliased_phases() {
        // energies ±1 give equal phases at t = π
        let b = ClosedBattery::new(pauli::z::<f64>(), CMat::zeros(2, 2), pauli::bloch_state([0.3, 0.0, 0.0])).unwrap();
        assert_eq!(b.unitary_basis(std::f64::consts::PI).unwrap().projectors().len(), 1);
        assert_eq!(b.unitary_basis(1.0).unwrap().projectors().len(), 2);
    }

    #[test]
    fn evolution_preserves_purity() {
        let b = random_battery(66, 6);
        let p0 = frobenius_norm(b.rho0());
        for t in [0.1, 0.7, 2.5] {
            assert!((frobenius_norm(&b.state(t)) - p0).abs() < 1e-10);
        }
    }

    #[test]
    fn bounds_are_unitarily_covariant() {
        // moving to the interaction picture rotates states and projectors together
        let b = random_battery(67, 4);
        let t = 0.9;
        let u0 = evolve_unitary(b.h0(), t).unwrap();
        let rho_i = u0.adjoint() * b.state(t) * &u0;
        let rotated_v = CoherenceBasis::of_hermitian(&(u0.adjoint() * b.v() * &u0)).unwrap();
        let plain = generalized_coherence(&b.state(t), &CoherenceBasis::of_hermitian(b.v()).unwrap()).unwrap();
        let picture = generalized_coherence(&rho_i, &rotated_v).unwrap();
        assert!((plain - picture).abs() < 1e-9);

        let g = random_unitary::<f64>(&mut rng(68), 4);
        let rot = |m: &CMat<f64>| &g * m * g.adjoint();
        let moved = ClosedBattery::new(rot(b.h0()), rot(b.v()), rot(b.rho0())).unwrap();
        let (x, y) = (b.work_bounds(t).unwrap(), moved.work_bounds(t).unwrap());
        for (p, q) in [(x.bound_a, y.bound_a), (x.bound_b, y.bound_b), (x.bound_c, y.bound_c)] {
            assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn combined_bound_collapses_when_state_commutes_with_h0() {
        let h0 = pauli::z::<f64>();
        let b = ClosedBattery::new(h0, pauli::x::<f64>() * re(0.4), pauli::bloch_state([0.0, 0.0, 0.3])).unwrap();
        let c = b.power_combined_bound(0.0).unwrap();
        assert!(c.rhs.abs() < 1e-14 && c.lhs.abs() < 1e-14 && c.holds);
    }

    #[test]
    fn combined_bound_zero_norm_errors() {
        let b = ClosedBattery::new(pauli::z::<f64>(), CMat::zeros(2, 2), pauli::bloch_state([0.1, 0.0, 0.0])).unwrap();
        assert_eq!(b.power_combined_bound(0.5), Err(Error::ZeroNorm { which: "V" }));
    }

    // min(𝒬, 𝒯) without the norm factors is violated by a weak quench.
    #[test]
    fn unnormalized_combined_bound_counterexample() {
        let h0 = pauli::z::<f64>() * re(0.3);
        let v = pauli::x::<f64>() * re(0.05);
        let b = ClosedBattery::new(h0.clone(), v.clone(), pauli::bloch_state([0.1, 0.3, 0.2])).unwrap();
        let t = 0.4;
        let rho = b.state(t);
        let p = b.power(t);
        let lhs = (p / (0.3 * 0.05)).powi(2);
        let q = numerical_rank(&comm(&rho, &h0), 1e-9) as f64 * frobenius_norm(&comm(&rho, &h0)).powi(2);
        let tt = numerical_rank(&comm(&rho, &v), 1e-9) as f64 * frobenius_norm(&comm(&rho, &v)).powi(2);
        assert!(lhs > q.min(tt));
        assert!(b.power_combined_bound(t).unwrap().holds);
    }

    #[test]
    fn energy_from_power_integrates_work() {
        let (i, s) = commuting_battery().energy_from_power(2.0, 50).unwrap();
        assert!(i.abs() < 1e-14 && s.abs() < 1e-14);
        let b = random_battery(69, 4);
        let t = 1.5;
        let (i, s) = b.energy_from_power(t, 2000).unwrap();
        assert!((i - b.work(t)).abs() < 1e-6 * t);
        assert!(b.work(t).abs() <= s * (1.0 + 1e-3));
        assert!(b.energy_from_power(t, 1).is_err());
    }

    #[test]
    fn bound_report_flags() {
        let r = BoundReport::new(-1.0, 2.0, 1.0, 3.0, BTreeMap::new());
        assert!(r.all_hold);
        assert_eq!(r.tightest(), 1.0);
        assert!(!BoundReport::new(1.5, 2.0, 1.0, 3.0, BTreeMap::new()).all_hold);
    }

    #[test]
    fn random_sweep_holds() {
        let mut r = rng(70);
        for i in 0..200 {
            let n = 6;
            let h0 = random_hermitian::<f64>(&mut r, n);
            let v = random_hermitian::<f64>(&mut r, n);
            let rho = random_density::<f64>(&mut r, n, 1 + i % n);
            let b = ClosedBattery::new(h0, v, rho).unwrap();
            for k in 0..20 {
                let t = 0.25 * k as f64;
                let wb = b.work_bounds(t).unwrap();
                assert!(wb.all_hold, "{wb:?}");
            }
        }
    }

    #[test]
    fn f32_battery() {
        let b = ClosedBattery::<f32>::new(pauli::z(), pauli::x(), pauli::bloch_state([0.0, 0.0, 0.5])).unwrap();
        let t = 0.6f32;
        // σ_z population under H = σ_z + σ_x
        let exact = -(2.0f32.sqrt() * t).sin().powi(2);
        assert!((b.work(t) - exact).abs() < 1e-5);
        assert!(b.work_bounds(t).unwrap().all_hold);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn identities_and_bounds((n, seed) in (2usize..=8, any::<u64>()), ti in 0usize..3) {
            let t = [0.1, 0.7, 2.5][ti];
            let b = random_battery(seed, n);
            let w = b.work(t);
            let (a, bb, c) = b.work_identities(t);
            prop_assert!((a - w).abs() < 1e-9 && (bb - w).abs() < 1e-9 && (c - w).abs() < 1e-9);
            let p = b.power(t);
            let (a, bb, c) = b.power_identities(t);
            prop_assert!((a - p).abs() < 1e-9 && (bb - p).abs() < 1e-9 && (c - p).abs() < 1e-9);
            prop_assert!(b.work_bounds(t).unwrap().all_hold);
            prop_assert!(b.power_bounds(t).unwrap().all_hold);
            prop_assert!(b.power_combined_bound(t).unwrap().holds);
        }
    }
}
