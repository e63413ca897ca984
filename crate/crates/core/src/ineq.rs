//! Trace inequalities, commutator-coherence lemmas and projector identities.
//!
//! Every check returns an [`InequalityCheck`] recording both sides, so the
//! same routines drive unit tests, the randomized `verify` sweep and the
//! acceptance suite.

use crate::coherence::{elementwise_offdiag, generalized_coherence, CoherenceBasis};
use crate::error::Result;
use crate::linalg::{
    comm, ensure_density, ensure_hermitian, ensure_normal, ensure_same_dim, ensure_unitary, frobenius_norm,
    hermitian_eigen, hermitian_residual, numerical_rank, operator_norm, singular_values, trace, trace_product,
    unitary_residual,
};
use crate::scalar::{from_usize, lit, to_f64, CMat, Real};
use nalgebra::ComplexField;

/// Relative slack applied to the right-hand side.
pub const REL_SLACK: f64 = 1e-9;
/// Absolute slack applied to the right-hand side.
pub const ABS_SLACK: f64 = 1e-12;
/// Tolerance for the projector equalities, relative to the size of the terms.
pub const EQUALITY_TOL: f64 = 1e-10;

/// `lhs ≤ rhs` together with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck<T: Real> {
    pub name: String,
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
    pub slack_ratio: T,
}

impl<T: Real> InequalityCheck<T> {
    /// Holds when `lhs ≤ rhs·(1 + 1e-9) + 1e-12`.
    pub fn new(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        Self::with_slack(name, lhs, rhs, REL_SLACK, ABS_SLACK)
    }

    pub fn with_slack(name: impl Into<String>, lhs: T, rhs: T, rel: f64, abs: f64) -> Self {
        let holds = lhs <= rhs * (T::one() + lit::<T>(rel)) + lit::<T>(abs);
        let slack_ratio = if rhs == T::zero() {
            if lhs == T::zero() {
                T::zero()
            } else {
                // any positive lhs against a vanishing bound is an unbounded ratio
                lit(f64::INFINITY)
            }
        } else {
            lhs / rhs
        };
        Self { name: name.into(), lhs, rhs, holds, slack_ratio }
    }
}

/// Coherence basis of a normal operator, using the Hermitian or unitary
/// eigensolver when the operator has that structure.
fn normal_basis<T: Real>(a: &CMat<T>) -> Result<CoherenceBasis<T>> {
    let scale = frobenius_norm(a).max(T::one());
    if hermitian_residual(a) <= lit::<T>(1e-12) * scale {
        CoherenceBasis::of_hermitian(a)
    } else if unitary_residual(a) <= lit::<T>(1e-10) {
        CoherenceBasis::of_unitary(a)
    } else {
        CoherenceBasis::of_normal(a)
    }
}

/// `|tr(A†B)| ≤ ‖A‖_F ‖B‖_F`.
pub fn frobenius_trace_ineq<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(a, b)?;
    let lhs = trace_product(&a.adjoint(), b).modulus();
    Ok(InequalityCheck::new("frobenius_trace", lhs, frobenius_norm(a) * frobenius_norm(b)))
}

/// `|tr(A†B)| ≤ ‖A‖ sqrt(r(B)) ‖B‖_F`.
pub fn holder_rank_trace_ineq<T: Real>(a: &CMat<T>, b: &CMat<T>, tol: T) -> Result<InequalityCheck<T>> {
    ensure_same_dim(a, b)?;
    let lhs = trace_product(&a.adjoint(), b).modulus();
    let r = from_usize::<T>(numerical_rank(b, tol));
    Ok(InequalityCheck::new("holder_rank_trace", lhs, operator_norm(a) * r.sqrt() * frobenius_norm(b)))
}

/// `‖[A,B]‖_F² ≤ 4‖A‖² ℂ_A(B)` for normal `A` and Hermitian `B`.
pub fn lemma1<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(a, b)?;
    ensure_normal(a)?;
    ensure_hermitian(b)?;
    let basis = normal_basis(a)?;
    let lhs = frobenius_norm(&comm(a, b)).powi(2);
    let rhs = lit::<T>(4.0) * operator_norm(a).powi(2) * generalized_coherence(b, &basis)?;
    Ok(InequalityCheck::new("lemma1", lhs, rhs))
}

/// `‖[U,A]‖_F² ≤ 4 ℂ_U(A)` for unitary `U`.
pub fn lemma1_unitary_corollary<T: Real>(u: &CMat<T>, a: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(u, a)?;
    ensure_unitary(u)?;
    ensure_hermitian(a)?;
    let basis = CoherenceBasis::of_unitary(u)?;
    let lhs = frobenius_norm(&comm(u, a)).powi(2);
    Ok(InequalityCheck::new("lemma1_unitary", lhs, lit::<T>(4.0) * generalized_coherence(a, &basis)?))
}

/// Element-wise bound on `‖[U,A]‖_F²`:
/// `2√2 ‖A‖ (sqrt(n·Σ_{i≠j}|a_ij|²) + Σ_{i≠j}|a_ij|)`, entries taken in the
/// eigenvector basis of `U`.
///
/// The commonly quoted form carries an extra `2^{-1/4} sqrt(‖A‖)` on the first
/// term. That factor is not scale-invariant and fails for small `‖A‖`; the
/// form here follows from the same steps with the factor set to one.
pub fn lemma1_prime<T: Real>(u: &CMat<T>, a: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(u, a)?;
    ensure_unitary(u)?;
    ensure_hermitian(a)?;
    let basis = CoherenceBasis::of_unitary(u)?;
    let (s1, s2) = elementwise_offdiag(a, &basis)?;
    let n = from_usize::<T>(a.nrows());
    let lhs = frobenius_norm(&comm(u, a)).powi(2);
    let rhs = lit::<T>(2.0 * std::f64::consts::SQRT_2) * operator_norm(a) * ((n * s2).sqrt() + s1);
    Ok(InequalityCheck::new("lemma1_prime", lhs, rhs))
}

/// `‖[A†,BA]‖_F² ≤ 4‖A‖⁴ ℂ_A(B)` for normal `A` and Hermitian `B`.
pub fn lemma2<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(a, b)?;
    ensure_normal(a)?;
    ensure_hermitian(b)?;
    let basis = normal_basis(a)?;
    let ad = a.adjoint();
    let lhs = frobenius_norm(&comm(&ad, &(b * a))).powi(2);
    debug_assert!({
        let other = frobenius_norm(&comm(&ad, &(a * b))).powi(2);
        (lhs - other).abs() <= crate::scalar::tol::<T>(1e-8) * lhs.max(T::one())
    });
    let rhs = lit::<T>(4.0) * operator_norm(a).powi(4) * generalized_coherence(b, &basis)?;
    Ok(InequalityCheck::new("lemma2", lhs, rhs))
}

/// Element-wise bound on `‖[A,BA]‖_F²` for Hermitian `A`, `B`:
/// `‖A²‖² (‖B‖(sqrt(n·Σ_{i≠j}|b_ij|²) + Σ_{i≠j}|b_ij|) + 2ℂ_A(B))`,
/// entries taken in the eigenbasis of `A`.
///
/// As with [`lemma1_prime`], the `2^{-1/4} sqrt(‖B‖)` factor of the quoted
/// form is replaced by one.
pub fn lemma2b<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<InequalityCheck<T>> {
    ensure_same_dim(a, b)?;
    ensure_hermitian(a)?;
    ensure_hermitian(b)?;
    let basis = CoherenceBasis::of_hermitian(a)?;
    let (s1, s2) = elementwise_offdiag(b, &basis)?;
    let n = from_usize::<T>(a.nrows());
    let lhs = frobenius_norm(&comm(a, &(b * a))).powi(2);
    let inner = operator_norm(b) * ((n * s2).sqrt() + s1) + lit::<T>(2.0) * generalized_coherence(b, &basis)?;
    let rhs = operator_norm(&(a * a)).powi(2) * inner;
    Ok(InequalityCheck::new("lemma2b", lhs, rhs))
}

fn delta<T: Real>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

/// Collects `Σ|L − R|` for one identity family and compares it with
/// `1e-10·max(1, Σ|R|)`.
struct Residual<T: Real> {
    diff: T,
    scale: T,
}

impl<T: Real> Residual<T> {
    fn new() -> Self {
        Self { diff: T::zero(), scale: T::zero() }
    }

    fn push(&mut self, l: crate::scalar::Cx<T>, r: crate::scalar::Cx<T>) {
        self.diff += (l - r).modulus();
        self.scale += r.modulus();
    }

    fn finish(self, name: &str) -> InequalityCheck<T> {
        InequalityCheck::with_slack(name, self.diff, lit::<T>(EQUALITY_TOL) * self.scale.max(T::one()), 0.0, 0.0)
    }
}

/// Projector identities for the family of `basis`, one residual check per identity:
///
/// * `prop1`: `tr([Π_i,AΠ_i]†[Π_j,AΠ_j]) = δ_ij ‖[Π_j,AΠ_j]‖_F²` for any `A`;
/// * `prop2`: `‖[Π_i,BΠ_j]‖_F = ‖[Π_i,Π_jB]‖_F`;
/// * `prop3`: `‖[Π_i,BΠ_i]‖_F² = ½‖[Π_i,B]‖_F²`;
/// * `prop4`: the four-index overlap `tr([Π_i,Π_jB]†[Π_a,Π_bB])`;
/// * `cor1`: `‖[Π_i,Π_jB]‖_F² = δ_ij tr(B[BΠ_i,Π_i]) + (1−δ_ij) tr(BΠ_jBΠ_i)`;
/// * `cor2`: `Σ_ij ‖[Π_i,Π_jB]‖_F² = 2ℂ_Π(B)`.
///
/// `B` must be Hermitian. The four-index family is skipped beyond 12 projectors.
pub fn check_propositions<T: Real>(
    basis: &CoherenceBasis<T>,
    a: &CMat<T>,
    b: &CMat<T>,
) -> Result<Vec<InequalityCheck<T>>> {
    ensure_same_dim(a, b)?;
    ensure_hermitian(b)?;
    let ps = basis.projectors();
    if let Some(p) = ps.first() {
        ensure_same_dim(p, a)?;
    }
    let m = ps.len();
    let c = |x: T| crate::scalar::re(x);

    let ap: Vec<CMat<T>> = ps.iter().map(|p| comm(p, &(a * p))).collect();
    let mut p1 = Residual::new();
    for i in 0..m {
        for j in 0..m {
            let l = trace_product(&ap[i].adjoint(), &ap[j]);
            p1.push(l, c(delta::<T>(i, j) * frobenius_norm(&ap[j]).powi(2)));
        }
    }

    // [Π_i, Π_j B] for every ordered pair
    let pb: Vec<Vec<CMat<T>>> = ps.iter().map(|pi| ps.iter().map(|pj| comm(pi, &(pj * b))).collect()).collect();

    let mut p2 = Residual::new();
    let mut cor1 = Residual::new();
    for i in 0..m {
        for j in 0..m {
            let right = frobenius_norm(&pb[i][j]);
            p2.push(c(frobenius_norm(&comm(&ps[i], &(b * &ps[j])))), c(right));
            let expected = if i == j {
                trace(&(b * comm(&(b * &ps[i]), &ps[i])))
            } else {
                trace(&(b * &ps[j] * b * &ps[i]))
            };
            cor1.push(c(right.powi(2)), expected);
        }
    }

    let mut p3 = Residual::new();
    for p in ps {
        let l = frobenius_norm(&comm(p, &(b * p))).powi(2);
        p3.push(c(l), c(lit::<T>(0.5) * frobenius_norm(&comm(p, b)).powi(2)));
    }

    let mut checks = vec![p1.finish("prop1"), p2.finish("prop2"), p3.finish("prop3")];

    if m <= 12 {
        let t1: Vec<Vec<_>> =
            (0..m).map(|i| (0..m).map(|aa| trace(&(b * comm(&(b * &ps[i]), &ps[aa])))).collect()).collect();
        let t2: Vec<Vec<_>> = (0..m).map(|j| (0..m).map(|aa| trace(&(b * &ps[j] * b * &ps[aa]))).collect()).collect();
        let mut p4 = Residual::new();
        for i in 0..m {
            for j in 0..m {
                let lh = pb[i][j].adjoint();
                for aa in 0..m {
                    for (bb, pab) in pb[aa].iter().enumerate() {
                        let l = trace_product(&lh, pab);
                        let w = delta::<T>(i, aa) * delta::<T>(j, bb) - delta::<T>(j, i) * delta::<T>(j, bb);
                        p4.push(l, t1[i][aa] * c(delta::<T>(j, aa) * delta::<T>(aa, bb)) + t2[j][aa] * c(w));
                    }
                }
            }
        }
        checks.push(p4.finish("prop4"));
    }
    checks.push(cor1.finish("cor1"));

    let total = pb.iter().flatten().map(|x| frobenius_norm(x).powi(2)).fold(T::zero(), |s, x| s + x);
    let mut c2 = Residual::new();
    c2.push(c(total), c(lit::<T>(2.0) * generalized_coherence(b, basis)?));
    checks.push(c2.finish("cor2"));
    Ok(checks)
}

/// Trace-inequality bounds on the work `W = tr(ρ0 U†H0U) − tr(ρ0 H0)`.
///
/// With `Δ̂ = H0 − U†H0U` one has `W = −tr(ρ0 Δ̂)`, and von Neumann's trace
/// inequality for the Hermitian pair `(ρ0, Δ̂)` gives
/// `Σ d_i↓ λ_i↑ ≤ tr(ρ0 Δ̂) ≤ Σ d_i↓ λ_i↓`, hence `lower ≤ W ≤ upper`.
/// `singular_upper = Σ d_i σ_i(Δ̂)` bounds `|W|`, and `weyl_upper =
/// 2n·max(d)·‖H0‖` bounds `singular_upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct VonNeumannBounds<T: Real> {
    pub work: T,
    pub lower: T,
    pub upper: T,
    pub singular_upper: T,
    pub weyl_upper: T,
}

impl<T: Real> VonNeumannBounds<T> {
    pub fn checks(&self) -> Vec<InequalityCheck<T>> {
        vec![
            InequalityCheck::new("von_neumann_lower", self.lower, self.work),
            InequalityCheck::new("von_neumann_upper", self.work, self.upper),
            InequalityCheck::new("von_neumann_singular", self.work.abs(), self.singular_upper),
            InequalityCheck::new("von_neumann_weyl", self.singular_upper, self.weyl_upper),
        ]
    }
}

pub fn von_neumann_work_bounds<T: Real>(rho0: &CMat<T>, h0: &CMat<T>, u: &CMat<T>) -> Result<VonNeumannBounds<T>> {
    ensure_same_dim(rho0, h0)?;
    ensure_same_dim(rho0, u)?;
    ensure_density(rho0)?;
    ensure_unitary(u)?;
    ensure_hermitian(h0)?;
    let n = rho0.nrows();
    let delta_hat = h0 - u.adjoint() * h0 * u;
    let work = -trace_product(rho0, &delta_hat).re;

    let (mut d, _) = hermitian_eigen(rho0);
    d.reverse();
    let (lam, _) = hermitian_eigen(&delta_hat);
    let mut lower_tr = T::zero();
    let mut upper_tr = T::zero();
    for i in 0..n {
        lower_tr += d[i] * lam[i];
        upper_tr += d[i] * lam[n - 1 - i];
    }
    let sigma = singular_values(&delta_hat);
    let singular_upper = d.iter().zip(&sigma).fold(T::zero(), |s, (&di, &si)| s + di.max(T::zero()) * si);
    let dmax = d.first().copied().unwrap_or(T::zero());
    let weyl_upper = lit::<T>(2.0) * from_usize::<T>(n) * dmax * operator_norm(h0);
    Ok(VonNeumannBounds { work, lower: -upper_tr, upper: -lower_tr, singular_upper, weyl_upper })
}

/// Renders a matrix for counterexample reports.
pub fn format_matrix<T: Real>(m: &CMat<T>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            let cells: Vec<String> =
                r.iter().map(|z| format!("{:.17e}{:+.17e}i", to_f64(z.re), to_f64(z.im))).collect();
            cells.join(" ")
        })
        .collect();
    rows.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{evolve_unitary, identity};
    use crate::pauli;
    use crate::sample::{random_density, random_hermitian, random_matrix, random_unitary, rng};
    use crate::scalar::re;
    use num_complex::Complex;
    use proptest::prelude::*;

    fn diag(v: &[f64]) -> CMat<f64> {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| re(x))))
    }

    fn projector(n: usize, k: usize) -> CMat<f64> {
        let mut p = CMat::zeros(n, n);
        p[(k, k)] = re(1.0);
        p
    }

    #[test]
    fn check_record_semantics() {
        let c = InequalityCheck::new("x", 0.0, 0.0);
        assert!(c.holds);
        assert_eq!(c.slack_ratio, 0.0);
        assert!(InequalityCheck::new("x", 1.0 + 5e-10, 1.0).holds);
        assert!(!InequalityCheck::new("x", 1.0 + 2e-9, 1.0).holds);
        assert!(InequalityCheck::new("x", 5e-13, 0.0).holds);
        assert!(!InequalityCheck::new("x", 1e-6, 0.0).holds);
    }

    #[test]
    fn frobenius_trace_examples() {
        let c = frobenius_trace_ineq(&identity::<f64>(3), &identity(3)).unwrap();
        assert!((c.lhs - 3.0).abs() < 1e-14 && (c.rhs - 3.0).abs() < 1e-14);
        assert!((c.slack_ratio - 1.0).abs() < 1e-14);
        let c = frobenius_trace_ineq(&pauli::x::<f64>(), &pauli::z()).unwrap();
        assert!(c.lhs.abs() < 1e-15 && (c.rhs - 2.0).abs() < 1e-14);
    }

    #[test]
    fn frobenius_trace_saturates_for_proportional_arguments() {
        let a = random_matrix::<f64>(&mut rng(41), 4);
        let b = &a * Complex::new(-0.3, 1.7);
        let c = frobenius_trace_ineq(&a, &b).unwrap();
        assert!(c.holds && (c.slack_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn holder_rank_examples() {
        let c = holder_rank_trace_ineq(&identity::<f64>(4), &projector(4, 0), 1e-10).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-14 && (c.rhs - 1.0).abs() < 1e-14);
        let c = holder_rank_trace_ineq(&diag(&[2.0, 1.0]), &diag(&[1.0, 1.0]), 1e-10).unwrap();
        assert!((c.lhs - 3.0).abs() < 1e-14 && (c.rhs - 4.0).abs() < 1e-13);
    }

    #[test]
    fn lemma1_examples() {
        let c = lemma1(&diag(&[1.0, -2.0, 0.5]), &diag(&[3.0, 1.0, 1.0])).unwrap();
        assert!(c.lhs == 0.0 && c.rhs.abs() < 1e-15 && c.holds);
        let c = lemma1(&pauli::z::<f64>(), &pauli::x()).unwrap();
        assert!((c.lhs - 8.0).abs() < 1e-13 && (c.rhs - 8.0).abs() < 1e-13 && c.holds);
    }

    #[test]
    fn lemma1_rejects_bad_inputs() {
        let shear = CMat::from_row_slice(2, 2, &[re(1.0), re(1.0), re(0.0), re(1.0)]);
        assert!(matches!(lemma1(&shear, &pauli::x()), Err(crate::error::Error::NotNormal { .. })));
        let nonherm = random_matrix::<f64>(&mut rng(42), 2);
        assert!(matches!(lemma1(&pauli::z(), &nonherm), Err(crate::error::Error::NotHermitian { .. })));
    }

    #[test]
    fn unitary_corollary_examples() {
        let c = lemma1_unitary_corollary(&identity::<f64>(3), &random_hermitian(&mut rng(43), 3)).unwrap();
        assert!(c.lhs < 1e-28 && c.rhs < 1e-24);
        let c = lemma1_unitary_corollary(&pauli::z::<f64>(), &pauli::x()).unwrap();
        assert!((c.lhs - 8.0).abs() < 1e-13 && (c.rhs - 8.0).abs() < 1e-13);
        assert!(matches!(
            lemma1_unitary_corollary(&diag(&[1.0, 2.0]), &pauli::x()),
            Err(crate::error::Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn lemma1_prime_examples() {
        let c = lemma1_prime(&pauli::z::<f64>(), &diag(&[0.3, -1.0])).unwrap();
        assert!(c.lhs < 1e-28 && c.rhs < 1e-14);
        // σ_x in the σ_z basis: off-diagonal sums are 2 and 2
        let c = lemma1_prime(&pauli::z::<f64>(), &pauli::x()).unwrap();
        let expected = 2.0 * 2f64.sqrt() * ((2.0f64 * 2.0).sqrt() + 2.0);
        assert!((c.lhs - 8.0).abs() < 1e-13);
        assert!((c.rhs - expected).abs() < 1e-12);
    }

    // The quoted form `2√2‖A‖(2^{-1/4} sqrt(n‖A‖) sqrt(S2) + S1)` drops
    // below the left side once ‖A‖ is small.
    #[test]
    fn lemma1_prime_quoted_form_fails_at_small_scale() {
        let eps = 1e-2;
        let a = pauli::x::<f64>() * re(eps);
        let c = lemma1_prime(&pauli::z::<f64>(), &a).unwrap();
        let quoted = 2.0 * 2f64.sqrt() * eps * (2f64.powf(-0.25) * (2.0 * eps).sqrt() * (2.0f64).sqrt() * eps + 2.0 * eps);
        assert!(c.lhs > quoted * 1.3);
        assert!(c.holds);
    }

    #[test]
    fn lemma2_examples() {
        let a = diag(&[1.0, 2.0, -1.0]);
        let c = lemma2(&a, &(&a * &a + identity(3))).unwrap();
        assert!(c.lhs < 1e-28 && c.rhs < 1e-14);
        let c = lemma2(&pauli::z::<f64>(), &pauli::x()).unwrap();
        let direct = frobenius_norm(&comm(&pauli::z::<f64>(), &(pauli::x::<f64>() * pauli::z::<f64>()))).powi(2);
        assert!((c.lhs - direct).abs() < 1e-14);
        assert!((c.lhs - 8.0).abs() < 1e-13 && (c.rhs - 8.0).abs() < 1e-13);
    }

    #[test]
    fn lemma2_sides_agree_under_reordering() {
        let mut r = rng(44);
        for n in [2, 3, 5] {
            let a = random_hermitian::<f64>(&mut r, n);
            let b = random_hermitian::<f64>(&mut r, n);
            let l = frobenius_norm(&comm(&a.adjoint(), &(&b * &a)));
            let rr = frobenius_norm(&comm(&a.adjoint(), &(&a * &b)));
            assert!((l - rr).abs() < 1e-10 * l.max(1.0));
            let u = random_unitary::<f64>(&mut r, n);
            let l = frobenius_norm(&comm(&u.adjoint(), &(&b * &u)));
            let rr = frobenius_norm(&comm(&u.adjoint(), &(&u * &b)));
            assert!((l - rr).abs() < 1e-10 * l.max(1.0));
        }
    }

    #[test]
    fn lemma2b_examples() {
        let a = diag(&[1.0, 2.0]);
        let c = lemma2b(&a, &diag(&[0.5, 4.0])).unwrap();
        assert!(c.lhs < 1e-28 && c.rhs < 1e-14);
        // A = diag(1,2), B = σ_x: [A, BA] = [[0,-2],[1,0]], so lhs = 5.
        // In A's basis S1 = 2, S2 = 2, ℂ = 2, ‖A²‖ = 4, ‖B‖ = 1.
        let c = lemma2b(&a, &pauli::x()).unwrap();
        assert!((c.lhs - 5.0).abs() < 1e-13);
        assert!((c.rhs - 16.0 * ((4.0f64).sqrt() + 2.0 + 4.0)).abs() < 1e-12);
    }

    #[test]
    fn lemma2b_quoted_form_has_counterexamples() {
        // the quoted form multiplies the first term by 2^{-1/4} sqrt(‖B‖)
        let mut r = rng(45);
        let mut found = false;
        for _ in 0..4000 {
            let n = 2 + r.random_range(0..5usize);
            let a = random_hermitian::<f64>(&mut r, n) * re(10f64.powf(r.random_range(-2.0..2.0)));
            let b = random_hermitian::<f64>(&mut r, n) * re(10f64.powf(r.random_range(-3.0..1.0)));
            let basis = CoherenceBasis::of_hermitian(&a).unwrap();
            let (s1, s2) = elementwise_offdiag(&b, &basis).unwrap();
            let nb = operator_norm(&b);
            let quoted = operator_norm(&(&a * &a)).powi(2)
                * (nb * (2f64.powf(-0.25) * nb.sqrt() * (n as f64).sqrt() * s2.sqrt() + s1)
                    + 2.0 * generalized_coherence(&b, &basis).unwrap());
            let c = lemma2b(&a, &b).unwrap();
            assert!(c.holds);
            if c.lhs > quoted * (1.0 + 1e-9) {
                found = true;
                break;
            }
        }
        assert!(found);
    }

    use rand::Rng;

    #[test]
    fn propositions_on_pauli_basis() {
        let basis = CoherenceBasis::of_hermitian(&pauli::z::<f64>()).unwrap();
        let checks = check_propositions(&basis, &pauli::x(), &pauli::x()).unwrap();
        assert_eq!(checks.len(), 6);
        for c in checks {
            assert!(c.holds && c.lhs < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn propositions_on_random_and_degenerate_bases() {
        let mut r = rng(46);
        let h = random_hermitian::<f64>(&mut r, 6);
        let a = random_matrix::<f64>(&mut r, 6);
        let b = random_hermitian::<f64>(&mut r, 6);
        for c in check_propositions(&CoherenceBasis::of_hermitian(&h).unwrap(), &a, &b).unwrap() {
            assert!(c.holds, "{c:?}");
        }
        let q = random_unitary::<f64>(&mut r, 6);
        let degenerate = &q * diag(&[1.0, 1.0, 1.0, -2.0, 0.5, 3.0]) * q.adjoint();
        let basis = CoherenceBasis::of_hermitian(&degenerate).unwrap();
        assert_eq!(basis.decomposition().multiplicities(), vec![1, 1, 3, 1]);
        for c in check_propositions(&basis, &a, &b).unwrap() {
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn proposition2_needs_hermitian_b() {
        let basis = CoherenceBasis::of_hermitian(&pauli::z::<f64>()).unwrap();
        assert!(check_propositions(&basis, &pauli::x(), &random_matrix(&mut rng(47), 2)).is_err());
    }

    #[test]
    fn von_neumann_identity_unitary() {
        let mut r = rng(48);
        let rho = random_density::<f64>(&mut r, 4, 2);
        let vn = von_neumann_work_bounds(&rho, &random_hermitian(&mut r, 4), &identity(4)).unwrap();
        for v in [vn.work, vn.lower, vn.upper, vn.singular_upper] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn von_neumann_qubit_time_grid() {
        let rho = pauli::bloch_state([0.0, 0.0, 0.5]);
        let h0 = pauli::z::<f64>();
        for k in 0..40 {
            let t = 0.1 * k as f64;
            let u = evolve_unitary(&pauli::x(), t).unwrap();
            let vn = von_neumann_work_bounds(&rho, &h0, &u).unwrap();
            // spin flips population: W = tr(ρ_t σ_z) − 1 = cos(2t) − 1
            let direct = (2.0 * t).cos() - 1.0;
            assert!((vn.work - direct).abs() < 1e-12);
            for c in vn.checks() {
                assert!(c.holds, "t={t} {c:?}");
            }
        }
    }

    #[test]
    fn von_neumann_random_sandwich() {
        let mut r = rng(49);
        for _ in 0..200 {
            let k = 1 + r.random_range(0..6usize);
            let rho = random_density::<f64>(&mut r, 6, k);
            let h0 = random_hermitian::<f64>(&mut r, 6);
            let u = random_unitary::<f64>(&mut r, 6);
            let vn = von_neumann_work_bounds(&rho, &h0, &u).unwrap();
            let direct = trace(&(&u * &rho * u.adjoint() * &h0)).re - trace(&(&rho * &h0)).re;
            assert!((vn.work - direct).abs() < 1e-10);
            for c in vn.checks() {
                assert!(c.holds, "{c:?}");
            }
        }
    }

    // Pairing singular values of ρ0 and Δ̂ in opposite order does not give a
    // lower bound on |W|.
    #[test]
    fn singular_value_pairing_is_not_a_lower_bound() {
        let mut r = rng(50);
        let mut violations = 0;
        for _ in 0..100 {
            let rho = random_density::<f64>(&mut r, 4, 4);
            let h0 = random_hermitian::<f64>(&mut r, 4);
            let u = random_unitary::<f64>(&mut r, 4);
            let delta_hat = &h0 - u.adjoint() * &h0 * &u;
            let (mut d, _) = hermitian_eigen(&rho);
            d.reverse();
            let s = singular_values(&delta_hat);
            let paired: f64 = (0..4).map(|i| d[3 - i] * s[i]).sum();
            let w = von_neumann_work_bounds(&rho, &h0, &u).unwrap().work;
            if paired > w.abs() {
                violations += 1;
            }
        }
        assert!(violations > 10);
    }

    #[test]
    fn von_neumann_rejects_non_density() {
        let bad = diag(&[0.7, 0.7]);
        assert!(matches!(
            von_neumann_work_bounds(&bad, &pauli::z(), &identity(2)),
            Err(crate::error::Error::NotDensityMatrix { .. })
        ));
    }

    #[test]
    fn f32_lemmas() {
        let c = lemma1(&pauli::z::<f32>(), &pauli::x::<f32>()).unwrap();
        assert!((c.lhs - 8.0).abs() < 1e-5 && c.holds);
    }

    fn sweep_dims() -> impl Strategy<Value = (usize, u64)> {
        (prop::sample::select(vec![2usize, 3, 4, 6, 8]), any::<u64>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn trace_inequalities_hold((n, seed) in sweep_dims()) {
            let mut r = rng(seed);
            let a = random_matrix::<f64>(&mut r, n);
            let b = random_density::<f64>(&mut r, n, 1 + (seed as usize) % n);
            prop_assert!(frobenius_trace_ineq(&a, &b).unwrap().holds);
            prop_assert!(holder_rank_trace_ineq(&a, &b, 1e-9).unwrap().holds);
        }

        #[test]
        fn coherence_lemmas_hold((n, seed) in sweep_dims(), scale in -1.0f64..1.0) {
            let mut r = rng(seed);
            let a = random_hermitian::<f64>(&mut r, n) * re(10f64.powf(scale));
            let b = random_hermitian::<f64>(&mut r, n);
            let u = random_unitary::<f64>(&mut r, n);
            for c in [
                lemma1(&a, &b).unwrap(),
                lemma1(&u, &b).unwrap(),
                lemma1_unitary_corollary(&u, &b).unwrap(),
                lemma1_prime(&u, &b).unwrap(),
                lemma2(&a, &b).unwrap(),
                lemma2(&u, &b).unwrap(),
                lemma2b(&a, &b).unwrap(),
            ] {
                prop_assert!(c.holds, "{:?}", c);
            }
        }

        #[test]
        fn propositions_hold((n, seed) in sweep_dims()) {
            let mut r = rng(seed);
            let basis = CoherenceBasis::of_hermitian(&random_hermitian::<f64>(&mut r, n)).unwrap();
            let a = random_matrix::<f64>(&mut r, n);
            let b = random_hermitian::<f64>(&mut r, n);
            for c in check_propositions(&basis, &a, &b).unwrap() {
                prop_assert!(c.holds, "{:?}", c);
            }
        }
    }
}
