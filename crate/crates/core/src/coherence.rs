//! Coherence of an operator relative to the spectral projectors of another.
//!
//! For a projector family `{Π_j}` the generalized coherence is
//! `ℂ(X) = ½ Σ_j ‖[X, Π_j]‖_F²`, which coincides with the squared Frobenius
//! weight of the off-diagonal blocks, `‖X − 𝒟(X)‖_F²`, where
//! `𝒟(X) = Σ_j Π_j X Π_j` is the dephasing map.

use crate::error::Result;
use crate::linalg::{
    comm, ensure_same_dim, frobenius_norm, hermitian_projectors, spectral_projectors, SpectralDecomposition,
    SpectralKind, DEFAULT_CLUSTER_TOL,
};
use crate::scalar::{lit, tol, CMat, Real};

/// Projector family defining a coherence basis.
#[derive(Debug, Clone)]
pub struct CoherenceBasis<T: Real> {
    decomposition: SpectralDecomposition<T>,
}

impl<T: Real> CoherenceBasis<T> {
    pub fn new(decomposition: SpectralDecomposition<T>) -> Self {
        Self { decomposition }
    }

    /// Eigenbasis of a Hermitian operator.
    pub fn of_hermitian(m: &CMat<T>) -> Result<Self> {
        Ok(Self::new(hermitian_projectors(m)?))
    }

    /// Eigenbasis of a unitary operator.
    pub fn of_unitary(m: &CMat<T>) -> Result<Self> {
        Ok(Self::new(spectral_projectors(m, SpectralKind::Unitary, lit(DEFAULT_CLUSTER_TOL))?))
    }

    /// Eigenbasis of a normal operator.
    pub fn of_normal(m: &CMat<T>) -> Result<Self> {
        Ok(Self::new(spectral_projectors(m, SpectralKind::Normal, lit(DEFAULT_CLUSTER_TOL))?))
    }

    pub fn decomposition(&self) -> &SpectralDecomposition<T> {
        &self.decomposition
    }

    pub fn projectors(&self) -> &[CMat<T>] {
        self.decomposition.projectors()
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    fn check(&self, x: &CMat<T>) -> Result<()> {
        match self.projectors().first() {
            Some(p) => ensure_same_dim(p, x).map(|_| ()),
            None => Ok(()),
        }
    }
}

/// `𝒟(X) = Σ_j Π_j X Π_j`.
pub fn dephase<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<CMat<T>> {
    basis.check(x)?;
    let n = x.nrows();
    Ok(basis.projectors().iter().fold(CMat::zeros(n, n), |acc, p| acc + p * x * p))
}

/// `½ Σ_j ‖[X, Π_j]‖_F²`, evaluated as the weight of the entries of `Q†XQ`
/// that couple different eigenvalue blocks.
pub fn generalized_coherence<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<T> {
    basis.check(x)?;
    let e = entries_in_eigenbasis(x, basis)?;
    let mut block = Vec::with_capacity(x.nrows());
    for (b, m) in basis.decomposition().multiplicities().into_iter().enumerate() {
        block.extend(std::iter::repeat_n(b, m));
    }
    let mut value = T::zero();
    for j in 0..e.ncols() {
        for i in 0..e.nrows() {
            if block[i] != block[j] {
                value += e[(i, j)].norm_sqr();
            }
        }
    }
    debug_assert!(x.nrows() > 32 || {
        let half = lit::<T>(0.5);
        let alt = basis
            .projectors()
            .iter()
            .map(|p| frobenius_norm(&comm(x, p)).powi(2))
            .fold(T::zero(), |a, b| a + b)
            * half;
        (value - alt).abs() <= tol::<T>(1e-8) * alt.max(T::one())
    });
    Ok(value)
}

/// `‖X − 𝒟(X)‖_F²`, the block off-diagonal weight.
pub fn offdiag_weight<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<T> {
    let d = dephase(x, basis)?;
    Ok(frobenius_norm(&(x - d)).powi(2))
}

/// `Σ_{i≠j} ‖Π_i X Π_j‖_F`, which reduces to `Σ_{i≠j} |x_ij|` for rank-one projectors.
pub fn l1_offdiag<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<T> {
    basis.check(x)?;
    let ps = basis.projectors();
    let mut total = T::zero();
    for (i, pi) in ps.iter().enumerate() {
        let left = pi * x;
        for (j, pj) in ps.iter().enumerate() {
            if i != j {
                total += frobenius_norm(&(&left * pj));
            }
        }
    }
    Ok(total)
}

/// Entries of `X` in the eigenvector basis of the decomposition, `Q† X Q`.
pub fn entries_in_eigenbasis<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<CMat<T>> {
    basis.check(x)?;
    let q = basis.decomposition().eigenbasis();
    Ok(q.adjoint() * x * q)
}

/// Element-wise off-diagonal sums `(Σ_{i≠j}|x_ij|, Σ_{i≠j}|x_ij|²)` in the eigenvector basis.
pub fn elementwise_offdiag<T: Real>(x: &CMat<T>, basis: &CoherenceBasis<T>) -> Result<(T, T)> {
    let e = entries_in_eigenbasis(x, basis)?;
    let n = e.nrows();
    let (mut l1, mut l2) = (T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let m2 = e[(i, j)].norm_sqr();
                l1 += m2.sqrt();
                l2 += m2;
            }
        }
    }
    Ok((l1, l2))
}
