//! Dense complex matrix kernel.
//!
//! Norms, numerical rank, commutators, spectral projectors of Hermitian,
//! unitary and normal operators, and the matrix exponential of a Hermitian
//! generator computed from its eigendecomposition.

use crate::error::{Error, Result};
use crate::scalar::{cis, from_usize, lit, re, to_f64, tol, CMat, Cx, Real};
use nalgebra::ComplexField;
use num_complex::Complex;
use std::cmp::Ordering;

/// Relative cutoff below which singular values do not count toward the rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Eigenvalues closer than this share a spectral projector.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

const HERMITIAN_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-8;
const NORMAL_TOL: f64 = 1e-8;

pub(crate) fn ensure_square<T: Real>(m: &CMat<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_same_dim<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<usize> {
    let n = ensure_square(a)?;
    let m = ensure_square(b)?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    Ok(n)
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

pub fn trace<T: Real>(m: &CMat<T>) -> Cx<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// `tr(A B)` without forming the product.
pub fn trace_product<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Cx<T> {
    let n = a.nrows();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn frobenius_norm<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    s
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &CMat<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank<T: Real>(m: &CMat<T>, tol: T) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > T::zero() => s.iter().filter(|&&x| x > tol * smax).count(),
        _ => 0,
    }
}

/// Rank with the default relative cutoff.
pub fn rank<T: Real>(m: &CMat<T>) -> usize {
    numerical_rank(m, lit(DEFAULT_RANK_TOL))
}

pub fn commutator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    ensure_same_dim(a, b)?;
    Ok(a * b - b * a)
}

pub(crate) fn comm<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a * b - b * a
}

pub fn hermitian_residual<T: Real>(m: &CMat<T>) -> T {
    frobenius_norm(&(m - m.adjoint()))
}

pub fn unitary_residual<T: Real>(m: &CMat<T>) -> T {
    frobenius_norm(&(m.adjoint() * m - identity::<T>(m.nrows())))
}

pub fn normal_residual<T: Real>(m: &CMat<T>) -> T {
    let ad = m.adjoint();
    frobenius_norm(&(m * &ad - ad * m))
}

pub fn ensure_hermitian<T: Real>(m: &CMat<T>) -> Result<()> {
    ensure_square(m)?;
    let r = hermitian_residual(m);
    if r > tol::<T>(HERMITIAN_TOL) * frobenius_norm(m).max(T::one()) {
        return Err(Error::NotHermitian { residual: to_f64(r) });
    }
    Ok(())
}

pub fn ensure_unitary<T: Real>(m: &CMat<T>) -> Result<()> {
    ensure_square(m)?;
    let r = unitary_residual(m);
    if r > tol::<T>(UNITARY_TOL) {
        return Err(Error::NotUnitary { residual: to_f64(r) });
    }
    Ok(())
}

pub fn ensure_normal<T: Real>(m: &CMat<T>) -> Result<()> {
    ensure_square(m)?;
    let f = frobenius_norm(m);
    let r = normal_residual(m);
    if r > tol::<T>(NORMAL_TOL) * (f * f).max(T::one()) {
        return Err(Error::NotNormal { residual: to_f64(r) });
    }
    Ok(())
}

/// Validates a density matrix: Hermitian, unit trace and positive semidefinite.
pub fn ensure_density<T: Real>(rho: &CMat<T>) -> Result<()> {
    ensure_square(rho)?;
    let h = hermitian_residual(rho);
    if h > tol::<T>(HERMITIAN_TOL) {
        return Err(Error::NotDensityMatrix { reason: format!("hermiticity residual {:.3e}", to_f64(h)) });
    }
    let t = trace(rho);
    if (t.re - T::one()).abs() > tol::<T>(1e-10) || t.im.abs() > tol::<T>(1e-10) {
        return Err(Error::NotDensityMatrix { reason: format!("trace {} + {}i", t.re, t.im) });
    }
    let (vals, _) = hermitian_eigen(rho);
    if let Some(&min) = vals.first() {
        if min < -tol::<T>(1e-10) {
            return Err(Error::NotDensityMatrix { reason: format!("negative eigenvalue {min}") });
        }
    }
    Ok(())
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a Hermitian matrix.
///
/// The input is symmetrized before decomposition.
pub fn hermitian_eigen<T: Real>(m: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let half = lit::<T>(0.5);
    let sym = (m + m.adjoint()).map(|z| z * re(half));
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(Ordering::Equal));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Which spectral structure a decomposition was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    Hermitian,
    Unitary,
    Normal,
}

/// Eigenvalues with grouped orthogonal projectors, `M = Σ_j λ_j Π_j`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Real> {
    kind: SpectralKind,
    eigenvalues: Vec<Cx<T>>,
    projectors: Vec<CMat<T>>,
    bases: Vec<CMat<T>>,
    cluster_tol: T,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    pub fn eigenvalues(&self) -> &[Cx<T>] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[CMat<T>] {
        &self.projectors
    }

    /// Orthonormal eigenvector block spanning each projector's range.
    pub fn bases(&self) -> &[CMat<T>] {
        &self.bases
    }

    pub fn cluster_tol(&self) -> T {
        self.cluster_tol
    }

    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.nrows())
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// `Σ_j λ_j Π_j`.
    pub fn reconstruct(&self) -> CMat<T> {
        let n = self.dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(CMat::zeros(n, n), |acc, (l, p)| acc + p * *l)
    }

    /// Unitary whose columns are eigenvectors, ordered block by block.
    pub fn eigenbasis(&self) -> CMat<T> {
        let n = self.dim();
        let mut q = CMat::zeros(n, n);
        let mut col = 0;
        for b in &self.bases {
            for c in 0..b.ncols() {
                q.set_column(col, &b.column(c));
                col += 1;
            }
        }
        q
    }

    /// Block dimension of each projector.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.ncols()).collect()
    }

    /// Builds the decomposition of `f(M)` for a scalar map `f`, merging blocks
    /// whose images fall within the clustering tolerance.
    pub fn map_spectrum(&self, kind: SpectralKind, f: impl Fn(Cx<T>) -> Cx<T>) -> Result<Self> {
        let items: Vec<(Cx<T>, CMat<T>)> =
            self.eigenvalues.iter().zip(&self.bases).map(|(l, b)| (f(*l), b.clone())).collect();
        group(items, kind, self.cluster_tol)
    }
}

fn distance<T: Real>(kind: SpectralKind, a: Cx<T>, b: Cx<T>) -> T {
    match kind {
        SpectralKind::Hermitian => (a.re - b.re).abs(),
        SpectralKind::Unitary => {
            let r = a * b.conj();
            r.im.atan2(r.re).abs()
        }
        SpectralKind::Normal => (a - b).modulus(),
    }
}

fn order_key<T: Real>(kind: SpectralKind, z: Cx<T>) -> (T, T) {
    match kind {
        SpectralKind::Hermitian => (z.re, T::zero()),
        SpectralKind::Unitary => (z.im.atan2(z.re), T::zero()),
        SpectralKind::Normal => (z.re, z.im),
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage grouping of eigen-blocks into spectral projectors.
fn group<T: Real>(items: Vec<(Cx<T>, CMat<T>)>, kind: SpectralKind, cluster_tol: T) -> Result<SpectralDecomposition<T>> {
    let k = items.len();
    let mut parent: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            if distance(kind, items[i].0, items[j].0) <= cluster_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(c) => clusters[c].push(i),
            None => {
                root_of[r] = Some(clusters.len());
                clusters.push(vec![i]);
            }
        }
    }

    let ten = lit::<T>(10.0);
    let mut out: Vec<(Cx<T>, CMat<T>)> = Vec::with_capacity(clusters.len());
    for members in clusters {
        let mut span = T::zero();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                span = span.max(distance(kind, items[i].0, items[j].0));
            }
        }
        if span > ten * cluster_tol {
            return Err(Error::DegenerateClustering { span: to_f64(span), tol: to_f64(cluster_tol) });
        }
        let weight: usize = members.iter().map(|&i| items[i].1.ncols()).sum();
        let mut value = Complex::new(T::zero(), T::zero());
        for &i in &members {
            value += items[i].0 * re(from_usize::<T>(items[i].1.ncols()));
        }
        value /= re(from_usize::<T>(weight));
        match kind {
            SpectralKind::Hermitian => value.im = T::zero(),
            SpectralKind::Unitary => {
                let m = value.modulus();
                if m > T::zero() {
                    value /= re(m);
                }
            }
            SpectralKind::Normal => {}
        }
        let n = items[members[0]].1.nrows();
        let mut basis = CMat::zeros(n, weight);
        let mut col = 0;
        for &i in &members {
            let b = &items[i].1;
            for c in 0..b.ncols() {
                basis.set_column(col, &b.column(c));
                col += 1;
            }
        }
        out.push((value, basis));
    }
    out.sort_by(|a, b| order_key(kind, a.0).partial_cmp(&order_key(kind, b.0)).unwrap_or(Ordering::Equal));

    let mut eigenvalues = Vec::with_capacity(out.len());
    let mut projectors = Vec::with_capacity(out.len());
    let mut bases = Vec::with_capacity(out.len());
    for (v, b) in out {
        projectors.push(&b * b.adjoint());
        eigenvalues.push(v);
        bases.push(b);
    }
    Ok(SpectralDecomposition { kind, eigenvalues, projectors, bases, cluster_tol })
}

/// Spectral projectors of a Hermitian or unitary matrix with eigenvalues
/// grouped by single linkage at `cluster_tol`.
pub fn spectral_projectors<T: Real>(m: &CMat<T>, kind: SpectralKind, cluster_tol: T) -> Result<SpectralDecomposition<T>> {
    match kind {
        SpectralKind::Hermitian => ensure_hermitian(m)?,
        SpectralKind::Unitary => ensure_unitary(m)?,
        SpectralKind::Normal => ensure_normal(m)?,
    }
    let n = m.nrows();
    let items: Vec<(Cx<T>, CMat<T>)> = match kind {
        SpectralKind::Hermitian => {
            let (vals, vecs) = hermitian_eigen(m);
            (0..n).map(|i| (re(vals[i]), vecs.columns(i, 1).into_owned())).collect()
        }
        SpectralKind::Unitary | SpectralKind::Normal => {
            let (q, t) = m.clone().schur().unpack();
            (0..n).map(|i| (t[(i, i)], q.columns(i, 1).into_owned())).collect()
        }
    };
    group(items, kind, cluster_tol)
}

/// Hermitian decomposition with the default clustering tolerance.
pub fn hermitian_projectors<T: Real>(m: &CMat<T>) -> Result<SpectralDecomposition<T>> {
    spectral_projectors(m, SpectralKind::Hermitian, lit(DEFAULT_CLUSTER_TOL))
}

/// `exp(-iHt)` assembled from the eigendecomposition of `H`.
pub fn evolve_unitary<T: Real>(h: &CMat<T>, t: T) -> Result<CMat<T>> {
    ensure_hermitian(h)?;
    let (vals, vecs) = hermitian_eigen(h);
    Ok(exp_from_eigen(&vals, &vecs, t))
}

pub(crate) fn exp_from_eigen<T: Real>(vals: &[T], vecs: &CMat<T>, t: T) -> CMat<T> {
    let mut scaled = vecs.clone();
    for (c, &l) in vals.iter().enumerate() {
        let phase = cis(-l * t);
        for z in scaled.column_mut(c).iter_mut() {
            *z *= phase;
        }
    }
    scaled * vecs.adjoint()
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitian_part<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + m.adjoint()).map(|z| z * re(lit::<T>(0.5)))
}
