//! Seeded random ensembles used by the verification sweeps.

use crate::linalg::hermitian_projectors;
use crate::scalar::{lit, re, CMat, Real};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic per-cell seed derived from a master seed.
pub fn cell_seed(master: u64, dim: usize, index: usize) -> u64 {
    // splitmix64 finalizer over the packed coordinates
    let mut z = master ^ ((dim as u64) << 48) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn normal<T: Real>(r: &mut impl Rng) -> T {
    lit(r.sample::<f64, _>(StandardNormal))
}

/// Ginibre matrix with independent standard complex Gaussian entries.
pub fn random_matrix<T: Real>(r: &mut impl Rng, n: usize) -> CMat<T> {
    let s = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    CMat::from_fn(n, n, |_, _| Complex::new(normal::<T>(r) * s, normal::<T>(r) * s))
}

pub fn random_hermitian<T: Real>(r: &mut impl Rng, n: usize) -> CMat<T> {
    let g = random_matrix::<T>(r, n);
    (&g + g.adjoint()).map(|z| z * re(lit::<T>(0.5)))
}

/// Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix.
pub fn random_unitary<T: Real>(r: &mut impl Rng, n: usize) -> CMat<T> {
    let (q, rr) = random_matrix::<T>(r, n).qr().unpack();
    let mut q = q;
    for c in 0..n {
        let d = rr[(c, c)];
        let m = (d.re * d.re + d.im * d.im).sqrt();
        if m > T::zero() {
            let phase = Complex::new(d.re / m, d.im / m);
            for z in q.column_mut(c).iter_mut() {
                *z *= phase;
            }
        }
    }
    q
}

/// Density matrix of the given rank, `G G† / tr(G G†)` with `G` of shape n×rank.
pub fn random_density<T: Real>(r: &mut impl Rng, n: usize, rank: usize) -> CMat<T> {
    let s = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let g = CMat::from_fn(n, rank.max(1), |_, _| Complex::new(normal::<T>(r) * s, normal::<T>(r) * s));
    let w = &g * g.adjoint();
    let t = crate::linalg::trace(&w).re;
    w / re(t)
}

/// Density matrix with rank drawn uniformly from `1..=n`.
pub fn random_density_any_rank<T: Real>(r: &mut impl Rng, n: usize) -> CMat<T> {
    let k = r.random_range(1..=n);
    random_density(r, n, k)
}

/// Complete Kraus family `{A_a}` cut from the blocks of a random isometry.
pub fn random_kraus<T: Real>(r: &mut impl Rng, n: usize, count: usize) -> Vec<CMat<T>> {
    let big = random_unitary::<T>(r, n * count);
    (0..count).map(|a| big.view((a * n, 0), (n, n)).into_owned()).collect()
}

/// Complete family of Hermitian Kraus operators `A_a = Σ_j ±sqrt(p_aj) Π_j`
/// built on the spectral projectors of a random Hermitian matrix.
pub fn random_hermitian_kraus<T: Real>(r: &mut impl Rng, n: usize, count: usize) -> Vec<CMat<T>> {
    let h = random_hermitian::<T>(r, n);
    let dec = hermitian_projectors(&h).expect("random Hermitian matrix decomposes");
    let mut ops = vec![CMat::<T>::zeros(n, n); count];
    for p in dec.projectors() {
        let w: Vec<f64> = (0..count).map(|_| r.random::<f64>() + 1e-3).collect();
        let total: f64 = w.iter().sum();
        for (a, wa) in w.iter().enumerate() {
            let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
            ops[a] += p * re(lit::<T>(sign * (wa / total).sqrt()));
        }
    }
    ops
}

/// Random Hermitian matrix scaled by a log-uniform factor in `[1/spread, spread]`.
pub fn random_hermitian_scaled<T: Real>(r: &mut impl Rng, n: usize, spread: f64) -> CMat<T> {
    let e: f64 = r.random_range(-1.0..1.0);
    random_hermitian::<T>(r, n) * re(lit::<T>(spread.powf(e)))
}
