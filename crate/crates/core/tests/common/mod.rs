#![allow(dead_code)]

use quench_core::linalg::ComplexMatrix;
use quench_core::{Complex64, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn projector(v: &[Complex64]) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

pub fn bell() -> DensityMatrix<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(vec![0, 1], &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
}

pub fn ghz(n: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    v[0] = c(s, 0.0);
    v[(1 << n) - 1] = c(s, 0.0);
    v
}

/// Kronecker product of vectors, first factor most significant.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn mixed(n_sites: usize) -> DensityMatrix<f64> {
    let d = 1 << n_sites;
    DensityMatrix::new(
        (0..n_sites).collect(),
        ComplexMatrix::from_diag(&vec![1.0 / d as f64; d]),
    )
    .unwrap()
}
