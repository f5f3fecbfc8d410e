//! Deterministic random fixtures shared by unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::ComplexMatrix;
use crate::scalar::C;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix<f64> {
    random_matrix(rng, n, n).hermitian_part()
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> Vec<C<f64>> {
    let v: Vec<C<f64>> = (0..dim)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random density matrix `A A† / tr(A A†)`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix<f64> {
    let a = random_matrix(rng, n, n);
    let r = a.matmul(&a.adjoint());
    let t = r.trace().re;
    r.scale_real(1.0 / t).hermitian_part()
}
