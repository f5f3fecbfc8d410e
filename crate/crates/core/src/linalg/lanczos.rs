//! Lanczos iteration with full reorthogonalization for the lowest eigenpair
//! of a Hermitian operator given only through its action on vectors.

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eig;
use crate::scalar::{cz, Real, C};

#[derive(Clone, Debug)]
pub(crate) struct LanczosResult<T> {
    pub value: T,
    pub vector: Vec<C<T>>,
}

pub(crate) struct LanczosOptions<T> {
    /// Krylov dimension before a restart from the current Ritz vector.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Convergence threshold on `‖H x − λ x‖ / max(1, |λ|)`.
    pub tol: T,
}

impl<T: Real> Default for LanczosOptions<T> {
    fn default() -> Self {
        Self {
            krylov_dim: 40,
            max_restarts: 50,
            tol: T::tol(1e-11),
        }
    }
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(cz(), |acc, (x, y)| acc + x.conj() * y)
}

fn norm<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn project_out<T: Real>(v: &mut [C<T>], basis: &[Vec<C<T>>]) {
    for b in basis {
        let c = dot(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Lowest eigenpair of `apply` restricted to the orthogonal complement of
/// `deflate` (orthonormal vectors), starting from `start`.
pub(crate) fn lanczos_lowest<T: Real>(
    mut apply: impl FnMut(&[C<T>]) -> Vec<C<T>>,
    start: &[C<T>],
    deflate: &[Vec<C<T>>],
    opts: &LanczosOptions<T>,
) -> Result<LanczosResult<T>> {
    let dim = start.len();
    let mut x = start.to_vec();
    project_out(&mut x, deflate);
    let mut nx = norm(&x);
    if nx < T::tol(1e-8) {
        // start vector lies in the deflated space; use a fixed generic one
        x = (0..dim)
            .map(|i| C::new(T::one() / T::lit((i + 1) as f64).sqrt(), T::lit(((i * 7) % 5) as f64 * 0.1)))
            .collect();
        project_out(&mut x, deflate);
        nx = norm(&x);
    }
    for z in x.iter_mut() {
        *z /= nx;
    }
    let available = dim.saturating_sub(deflate.len()).max(1);
    let kdim = opts.krylov_dim.min(available);
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<C<T>>> = vec![x.clone()];
        let mut alpha: Vec<T> = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        let mut done = false;
        let mut best = None;
        for j in 0..kdim {
            let mut w = apply(&basis[j]);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // full reorthogonalization, twice for stability
            for _ in 0..2 {
                project_out(&mut w, &basis);
                project_out(&mut w, deflate);
            }
            let b = norm(&w);
            let (vals, vecs) = tridiagonal_eig(&alpha, &beta)?;
            let lo = vals.len() - 1;
            let y = &vecs[lo];
            let residual = b * y[lo].abs();
            best = Some((vals[lo], y.clone()));
            if residual < opts.tol * vals[lo].abs().max(T::one()) || b < opts.tol || j + 1 == available {
                done = true;
                break;
            }
            if j + 1 < kdim {
                for z in w.iter_mut() {
                    *z /= b;
                }
                beta.push(b);
                basis.push(w);
            }
        }
        let (value, y) = best.expect("at least one Lanczos step");
        let mut v = vec![cz::<T>(); dim];
        for (coef, b) in y.iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += *bi * *coef;
            }
        }
        project_out(&mut v, deflate);
        let nv = norm(&v);
        for z in v.iter_mut() {
            *z /= nv;
        }
        if done {
            return Ok(LanczosResult { value, vector: v });
        }
        x = v;
    }
    Err(Error::NoConvergence {
        routine: "Lanczos",
        iterations: opts.max_restarts * kdim,
    })
}
