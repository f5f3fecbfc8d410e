//! Hermitian eigendecomposition: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit-shift QL iterations.

use crate::error::{Error, Result};
use crate::linalg::householder::Reflector;
use crate::linalg::ComplexMatrix;
use crate::scalar::{cr, cz, phase, pythag, Real, C};

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEig<T> {
    pub values: Vec<T>,
    /// Unitary matrix whose `k`-th column is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> C<T>) -> ComplexMatrix<T> {
        let fv: Vec<C<T>> = self.values.iter().map(|&l| f(l)).collect();
        let scaled = self.vectors.scale_columns(&fv);
        scaled.matmul(&self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(cr)
    }
}

/// Relative Hermiticity tolerance accepted by the eigensolvers.
pub const HERMITIAN_REL_TOL: f64 = 1e-10;

const MAX_QL_ITERATIONS: usize = 60;

/// Full eigendecomposition of a Hermitian matrix.
pub fn herm_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    m.check_hermitian(T::tol(HERMITIAN_REL_TOL))?;
    let n = m.rows();
    let (mut d, mut e, mut zt) = tridiagonalize(&m.hermitian_part(), true);
    tql(&mut d, &mut e, zt.as_deref_mut())?;
    let zt = zt.expect("vectors requested");
    let order = descending_order(&d);
    let values: Vec<T> = order.iter().map(|&k| d[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| zt[order[j] * n + i]);
    Ok(HermitianEig { values, vectors })
}

/// Eigenvalues only, descending.
pub fn herm_eigvals<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    m.check_hermitian(T::tol(HERMITIAN_REL_TOL))?;
    let (mut d, mut e, _) = tridiagonalize(&m.hermitian_part(), false);
    tql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(d)
}

/// Eigenpairs of the real symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `offdiag` (`offdiag[i]` couples `i` and `i + 1`).
/// Returns eigenvalues in descending order and row-major eigenvectors
/// (row `k` is the eigenvector for value `k`).
pub(crate) fn tridiagonal_eig<T: Real>(diag: &[T], offdiag: &[T]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n.saturating_sub(1)].copy_from_slice(&offdiag[..n.saturating_sub(1)]);
    let mut z = vec![cz::<T>(); n * n];
    for i in 0..n {
        z[i * n + i] = cr(T::one());
    }
    tql(&mut d, &mut e, Some(&mut z))?;
    let order = descending_order(&d);
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| z[k * n + i].re).collect())
        .collect();
    Ok((values, vectors))
}

fn descending_order<T: Real>(d: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("finite eigenvalues"));
    order
}

/// Householder reduction `A = Z T Z†` with `T` real symmetric tridiagonal.
///
/// Returns the diagonal, the off-diagonal (last entry zero) and, when
/// requested, `Z†`'s conjugate rows, i.e. row `j` of the returned buffer is
/// column `j` of `Z`.
fn tridiagonalize<T: Real>(m: &ComplexMatrix<T>, want_vectors: bool) -> (Vec<T>, Vec<T>, Option<Vec<C<T>>>) {
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut reflectors: Vec<Option<Reflector<T>>> = Vec::with_capacity(n);
    let mut p = vec![cz::<T>(); n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<C<T>> = (0..len).map(|i| a[(k + 1 + i) * n + k]).collect();
        let refl = Reflector::new(&x);
        if refl.is_identity() {
            reflectors.push(None);
            continue;
        }
        let v = &refl.v;
        let tau = refl.tau;
        // p = tau * B v over the trailing block B = a[k+1.., k+1..]
        for i in 0..len {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let mut acc = cz();
            for (bij, vj) in row.iter().zip(v) {
                acc += bij * vj;
            }
            p[i] = acc * tau;
        }
        let mut vp = cz::<T>();
        for i in 0..len {
            vp += v[i].conj() * p[i];
        }
        let kk = vp * (tau * T::lit(0.5));
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        // B -= v w† + w v†
        for i in 0..len {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for j in 0..len {
                row[j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        a[(k + 1) * n + k] = refl.alpha;
        a[k * n + k + 1] = refl.alpha.conj();
        for i in 1..len {
            a[(k + 1 + i) * n + k] = cz();
            a[k * n + k + 1 + i] = cz();
        }
        reflectors.push(Some(refl));
    }

    let d: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    let sub: Vec<C<T>> = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    let mut e = vec![T::zero(); n];
    let mut phases = vec![cr(T::one()); n];
    for i in 0..sub.len() {
        e[i] = sub[i].norm();
        phases[i + 1] = phases[i] * phase(sub[i]);
    }

    if !want_vectors {
        return (d, e, None);
    }

    // Q = H_0 H_1 ... accumulated backwards into a dense matrix q (row-major).
    let mut q = vec![cz::<T>(); n * n];
    for i in 0..n {
        q[i * n + i] = cr(T::one());
    }
    let mut w = vec![cz::<T>(); n];
    for (k, refl) in reflectors.iter().enumerate().rev() {
        let Some(refl) = refl else { continue };
        let off = k + 1;
        let len = n - off;
        // w_j = sum_i conj(v_i) q[off+i, off+j]
        for wj in w.iter_mut().take(len) {
            *wj = cz();
        }
        for i in 0..len {
            let cv = refl.v[i].conj();
            let row = &q[(off + i) * n + off..(off + i) * n + n];
            for (wj, qij) in w.iter_mut().zip(row) {
                *wj += cv * qij;
            }
        }
        for i in 0..len {
            let f = refl.v[i] * refl.tau;
            let row = &mut q[(off + i) * n + off..(off + i) * n + n];
            for (qij, wj) in row.iter_mut().zip(&w) {
                *qij -= f * wj;
            }
        }
    }
    // zt row j = column j of (Q D)
    let mut zt = vec![cz::<T>(); n * n];
    for i in 0..n {
        for j in 0..n {
            zt[j * n + i] = q[i * n + j] * phases[j];
        }
    }
    (d, e, Some(zt))
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix. `e[i]` couples
/// `i` and `i + 1`. Rotations are applied to the rows of `zt` (each row is an
/// eigenvector under construction).
fn tql<T: Real>(d: &mut [T], e: &mut [T], mut zt: Option<&mut [C<T>]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let two = T::lit(2.0);
    let anorm = (0..n).fold(T::zero(), |acc, i| acc.max(d[i].abs() + e[i].abs()));
    let floor = T::epsilon() * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    routine: "tridiagonal QL",
                    iterations: MAX_QL_ITERATIONS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = pythag(g, T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let row_i = &mut lo[i * n..];
                    let row_j = &mut hi[..n];
                    for (zi, zj) in row_i.iter_mut().zip(row_j.iter_mut()) {
                        let a = *zi;
                        let bb = *zj;
                        *zj = a * s + bb * c;
                        *zi = a * c - bb * s;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
