//! Thin singular value decomposition by Householder bidiagonalization and
//! Golub–Kahan implicit-shift QR sweeps on the (real) bidiagonal.

use crate::error::{Error, Result};
use crate::linalg::householder::Reflector;
use crate::linalg::ComplexMatrix;
use crate::scalar::{cone, cz, phase, pythag, Real, C};

/// `M = U · diag(s) · Vdag` with `k = min(rows, cols)` singular values.
#[derive(Clone, Debug)]
pub struct SvdResult<T> {
    /// `rows × k`, orthonormal columns.
    pub u: ComplexMatrix<T>,
    /// Non-negative, non-increasing.
    pub s: Vec<T>,
    /// `k × cols`, orthonormal rows.
    pub vdag: ComplexMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let s: Vec<C<T>> = self.s.iter().map(|&x| C::new(x, T::zero())).collect();
        self.u.scale_columns(&s).matmul(&self.vdag)
    }
}

const MAX_SWEEP_ITERATIONS: usize = 75;

pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<SvdResult<T>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        // M† = U' S V'†  =>  M = V' S U'†
        let t = svd_tall(&m.adjoint())?;
        Ok(SvdResult {
            u: t.vdag.adjoint(),
            s: t.s,
            vdag: t.u.adjoint(),
        })
    }
}

fn svd_tall<T: Real>(m: &ComplexMatrix<T>) -> Result<SvdResult<T>> {
    let rows = m.rows();
    let n = m.cols();
    if n == 0 {
        return Ok(SvdResult {
            u: ComplexMatrix::zeros(rows, 0),
            s: Vec::new(),
            vdag: ComplexMatrix::zeros(0, 0),
        });
    }
    let mut a = m.as_slice().to_vec();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut work = Vec::new();

    for i in 0..n {
        let x: Vec<C<T>> = (i..rows).map(|r| a[r * n + i]).collect();
        let l = Reflector::new(&x);
        l.apply_left(&mut a, n, i, i, n, &mut work);
        a[i * n + i] = l.alpha;
        for r in i + 1..rows {
            a[r * n + i] = cz();
        }
        left.push(l);
        if i + 1 < n {
            let y: Vec<C<T>> = (i + 1..n).map(|c| a[i * n + c].conj()).collect();
            let r = Reflector::new(&y);
            r.apply_right(&mut a, n, i, rows, i + 1);
            a[i * n + i + 1] = r.alpha.conj();
            for c in i + 2..n {
                a[i * n + c] = cz();
            }
            right.push(r);
        }
    }

    let d: Vec<C<T>> = (0..n).map(|i| a[i * n + i]).collect();
    let e: Vec<C<T>> = (0..n - 1).map(|i| a[i * n + i + 1]).collect();

    // U = H_0 ... H_{n-1} [I; 0]
    let mut u = vec![cz::<T>(); rows * n];
    for i in 0..n {
        u[i * n + i] = cone();
    }
    for (i, l) in left.iter().enumerate().rev() {
        l.apply_left(&mut u, n, i, i, n, &mut work);
    }
    // V = R_0 R_1 ...
    let mut v = vec![cz::<T>(); n * n];
    for i in 0..n {
        v[i * n + i] = cone();
    }
    for (i, r) in right.iter().enumerate().rev() {
        r.apply_left(&mut v, n, i + 1, i + 1, n, &mut work);
    }

    // Rotate the complex bidiagonal onto a real non-negative one: B = P B' Q†.
    let mut p = vec![cone::<T>(); n];
    let mut q = vec![cone::<T>(); n];
    let mut w = vec![T::zero(); n];
    let mut rv1 = vec![T::zero(); n];
    for i in 0..n {
        p[i] = phase(d[i] * q[i]);
        w[i] = d[i].norm();
        if i + 1 < n {
            q[i + 1] = phase(p[i].conj() * e[i]).conj();
            rv1[i + 1] = e[i].norm();
        }
    }

    // Transposed storage: row j of ut is column j of U.
    let mut ut = vec![cz::<T>(); n * rows];
    for r in 0..rows {
        for j in 0..n {
            ut[j * rows + r] = u[r * n + j] * p[j];
        }
    }
    let mut vt = vec![cz::<T>(); n * n];
    for r in 0..n {
        for j in 0..n {
            vt[j * n + r] = v[r * n + j] * q[j];
        }
    }

    bidiagonal_qr(&mut w, &mut rv1, &mut ut, rows, &mut vt, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| w[y].partial_cmp(&w[x]).expect("finite singular values"));
    let s: Vec<T> = order.iter().map(|&k| w[k]).collect();
    let u = ComplexMatrix::from_fn(rows, n, |r, j| ut[order[j] * rows + r]);
    let vdag = ComplexMatrix::from_fn(n, n, |j, c| vt[order[j] * n + c].conj());
    Ok(SvdResult { u, s, vdag })
}

#[inline]
fn rotate_rows<T: Real>(buf: &mut [C<T>], len: usize, a: usize, b: usize, c: T, s: T) {
    // row_a <- row_a c + row_b s ; row_b <- row_b c - row_a s
    debug_assert!(a < b);
    let (lo, hi) = buf.split_at_mut(b * len);
    let ra = &mut lo[a * len..a * len + len];
    let rb = &mut hi[..len];
    for (x, z) in ra.iter_mut().zip(rb.iter_mut()) {
        let y0 = *x;
        let z0 = *z;
        *x = y0 * c + z0 * s;
        *z = z0 * c - y0 * s;
    }
}

/// Diagonalizes the real upper bidiagonal matrix with diagonal `w` and
/// superdiagonal `rv1` (`rv1[i]` sits at `(i-1, i)`, `rv1[0] == 0`),
/// accumulating the rotations into the rows of `ut` and `vt`.
fn bidiagonal_qr<T: Real>(
    w: &mut [T],
    rv1: &mut [T],
    ut: &mut [C<T>],
    ulen: usize,
    vt: &mut [C<T>],
    vlen: usize,
) -> Result<()> {
    let n = w.len();
    let two = T::lit(2.0);
    let mut anorm = T::zero();
    for i in 0..n {
        anorm = anorm.max(w[i].abs() + rv1[i].abs());
    }
    let negligible = |x: T| x.abs() + anorm == anorm;

    for k in (0..n).rev() {
        let mut its = 0;
        loop {
            let mut flag = true;
            let mut l = k;
            loop {
                if negligible(rv1[l]) {
                    flag = false;
                    break;
                }
                // rv1[0] == 0, so l > 0 here
                if negligible(w[l - 1]) {
                    break;
                }
                l -= 1;
            }
            if flag {
                // cancel rv1[l] when w[l-1] is negligible
                let nm = l - 1;
                let mut c = T::zero();
                let mut s = T::one();
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if negligible(f) {
                        break;
                    }
                    let g = w[i];
                    let h = pythag(f, g);
                    w[i] = h;
                    let hinv = T::one() / h;
                    c = g * hinv;
                    s = -f * hinv;
                    rotate_rows(ut, ulen, nm, i, c, s);
                }
            }
            let z = w[k];
            if l == k {
                if z < T::zero() {
                    w[k] = -z;
                    for x in &mut vt[k * vlen..(k + 1) * vlen] {
                        *x = -*x;
                    }
                }
                break;
            }
            its += 1;
            if its > MAX_SWEEP_ITERATIONS {
                return Err(Error::NoConvergence {
                    routine: "bidiagonal SVD",
                    iterations: MAX_SWEEP_ITERATIONS,
                });
            }
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            let mut g = rv1[nm];
            let mut h = rv1[k];
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (two * h * y);
            g = pythag(f, T::one());
            f = ((x - z) * (x + z) + h * ((y / (f + g.abs().copysign(f))) - h)) / x;
            let mut c = T::one();
            let mut s = T::one();
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g = c * g;
                let mut zz = pythag(f, h);
                rv1[j] = zz;
                c = f / zz;
                s = h / zz;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y = y * c;
                rotate_rows(vt, vlen, j, i, c, s);
                zz = pythag(f, h);
                w[j] = zz;
                if zz != T::zero() {
                    let zinv = T::one() / zz;
                    c = f * zinv;
                    s = h * zinv;
                }
                f = c * g + s * y;
                x = c * y - s * g;
                rotate_rows(ut, ulen, j, i, c, s);
            }
            rv1[l] = T::zero();
            rv1[k] = f;
            w[k] = x;
        }
    }
    Ok(())
}
