use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::scalar::{cr, Real, C};

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as rounding noise and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Kronecker product; entry `(i·rows_B + k, j·cols_B + l)` is `A(i,j)·B(k,l)`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let oc = ac * bc;
    let data = out.as_mut_slice();
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                let row = (i * br + k) * oc + j * bc;
                for l in 0..bc {
                    data[row + l] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = herm_eig(rho)?;
    let clamp = T::tol(PSD_CLAMP);
    if let Some(&min) = eig.values.last() {
        if min < -clamp {
            return Err(Error::NotPositive {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
    }
    Ok(eig.reconstruct_with(|l| cr(l.max(T::zero()).sqrt())).hermitian_part())
}

/// `exp(z·H) = V · diag(exp(z·λ)) · V†` for Hermitian `H`.
pub fn herm_propagator<T: Real>(h: &ComplexMatrix<T>, z: C<T>) -> Result<ComplexMatrix<T>> {
    let eig = herm_eig(h)?;
    Ok(eig.reconstruct_with(|l| (z * l).exp()))
}
