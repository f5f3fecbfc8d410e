//! Dense complex linear algebra: Hermitian eigendecomposition, SVD, QR,
//! Kronecker products and spectral matrix functions.

mod eig;
mod funcs;
mod householder;
mod lanczos;
mod matrix;
mod qr;
mod svd;

pub use eig::{herm_eig, herm_eigvals, HermitianEig, HERMITIAN_REL_TOL};
pub(crate) use eig::tridiagonal_eig;
pub use funcs::{herm_propagator, kron, psd_sqrt, PSD_CLAMP};
pub(crate) use lanczos::{lanczos_lowest, LanczosOptions};
pub use matrix::ComplexMatrix;
pub use qr::qr_thin;
pub use svd::{svd, SvdResult};

/// Pauli matrices in the `σ^z` eigenbasis ordered `(↑, ↓)`.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::{Real, C};

    pub fn identity<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::identity(2)
    }

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let i = C::new(T::zero(), T::one());
        let z = C::new(T::zero(), T::zero());
        ComplexMatrix::from_vec(2, 2, vec![z, -i, i, z]).expect("2x2")
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
    }
}
