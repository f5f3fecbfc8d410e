//! Matrix-product-state simulation of sudden quenches in the mixed-field
//! Ising chain, together with the entanglement and information observables
//! measured on small subsystems and an exact-diagonalization reference.
//!
//! Everything numeric is generic over a [`Real`] scalar (`f32` or `f64`);
//! the aliases at the crate root fix it to `f64`.

pub mod density;
pub mod ed;
pub mod error;
pub mod linalg;
pub mod model;
pub mod mps;
pub mod qi;
pub mod scalar;

#[cfg(test)]
pub(crate) mod testutil;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use model::{ModelParams, TimeMode};
pub use qi::{BipartiteSplit, Spectrum};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type Mps = mps::MatrixProductState<f64>;
pub type Mps32 = mps::MatrixProductState<f32>;
pub type Density = DensityMatrix<f64>;
pub type Params = ModelParams<f64>;
pub type State = ed::StateVector<f64>;
