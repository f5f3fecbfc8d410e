use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{what} out of range: {value} not in {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("local state {index} is not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { index: usize, norm_sqr: f64 },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("ground-state search did not converge after {sweeps} sweeps (last energy {energy})")]
    GroundStateNotConverged { sweeps: usize, energy: f64 },

    #[error("ground state is (near-)degenerate: gap {gap:e}")]
    DegenerateGroundState { gap: f64 },

    #[error("mutual information {value:e} is negative beyond tolerance; entropies are inconsistent")]
    InconsistentEntropies { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
