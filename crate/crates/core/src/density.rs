use crate::error::{Error, Result};
use crate::linalg::{herm_eigvals, ComplexMatrix};
use crate::scalar::{cz, Real, C};

/// Eigenvalues of density matrices in `[-EIG_CLAMP, 0)` are rounding noise.
pub const EIG_CLAMP: f64 = 1e-10;
/// Trace drift tolerated before a spectrum is rejected.
pub const TRACE_TOL: f64 = 1e-8;
/// Largest subsystem for which reduced density matrices are formed.
pub const MAX_RDM_SITES: usize = 6;

/// Reduced density matrix of the spins `sites` (ascending, zero-based).
/// The first listed site is the most significant tensor factor.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T> {
    sites: Vec<usize>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates unit trace, Hermiticity and positivity (all within `1e-10`).
    pub fn new(sites: Vec<usize>, matrix: ComplexMatrix<T>) -> Result<Self> {
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidState(format!("sites {sites:?} are not strictly ascending")));
        }
        if !matrix.is_square() || matrix.rows() != 1 << sites.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {} sites",
                matrix.rows(),
                matrix.cols(),
                sites.len()
            )));
        }
        let tol = T::tol(EIG_CLAMP);
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
            });
        }
        let min = herm_eigvals(&matrix)?.last().copied().unwrap_or(T::zero());
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        Ok(Self { sites, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized pure state over `sites`.
    pub fn from_pure(sites: Vec<usize>, amps: &[C<T>]) -> Result<Self> {
        let d = amps.len();
        let m = ComplexMatrix::from_fn(d, d, |i, j| amps[i] * amps[j].conj());
        Self::new(sites, m)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Partial trace onto `keep`, a subset of `self.sites()`.
    pub fn reduce_to(&self, keep: &[usize]) -> Result<Self> {
        let positions: Vec<usize> = keep
            .iter()
            .map(|s| {
                self.sites.iter().position(|x| x == s).ok_or(Error::OutOfRange {
                    what: "site",
                    value: *s,
                    range: format!("{:?}", self.sites),
                })
            })
            .collect::<Result<_>>()?;
        let m = partial_trace_keep(&self.matrix, self.sites.len(), &positions);
        Self::new(keep.to_vec(), m)
    }
}

/// Traces out every qubit of a `k`-qubit operator except those at `keep`
/// (positions counted from the most significant factor, ascending).
pub(crate) fn partial_trace_keep<T: Real>(m: &ComplexMatrix<T>, k: usize, keep: &[usize]) -> ComplexMatrix<T> {
    let kk = keep.len();
    let traced: Vec<usize> = (0..k).filter(|p| !keep.contains(p)).collect();
    let compose = |kept_bits: usize, rest_bits: usize| -> usize {
        let mut idx = 0usize;
        for (i, &p) in keep.iter().enumerate() {
            let bit = (kept_bits >> (kk - 1 - i)) & 1;
            idx |= bit << (k - 1 - p);
        }
        for (i, &p) in traced.iter().enumerate() {
            let bit = (rest_bits >> (traced.len() - 1 - i)) & 1;
            idx |= bit << (k - 1 - p);
        }
        idx
    };
    let dk = 1usize << kk;
    let dr = 1usize << traced.len();
    ComplexMatrix::from_fn(dk, dk, |a, b| {
        let mut acc = cz();
        for r in 0..dr {
            acc += m[(compose(a, r), compose(b, r))];
        }
        acc
    })
}
