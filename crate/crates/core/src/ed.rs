//! Exact-diagonalization reference: ground states, time evolution through a
//! cached eigendecomposition, and reduced density matrices by index summation.

use crate::density::{DensityMatrix, MAX_RDM_SITES};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, lanczos_lowest, ComplexMatrix, HermitianEig, LanczosOptions};
use crate::model::{apply_hamiltonian, dense_hamiltonian, ModelParams, MAX_DENSE_SITES};
use crate::scalar::{cz, Real, C};

/// Largest chain for which the full eigendecomposition is formed.
pub const MAX_EVOLVE_SITES: usize = 12;

const NORM_TOL: f64 = 1e-12;

/// Normalized state of `n` spins; amplitude index bit `n − 1 − j` is site `j`
/// (0 = up).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(n: usize, amps: Vec<C<T>>) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_SITES {
            return Err(Error::SizeGuard(format!("state vectors need 1 <= N <= {MAX_DENSE_SITES}, got {n}")));
        }
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {n} sites", amps.len())));
        }
        let norm_sqr: T = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::Unnormalized {
                index: 0,
                norm_sqr: norm_sqr.to_f64_lossy(),
            });
        }
        Ok(Self { n, amps })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(n: usize, mut amps: Vec<C<T>>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        for z in amps.iter_mut() {
            *z /= norm;
        }
        Self::new(n, amps)
    }

    /// Tensor product of normalized single-spin states.
    pub fn product(local: &[[C<T>; 2]]) -> Result<Self> {
        let mut amps = vec![C::new(T::one(), T::zero())];
        for (i, s) in local.iter().enumerate() {
            let ns = s[0].norm_sqr() + s[1].norm_sqr();
            if (ns - T::one()).abs() > T::tol(NORM_TOL) {
                return Err(Error::Unnormalized {
                    index: i,
                    norm_sqr: ns.to_f64_lossy(),
                });
            }
            amps = amps.iter().flat_map(|a| [*a * s[0], *a * s[1]]).collect();
        }
        Self::new(local.len(), amps)
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> C<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(cz(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `⟨σᶻ_site⟩`.
    pub fn expect_z(&self, site: usize) -> T {
        let shift = self.n - 1 - site;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| if (i >> shift) & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }

    /// `⟨H⟩`.
    pub fn energy(&self, params: &ModelParams<T>) -> Result<T> {
        let hv = apply_hamiltonian(params, self.n, &self.amps)?;
        Ok(self
            .amps
            .iter()
            .zip(&hv)
            .fold(cz::<T>(), |acc, (a, b)| acc + a.conj() * b)
            .re)
    }
}

/// Largest chain whose ground state comes from a full dense diagonalization.
const FULL_DIAG_SITES: usize = 10;

/// Lowest eigenpair of the chain Hamiltonian. Chains up to ten sites use the
/// full eigendecomposition of the dense matrix; longer ones (up to
/// [`MAX_DENSE_SITES`]) use a Krylov solver on its matrix-free action.
pub fn exact_ground<T: Real>(params: &ModelParams<T>, n: usize) -> Result<(T, StateVector<T>)> {
    if n == 0 || n > MAX_DENSE_SITES {
        return Err(Error::SizeGuard(format!("exact ground state needs 1 <= N <= {MAX_DENSE_SITES}, got {n}")));
    }
    if n <= FULL_DIAG_SITES {
        let h = dense_hamiltonian(params, n)?;
        let eig = herm_eig(&h)?;
        let k = eig.values.len() - 1;
        let v: Vec<C<T>> = (0..h.rows()).map(|i| eig.vectors[(i, k)]).collect();
        return Ok((eig.values[k], StateVector::normalized(n, v)?));
    }
    let start: Vec<C<T>> = (0..1usize << n)
        .map(|i| C::new(T::one() + T::lit((i % 7) as f64 * 0.01), T::zero()))
        .collect();
    let opts = LanczosOptions {
        krylov_dim: 80,
        max_restarts: 100,
        tol: T::tol(1e-12),
    };
    let r = lanczos_lowest(
        |v| apply_hamiltonian(params, n, v).expect("size checked above"),
        &start,
        &[],
        &opts,
    )?;
    Ok((r.value, StateVector::normalized(n, r.vector)?))
}

/// Exact propagator `exp(−i H t)` of one Hamiltonian, reusable across times.
#[derive(Clone, Debug)]
pub struct ExactPropagator<T> {
    n: usize,
    eig: HermitianEig<T>,
}

impl<T: Real> ExactPropagator<T> {
    pub fn new(params: &ModelParams<T>, n: usize) -> Result<Self> {
        if n > MAX_EVOLVE_SITES {
            return Err(Error::SizeGuard(format!(
                "exact evolution needs N <= {MAX_EVOLVE_SITES}, got {n}"
            )));
        }
        let h = dense_hamiltonian(params, n)?;
        Ok(Self { n, eig: herm_eig(&h)? })
    }

    pub fn energies(&self) -> &[T] {
        &self.eig.values
    }

    pub fn evolve(&self, state: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        if state.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "propagator for {} sites applied to {} sites",
                self.n, state.n
            )));
        }
        let v = &self.eig.vectors;
        let dim = v.rows();
        let mut coeffs = vec![cz::<T>(); dim];
        for i in 0..dim {
            let a = state.amps[i];
            for (k, c) in v.row(i).iter().zip(coeffs.iter_mut()) {
                *c += k.conj() * a;
            }
        }
        for (c, &e) in coeffs.iter_mut().zip(&self.eig.values) {
            *c *= C::new(T::zero(), -e * t).exp();
        }
        let amps = v.apply(&coeffs);
        StateVector::normalized(self.n, amps)
    }
}

/// One-shot exact evolution; prefer [`ExactPropagator`] for many times.
pub fn exact_evolve<T: Real>(state: &StateVector<T>, params: &ModelParams<T>, t: T) -> Result<StateVector<T>> {
    ExactPropagator::new(params, state.n)?.evolve(state, t)
}

/// Reduced density matrix of `sites` (ascending, zero-based).
pub fn exact_rdm<T: Real>(state: &StateVector<T>, sites: &[usize]) -> Result<DensityMatrix<T>> {
    let n = state.n;
    let k = sites.len();
    if k == 0 || k > MAX_RDM_SITES {
        return Err(Error::SizeGuard(format!("subsystems need 1 to {MAX_RDM_SITES} sites, got {k}")));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
        return Err(Error::OutOfRange {
            what: "site",
            value: bad,
            range: format!("[0, {n})"),
        });
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidState(format!("sites {sites:?} are not strictly ascending")));
    }
    let rest: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let dk = 1usize << k;
    let place = |bits: usize, which: &[usize]| -> usize {
        let m = which.len();
        which
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &s)| acc | (((bits >> (m - 1 - i)) & 1) << (n - 1 - s)))
    };
    let kept_offsets: Vec<usize> = (0..dk).map(|a| place(a, sites)).collect();
    let mut rho = ComplexMatrix::zeros(dk, dk);
    let mut v = vec![cz::<T>(); dk];
    for r in 0..1usize << rest.len() {
        let base = place(r, &rest);
        for (vi, off) in v.iter_mut().zip(&kept_offsets) {
            *vi = state.amps[base | off];
        }
        for a in 0..dk {
            let va = v[a];
            if va.norm_sqr() == T::zero() {
                continue;
            }
            for b in 0..dk {
                rho[(a, b)] += va * v[b].conj();
            }
        }
    }
    DensityMatrix::new(sites.to_vec(), rho.hermitian_part())
}
