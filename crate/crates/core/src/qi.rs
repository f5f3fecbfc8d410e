//! Quantum-information observables of reduced density matrices: entropies,
//! partial transposition, negativity, concurrence, majorization and mutual
//! informations. All logarithms are natural; entropies are in nats.

use crate::density::{DensityMatrix, EIG_CLAMP, TRACE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{herm_eigvals, kron, pauli, psd_sqrt, ComplexMatrix};
use crate::scalar::Real;

/// Eigenvalue distribution of a density matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    probs: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorts `probs` descending and checks that they form a probability
    /// distribution (entries in `[0, 1]` after clamping noise, sum within `1e-8`).
    pub fn new(mut probs: Vec<T>) -> Result<Self> {
        let clamp = T::tol(EIG_CLAMP);
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -clamp || *p > T::one() + clamp {
                return Err(Error::InvalidState(format!("probability {p} outside [0, 1]")));
            }
            *p = p.max(T::zero()).min(T::one());
        }
        let sum: T = probs.iter().copied().sum();
        if (sum - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::InvalidState(format!("probabilities sum to {sum}")));
        }
        probs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn largest(&self) -> T {
        self.probs[0]
    }
}

/// Dimensions `d_A × d_B` of a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteSplit {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteSplit {
    pub fn new(dim_a: usize, dim_b: usize) -> Self {
        Self { dim_a, dim_b }
    }

    /// Qubit counts on each side.
    pub fn qubits(a: usize, b: usize) -> Self {
        Self::new(1 << a, 1 << b)
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.dim_a == 0 || self.dim_b == 0 || self.dim_a * self.dim_b != dim {
            return Err(Error::DimensionMismatch(format!(
                "split {}x{} applied to dimension {dim}",
                self.dim_a, self.dim_b
            )));
        }
        Ok(())
    }
}

/// Eigenvalues of `ρ`, clamped to `[0, 1]` and renormalized.
pub fn spectrum<T: Real>(rho: &DensityMatrix<T>) -> Result<Spectrum<T>> {
    spectrum_from_values(herm_eigvals(rho.matrix())?)
}

/// Clamps raw eigenvalues to `[0, 1]` and renormalizes them if their sum is
/// within `1e-8` of one.
pub fn spectrum_from_values<T: Real>(mut vals: Vec<T>) -> Result<Spectrum<T>> {
    for v in vals.iter_mut() {
        *v = v.max(T::zero()).min(T::one());
    }
    let sum: T = vals.iter().copied().sum();
    if (sum - T::one()).abs() > T::tol(TRACE_TOL) {
        return Err(Error::InvalidState(format!("eigenvalues sum to {sum}")));
    }
    for v in vals.iter_mut() {
        *v /= sum;
    }
    Spectrum::new(vals)
}

/// `−Σ p ln p` with `0 ln 0 = 0`.
pub fn vn_entropy<T: Real>(s: &Spectrum<T>) -> T {
    s.probs
        .iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| -p * p.ln())
        .sum()
}

/// `−ln tr ρ²`.
pub fn renyi2_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    -rho.purity().ln()
}

/// Rényi-2 entropy from a spectrum, `−ln Σ p²`.
pub fn renyi2_from_spectrum<T: Real>(s: &Spectrum<T>) -> T {
    -s.probs.iter().map(|&p| p * p).sum::<T>().ln()
}

/// `−ln p_max`.
pub fn single_copy_entropy<T: Real>(s: &Spectrum<T>) -> T {
    -s.largest().ln()
}

/// Transposes the `B` factor: `ρ^{T_B}[(i,l),(j,k)] = ρ[(i,k),(j,l)]`.
pub fn partial_transpose<T: Real>(m: &ComplexMatrix<T>, split: BipartiteSplit) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    split.check(m.rows())?;
    let db = split.dim_b;
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (i, l) = (r / db, r % db);
        let (j, k) = (c / db, c % db);
        m[(i * db + k, j * db + l)]
    }))
}

/// `½ Σ (|p_j| − p_j)` over the eigenvalues of `ρ^{T_B}`.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, split: BipartiteSplit) -> Result<T> {
    let pt = partial_transpose(rho.matrix(), split)?;
    let vals = herm_eigvals(&pt)?;
    let half = T::lit(0.5);
    Ok(vals.iter().map(|&p| (p.abs() - p) * half).sum())
}

/// `(σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`, conjugation in the `σᶻ` basis.
pub fn spin_flip<T: Real>(rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let yy = kron(&pauli::y::<T>(), &pauli::y());
    yy.matmul(&rho.conj()).matmul(&yy)
}

/// Two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` with `λ` the descending
/// eigenvalues of `√(√ρ ρ̄ √ρ)`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let flipped = spin_flip(rho.matrix());
    let inner = sqrt_rho.matmul(&flipped).matmul(&sqrt_rho).hermitian_part();
    let lambda = herm_eigvals(&psd_sqrt(&inner)?)?;
    let c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    Ok(c.max(T::zero()))
}

/// Partial sums `Σ_{i≤k} p_i` for `k = 1..=len`.
pub fn level_k_sums<T: Real>(s: &Spectrum<T>) -> Vec<T> {
    s.probs
        .iter()
        .scan(T::zero(), |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Whether `p` majorizes `q`: every partial sum of `p` is at least that of
/// `q` (within `1e-10`). The shorter spectrum is padded with zeros.
pub fn majorizes<T: Real>(p: &Spectrum<T>, q: &Spectrum<T>) -> bool {
    majorizes_sums(&level_k_sums(p), &level_k_sums(q))
}

/// Majorization test on precomputed level-k sums.
pub fn majorizes_sums<T: Real>(p: &[T], q: &[T]) -> bool {
    let n = p.len().max(q.len());
    let tol = T::tol(1e-10);
    let at = |v: &[T], k: usize| -> T {
        if k < v.len() {
            v[k]
        } else {
            v.last().copied().unwrap_or(T::zero())
        }
    };
    (0..n).all(|k| at(p, k) >= at(q, k) - tol)
}

/// Tolerated negative excursion of a mutual information.
pub const MI_TOL: f64 = 1e-8;

/// `I₂(A:B) = S_A + S_B − S_AB`.
pub fn mutual_information<T: Real>(s_a: T, s_b: T, s_ab: T) -> Result<T> {
    let i2 = s_a + s_b - s_ab;
    if i2 < -T::tol(MI_TOL) {
        return Err(Error::InconsistentEntropies {
            value: i2.to_f64_lossy(),
        });
    }
    Ok(i2)
}

/// `I₃(A:B:C) = I₂(A:B) + I₂(A:C) − I₂(A:BC)`.
pub fn tripartite_mi<T: Real>(i_ab: T, i_ac: T, i_a_bc: T) -> T {
    i_ab + i_ac - i_a_bc
}
