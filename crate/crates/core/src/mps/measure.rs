use crate::density::{DensityMatrix, MAX_RDM_SITES};
use crate::error::{Error, Result};
use crate::linalg::{herm_eigvals, psd_sqrt, ComplexMatrix};
use crate::model::{bond_hamiltonian, ModelParams};
use crate::mps::{MatrixProductState, SiteTensor};
use crate::qi::{spectrum_from_values, Spectrum};
use crate::scalar::{cz, Real, C};

/// `E'[b,b'] = Σ_s Σ_{a,a'} A[a,s,b] E[a,a'] conj(A[a',s,b'])`.
pub(crate) fn transfer_left<T: Real>(env: &ComplexMatrix<T>, t: &SiteTensor<T>) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(t.dr, t.dr);
    for s in 0..2 {
        let a = t.slice(s);
        let x = env.matmul(&a.conj());
        out = &out + &a.transpose().matmul(&x);
    }
    out
}

/// `F'[a,a'] = Σ_s Σ_{b,b'} A[a,s,b] F[b,b'] conj(A[a',s,b'])`.
pub(crate) fn transfer_right<T: Real>(env: &ComplexMatrix<T>, t: &SiteTensor<T>) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(t.dl, t.dl);
    for s in 0..2 {
        let a = t.slice(s);
        out = &out + &a.matmul(env).matmul(&a.adjoint());
    }
    out
}

/// All left and right environments of one snapshot. `left[j]` contracts
/// sites `0..j` and `right[j]` contracts sites `j..N`; both are indexed by
/// the bond entering site `j` (ket index first).
#[derive(Clone, Debug)]
pub struct Environments<T> {
    left: Vec<ComplexMatrix<T>>,
    right: Vec<ComplexMatrix<T>>,
}

impl<T: Real> Environments<T> {
    pub fn new(state: &MatrixProductState<T>) -> Self {
        let n = state.num_sites();
        let mut left = Vec::with_capacity(n + 1);
        left.push(ComplexMatrix::identity(1));
        for t in &state.tensors {
            let next = transfer_left(left.last().expect("seeded"), t);
            left.push(next);
        }
        let mut right = vec![ComplexMatrix::identity(1); n + 1];
        for j in (0..n).rev() {
            right[j] = transfer_right(&right[j + 1], &state.tensors[j]);
        }
        Self { left, right }
    }

    pub fn rdm(&self, state: &MatrixProductState<T>, sites: &[usize]) -> Result<DensityMatrix<T>> {
        state.check_sites(sites)?;
        let last = *sites.last().expect("non-empty");
        rdm_between(state, &self.left[sites[0]], &self.right[last + 1], sites)
    }
}

/// Contracts `sites` (ascending) with open physical indices between the given
/// left environment (entering `sites[0]`) and right environment (leaving the
/// last site).
fn rdm_between<T: Real>(
    state: &MatrixProductState<T>,
    left: &ComplexMatrix<T>,
    right: &ComplexMatrix<T>,
    sites: &[usize],
) -> Result<DensityMatrix<T>> {
    let first = sites[0];
    let last = *sites.last().expect("non-empty");
    // bundle[ket * dim + bra], dim = 2^m for m open sites so far
    let mut bundle = vec![left.clone()];
    let mut dim = 1usize;
    for j in first..=last {
        let t = &state.tensors[j];
        let a: [ComplexMatrix<T>; 2] = [t.slice(0), t.slice(1)];
        let at: [ComplexMatrix<T>; 2] = [a[0].transpose(), a[1].transpose()];
        let ac: [ComplexMatrix<T>; 2] = [a[0].conj(), a[1].conj()];
        if sites.contains(&j) {
            let nd = dim * 2;
            let mut next = vec![ComplexMatrix::zeros(0, 0); nd * nd];
            for ket in 0..dim {
                for bra in 0..dim {
                    let e = &bundle[ket * dim + bra];
                    let y = [e.matmul(&ac[0]), e.matmul(&ac[1])];
                    for s in 0..2 {
                        for sp in 0..2 {
                            next[(ket * 2 + s) * nd + bra * 2 + sp] = at[s].matmul(&y[sp]);
                        }
                    }
                }
            }
            bundle = next;
            dim = nd;
        } else {
            for e in bundle.iter_mut() {
                let mut acc = at[0].matmul(&e.matmul(&ac[0]));
                acc = &acc + &at[1].matmul(&e.matmul(&ac[1]));
                *e = acc;
            }
        }
    }
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for ket in 0..dim {
        for bra in 0..dim {
            let e = &bundle[ket * dim + bra];
            let v = e
                .as_slice()
                .iter()
                .zip(right.as_slice())
                .fold(cz::<T>(), |acc, (x, y)| acc + x * y);
            rho[(ket, bra)] = v;
        }
    }
    let tr = rho.trace().re;
    if !(tr > T::zero()) {
        return Err(Error::InvalidState(format!("reduced density matrix has trace {tr}")));
    }
    let rho = rho.scale_real(T::one() / tr).hermitian_part();
    DensityMatrix::new(sites.to_vec(), rho)
}

impl<T: Real> MatrixProductState<T> {
    pub(crate) fn check_sites(&self, sites: &[usize]) -> Result<()> {
        if sites.is_empty() || sites.len() > MAX_RDM_SITES {
            return Err(Error::SizeGuard(format!(
                "subsystems need 1 to {MAX_RDM_SITES} sites, got {}",
                sites.len()
            )));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidState(format!("sites {sites:?} are not strictly ascending")));
        }
        self.check_site(*sites.last().expect("non-empty"))
    }

    /// Environment of sites `0..j`, using the canonical form when possible.
    fn left_env(&self, j: usize) -> ComplexMatrix<T> {
        let dim = self.tensors.get(j).map_or(1, |t| t.dl);
        let start = match self.center {
            Some(c) if j <= c => return ComplexMatrix::identity(dim),
            Some(c) => c,
            None => 0,
        };
        let mut env = ComplexMatrix::identity(self.tensors[start].dl);
        for t in &self.tensors[start..j] {
            env = transfer_left(&env, t);
        }
        env
    }

    /// Environment of sites `j..N`, using the canonical form when possible.
    fn right_env(&self, j: usize) -> ComplexMatrix<T> {
        let n = self.num_sites();
        let dim = if j == n { 1 } else { self.tensors[j].dl };
        let end = match self.center {
            Some(c) if j > c => return ComplexMatrix::identity(dim),
            Some(c) => c + 1,
            None => n,
        };
        let mut env = ComplexMatrix::identity(if end == n { 1 } else { self.tensors[end].dl });
        for t in self.tensors[j..end].iter().rev() {
            env = transfer_right(&env, t);
        }
        env
    }

    /// Reduced density matrix of up to six sites (ascending, zero-based).
    pub fn rdm(&self, sites: &[usize]) -> Result<DensityMatrix<T>> {
        self.check_sites(sites)?;
        let last = *sites.last().expect("non-empty");
        let left = self.left_env(sites[0]);
        let right = self.right_env(last + 1);
        rdm_between(self, &left, &right, sites)
    }

    /// Squared Schmidt coefficients across bond `bond`.
    pub fn bond_spectrum(&self, bond: usize) -> Result<Spectrum<T>> {
        self.check_bond(bond)?;
        let vals = match self.center {
            Some(c) if c <= bond => herm_eigvals(&self.left_env(bond + 1).hermitian_part())?,
            Some(_) => herm_eigvals(&self.right_env(bond + 1).hermitian_part())?,
            None => {
                let l = self.left_env(bond + 1);
                let r = psd_sqrt(&self.right_env(bond + 1).hermitian_part())?;
                herm_eigvals(&r.matmul(&l.transpose()).matmul(&r).hermitian_part())?
            }
        };
        let total: T = vals.iter().copied().sum();
        spectrum_from_values(vals.into_iter().map(|v| v / total).collect())
    }

    /// `⟨σᶻ⟩` at `site`.
    pub fn expect_z(&self, site: usize) -> Result<T> {
        let rho = self.rdm(&[site])?;
        Ok(rho.matrix()[(0, 0)].re - rho.matrix()[(1, 1)].re)
    }

    /// `⟨H⟩ = Σ_b tr(ρ_{b,b+1} h_b)`.
    pub fn energy(&self, params: &ModelParams<T>) -> Result<T> {
        let n = self.num_sites();
        if n == 1 {
            let rho = self.rdm(&[0])?;
            return Ok(trace_product(rho.matrix(), &params.single_site_term()));
        }
        let envs = Environments::new(self);
        let mut e = T::zero();
        for b in 0..n - 1 {
            let rho = envs.rdm(self, &[b, b + 1])?;
            e += trace_product(rho.matrix(), &bond_hamiltonian(params, b, n)?);
        }
        Ok(e)
    }
}

/// `Re tr(A B)`.
fn trace_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc: C<T> = cz();
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc.re
}
