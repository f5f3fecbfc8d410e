//! Two-site variational ground-state search with explicit block operators,
//! and an imaginary-time TEBD alternative.

use log::debug;

use crate::error::{Error, Result};
use crate::linalg::{kron, lanczos_lowest, pauli, ComplexMatrix, LanczosOptions};
use crate::model::{trotter2_layers, ModelParams, TimeMode};
use crate::mps::{product_mps, Absorb, MatrixProductState, TruncationPolicy};
use crate::scalar::{cz, Real, C};

#[derive(Clone, Debug)]
pub struct DmrgOptions {
    pub max_sweeps: usize,
    /// Converged once `|ΔE| < energy_tol · |E|` between sweeps.
    pub energy_tol: f64,
    /// A first excited level closer than this signals a degenerate ground state.
    pub degeneracy_gap: f64,
    pub krylov_dim: usize,
}

impl Default for DmrgOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 40,
            energy_tol: 1e-10,
            degeneracy_gap: 1e-10,
            krylov_dim: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState<T> {
    pub state: MatrixProductState<T>,
    pub energy: T,
    pub sweeps: usize,
    /// Gap to the first excited level of the final effective Hamiltonian.
    pub gap: T,
}

/// Block Hamiltonian and boundary `σᶻ` in a block's truncated basis.
#[derive(Clone, Debug)]
struct Block<T> {
    h: ComplexMatrix<T>,
    z: ComplexMatrix<T>,
}

impl<T: Real> Block<T> {
    fn empty() -> Self {
        Self {
            h: ComplexMatrix::zeros(1, 1),
            z: ComplexMatrix::zeros(1, 1),
        }
    }
}

/// Generic deterministic starting spinor.
fn start_spinor<T: Real>() -> [C<T>; 2] {
    let (th, ph) = (T::lit(0.41), T::lit(0.73));
    [C::new(th.cos(), T::zero()), C::new(th.sin() * ph.cos(), th.sin() * ph.sin())]
}

fn check_size<T: Real>(params: &ModelParams<T>, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::SizeGuard(format!("ground-state search needs N >= 2, got {n}")));
    }
    if !params.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

struct Sweeper<'a, T> {
    state: MatrixProductState<T>,
    left: Vec<Block<T>>,
    right: Vec<Block<T>>,
    j: T,
    field: ComplexMatrix<T>,
    h12: ComplexMatrix<T>,
    policy: &'a TruncationPolicy,
    lanczos: LanczosOptions<T>,
}

impl<'a, T: Real> Sweeper<'a, T> {
    fn new(params: &ModelParams<T>, n: usize, policy: &'a TruncationPolicy, opts: &DmrgOptions) -> Result<Self> {
        let mut state = product_mps(&vec![start_spinor::<T>(); n])?;
        state.canonicalize(0)?;
        let field = params.single_site_term();
        let id = pauli::identity::<T>();
        let zz = kron(&pauli::z(), &pauli::z()).scale_real(-params.j);
        let h12 = &(&zz + &kron(&field, &id)) + &kron(&id, &field);
        let mut s = Self {
            state,
            left: vec![Block::empty(); n + 1],
            right: vec![Block::empty(); n + 1],
            j: params.j,
            field,
            h12,
            policy,
            lanczos: LanczosOptions {
                krylov_dim: opts.krylov_dim,
                ..LanczosOptions::default()
            },
        };
        for site in (1..n).rev() {
            s.right[site] = s.grow_right(site);
        }
        Ok(s)
    }

    /// Left block `0..=site` from `left[site]` and the left-isometric tensor at `site`.
    fn grow_left(&self, site: usize) -> Block<T> {
        let t = &self.state.tensors[site];
        let prev = &self.left[site];
        let dl = t.dl;
        let z = [T::one(), -T::one()];
        let f = &self.field;
        let m = ComplexMatrix::from_fn(2 * dl, 2 * dl, |r, c| {
            let (a, s) = (r / 2, r % 2);
            let (ap, sp) = (c / 2, c % 2);
            let mut v = cz::<T>();
            if s == sp {
                v += prev.h[(a, ap)] - prev.z[(a, ap)] * (self.j * z[s]);
            }
            if a == ap {
                v += f[(s, sp)];
            }
            v
        });
        let a = t.left_matrix();
        let ad = a.adjoint();
        let zmat = ComplexMatrix::from_fn(2 * dl, 2 * dl, |r, c| {
            if r == c {
                C::new(z[r % 2], T::zero())
            } else {
                cz()
            }
        });
        Block {
            h: ad.matmul(&m).matmul(&a).hermitian_part(),
            z: ad.matmul(&zmat).matmul(&a).hermitian_part(),
        }
    }

    /// Right block `site..N` from `right[site + 1]` and the right-isometric tensor at `site`.
    fn grow_right(&self, site: usize) -> Block<T> {
        let t = &self.state.tensors[site];
        let next = &self.right[site + 1];
        let dr = t.dr;
        let z = [T::one(), -T::one()];
        let f = &self.field;
        let m = ComplexMatrix::from_fn(2 * dr, 2 * dr, |r, c| {
            let (s, b) = (r / dr, r % dr);
            let (sp, bp) = (c / dr, c % dr);
            let mut v = cz::<T>();
            if b == bp {
                v += f[(s, sp)];
            }
            if s == sp {
                v += next.h[(b, bp)] - next.z[(b, bp)] * (self.j * z[s]);
            }
            v
        });
        let bmat = t.right_matrix();
        let bc = bmat.conj();
        let bt = bmat.transpose();
        let zmat = ComplexMatrix::from_fn(2 * dr, 2 * dr, |r, c| {
            if r == c {
                C::new(z[r / dr], T::zero())
            } else {
                cz()
            }
        });
        Block {
            h: bc.matmul(&m).matmul(&bt).hermitian_part(),
            z: bc.matmul(&zmat).matmul(&bt).hermitian_part(),
        }
    }

    /// Effective Hamiltonian on the two-site block of `bond`.
    fn apply_heff(&self, bond: usize, theta: &[C<T>]) -> Vec<C<T>> {
        let lb = &self.left[bond];
        let rb = &self.right[bond + 2];
        let dl = self.state.tensors[bond].dl;
        let dr = self.state.tensors[bond + 1].dr;
        let th = ComplexMatrix::from_raw(dl, 4 * dr, theta.to_vec());
        let mut out = lb.h.matmul(&th).into_vec();
        let lz = lb.z.matmul(&th);
        let th2 = th.reshape(4 * dl, dr);
        let rh = th2.matmul(&rb.h.transpose());
        let rz = th2.matmul(&rb.z.transpose());
        let g = self.h12.as_slice();
        let z = [T::one(), -T::one()];
        for a in 0..dl {
            for p in 0..4 {
                let (s1, s2) = (p / 2, p % 2);
                for b in 0..dr {
                    let idx = (a * 4 + p) * dr + b;
                    let mut v = out[idx] + rh.as_slice()[idx];
                    v -= lz.as_slice()[idx] * (self.j * z[s1]);
                    v -= rz.as_slice()[idx] * (self.j * z[s2]);
                    for q in 0..4 {
                        v += g[p * 4 + q] * theta[(a * 4 + q) * dr + b];
                    }
                    out[idx] = v;
                }
            }
        }
        out
    }

    /// Optimizes bond `bond` and splits, returning the local energy.
    fn optimize(&mut self, bond: usize, absorb: Absorb) -> Result<T> {
        let theta = self.state.two_site_theta(bond).into_vec();
        let r = lanczos_lowest(|v| self.apply_heff(bond, v), &theta, &[], &self.lanczos)?;
        let dl = self.state.tensors[bond].dl;
        let dr = self.state.tensors[bond + 1].dr;
        let m = ComplexMatrix::from_raw(2 * dl, 2 * dr, r.vector);
        self.state.split_theta(m, bond, self.policy, absorb, true)?;
        Ok(r.value)
    }

    fn sweep(&mut self) -> Result<T> {
        let n = self.state.num_sites();
        let mut e = T::zero();
        for bond in 0..n - 1 {
            e = self.optimize(bond, Absorb::Right)?;
            self.left[bond + 1] = self.grow_left(bond);
        }
        for bond in (0..n - 1).rev() {
            e = self.optimize(bond, Absorb::Left)?;
            self.right[bond + 1] = self.grow_right(bond + 1);
        }
        Ok(e)
    }

    /// Lowest two levels of the effective Hamiltonian on bond 0.
    fn gap(&self) -> Result<T> {
        let theta = self.state.two_site_theta(0).into_vec();
        let ground = lanczos_lowest(|v| self.apply_heff(0, v), &theta, &[], &self.lanczos)?;
        if theta.len() < 2 {
            return Ok(T::infinity());
        }
        let excited = lanczos_lowest(
            |v| self.apply_heff(0, v),
            &theta,
            std::slice::from_ref(&ground.vector),
            &self.lanczos,
        )?;
        Ok(excited.value - ground.value)
    }
}

/// Two-site DMRG with default options.
pub fn ground_state<T: Real>(params: &ModelParams<T>, n: usize, policy: &TruncationPolicy) -> Result<GroundState<T>> {
    ground_state_with(params, n, policy, &DmrgOptions::default())
}

pub fn ground_state_with<T: Real>(
    params: &ModelParams<T>,
    n: usize,
    policy: &TruncationPolicy,
    opts: &DmrgOptions,
) -> Result<GroundState<T>> {
    check_size(params, n)?;
    policy.validate()?;
    let mut sw = Sweeper::new(params, n, policy, opts)?;
    let mut last = T::nan();
    for sweep in 1..=opts.max_sweeps {
        let e = sw.sweep()?;
        debug!("sweep {sweep}: E = {e}, chi = {}", sw.state.max_bond_dim());
        if sweep >= 2 && (e - last).abs() < T::tol(opts.energy_tol) * e.abs().max(T::one()) {
            let gap = sw.gap()?;
            if gap < T::lit(opts.degeneracy_gap) {
                return Err(Error::DegenerateGroundState { gap: gap.to_f64_lossy() });
            }
            return Ok(GroundState {
                state: sw.state,
                energy: e,
                sweeps: sweep,
                gap,
            });
        }
        last = e;
    }
    Err(Error::GroundStateNotConverged {
        sweeps: opts.max_sweeps,
        energy: last.to_f64_lossy(),
    })
}

/// Ground state by imaginary-time TEBD2 with a decreasing step schedule.
pub fn imaginary_time_ground_state<T: Real>(
    params: &ModelParams<T>,
    n: usize,
    policy: &TruncationPolicy,
) -> Result<GroundState<T>> {
    check_size(params, n)?;
    policy.validate()?;
    let mut state = product_mps(&vec![start_spinor::<T>(); n])?;
    state.canonicalize(0)?;
    let mut energy = state.energy(params)?;
    let mut steps = 0;
    const CHECK_EVERY: usize = 10;
    const MAX_CHECKS: usize = 2000;
    for tau in [0.2, 0.1, 0.05, 0.02, 0.01] {
        let layers = trotter2_layers(params, T::lit(tau), n, TimeMode::Imaginary)?;
        let mut converged = false;
        for _ in 0..MAX_CHECKS {
            for _ in 0..CHECK_EVERY {
                state.tebd2_step(&layers, policy)?;
                steps += 1;
            }
            let e = state.energy(params)?;
            let change = (e - energy).abs();
            energy = e;
            if change < T::tol(1e-13) * e.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::GroundStateNotConverged {
                sweeps: steps,
                energy: energy.to_f64_lossy(),
            });
        }
    }
    Ok(GroundState {
        state,
        energy,
        sweeps: steps,
        gap: T::nan(),
    })
}
