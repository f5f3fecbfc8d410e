//! Mixed-field Ising chain with open boundaries,
//! `H = −J Σ σᶻⱼσᶻⱼ₊₁ − h_x Σ σˣⱼ − h_z Σ σᶻⱼ`,
//! as a dense many-body matrix and as two-site Trotter gates.
//!
//! Basis convention shared by the whole crate: `σᶻ` is diagonal with local
//! basis order `(↑, ↓)`, and site 0 is the most significant factor of every
//! tensor product.

use crate::error::{Error, Result};
use crate::linalg::{herm_propagator, kron, pauli, ComplexMatrix};
use crate::scalar::{cr, Real, C};

/// Couplings `(J, h_x, h_z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    pub j: T,
    pub hx: T,
    pub hz: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(j: T, hx: T, hz: T) -> Self {
        Self { j, hx, hz }
    }

    pub fn is_finite(&self) -> bool {
        self.j.is_finite() && self.hx.is_finite() && self.hz.is_finite()
    }

    /// `−h_x σˣ − h_z σᶻ`.
    pub fn single_site_term(&self) -> ComplexMatrix<T> {
        let x = pauli::x::<T>().scale_real(-self.hx);
        let z = pauli::z::<T>().scale_real(-self.hz);
        &x + &z
    }
}

/// Largest chain accepted by the dense constructors.
pub const MAX_DENSE_SITES: usize = 14;

/// Two-site term for bond `bond` (between sites `bond` and `bond + 1`) of an
/// `n`-site chain. Interior fields are split evenly between the two bonds
/// touching a site; the end sites carry their full field on their only bond,
/// so summing all bond terms reproduces the chain Hamiltonian exactly.
pub fn bond_hamiltonian<T: Real>(params: &ModelParams<T>, bond: usize, n: usize) -> Result<ComplexMatrix<T>> {
    if n < 2 || bond + 1 >= n {
        return Err(Error::OutOfRange {
            what: "bond index",
            value: bond,
            range: format!("[0, {})", n.saturating_sub(1)),
        });
    }
    let half = T::lit(0.5);
    let w_left = if bond == 0 { T::one() } else { half };
    let w_right = if bond + 2 == n { T::one() } else { half };
    let id = pauli::identity::<T>();
    let field = params.single_site_term();
    let zz = kron(&pauli::z(), &pauli::z()).scale_real(-params.j);
    let left = kron(&field.scale_real(w_left), &id);
    let right = kron(&id, &field.scale_real(w_right));
    Ok(&(&zz + &left) + &right)
}

/// Embeds an operator acting on `width` consecutive sites starting at `first`
/// into the full `2ⁿ`-dimensional space.
pub fn embed<T: Real>(op: &ComplexMatrix<T>, first: usize, n: usize) -> ComplexMatrix<T> {
    let width = op.rows().trailing_zeros() as usize;
    assert_eq!(op.rows(), 1 << width);
    assert!(first + width <= n);
    let left = ComplexMatrix::identity(1 << first);
    let right = ComplexMatrix::identity(1 << (n - first - width));
    kron(&kron(&left, op), &right)
}

/// Full many-body Hamiltonian, built term by term in the computational basis.
pub fn dense_hamiltonian<T: Real>(params: &ModelParams<T>, n: usize) -> Result<ComplexMatrix<T>> {
    if n == 0 || n > MAX_DENSE_SITES {
        return Err(Error::SizeGuard(format!(
            "dense Hamiltonian needs 1 <= N <= {MAX_DENSE_SITES}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    // bit (n-1-j) of a basis index is site j; 0 = up (σᶻ = +1)
    let sz = |state: usize, site: usize| -> T {
        if (state >> (n - 1 - site)) & 1 == 0 {
            T::one()
        } else {
            -T::one()
        }
    };
    for s in 0..dim {
        let mut diag = T::zero();
        for j in 0..n - 1 {
            diag -= params.j * sz(s, j) * sz(s, j + 1);
        }
        for j in 0..n {
            diag -= params.hz * sz(s, j);
        }
        h[(s, s)] = cr(diag);
        for j in 0..n {
            let flipped = s ^ (1 << (n - 1 - j));
            h[(flipped, s)] += cr(-params.hx);
        }
    }
    Ok(h)
}

/// `H v` without forming the matrix; `v` has `2ⁿ` amplitudes.
pub fn apply_hamiltonian<T: Real>(params: &ModelParams<T>, n: usize, v: &[C<T>]) -> Result<Vec<C<T>>> {
    if n == 0 || n > MAX_DENSE_SITES || v.len() != 1 << n {
        return Err(Error::SizeGuard(format!(
            "Hamiltonian action needs 1 <= N <= {MAX_DENSE_SITES} and 2^N amplitudes, got N = {n} with {}",
            v.len()
        )));
    }
    let mut out = Vec::with_capacity(v.len());
    for s in 0..v.len() {
        let mut diag = T::zero();
        let mut off = C::new(T::zero(), T::zero());
        for j in 0..n {
            let up = (s >> (n - 1 - j)) & 1 == 0;
            let zj = if up { T::one() } else { -T::one() };
            diag -= params.hz * zj;
            if j + 1 < n {
                let up2 = (s >> (n - 2 - j)) & 1 == 0;
                diag -= if up == up2 { params.j } else { -params.j };
            }
            off += v[s ^ (1 << (n - 1 - j))];
        }
        out.push(v[s] * diag - off * params.hx);
    }
    Ok(out)
}

/// Evolution kind for Trotter gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeMode {
    /// Gates `exp(−i h τ)`.
    Real,
    /// Gates `exp(−h τ)`.
    Imaginary,
}

/// One layer of mutually commuting two-site gates.
#[derive(Clone, Debug)]
pub struct GateLayer<T> {
    pub gates: Vec<(usize, ComplexMatrix<T>)>,
}

/// Second-order Trotter step: odd bonds for `τ/2`, even bonds for `τ`, odd
/// bonds for `τ/2` again. Bond numbering here is zero-based, so the "odd"
/// bonds `1, 3, 5, …` of the one-based convention are bonds `0, 2, 4, …`.
#[derive(Clone, Debug)]
pub struct TrotterLayers<T> {
    pub tau: T,
    pub mode: TimeMode,
    pub n: usize,
    pub layers: [GateLayer<T>; 3],
}

impl<T: Real> TrotterLayers<T> {
    /// All `(bond, gate)` pairs in application order.
    pub fn ordered(&self) -> impl Iterator<Item = &(usize, ComplexMatrix<T>)> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }
}

pub fn trotter2_layers<T: Real>(params: &ModelParams<T>, tau: T, n: usize, mode: TimeMode) -> Result<TrotterLayers<T>> {
    if !(tau > T::zero()) {
        return Err(Error::InvalidState(format!("time step must be positive, got {tau}")));
    }
    if n < 2 {
        return Err(Error::SizeGuard(format!("Trotter layers need N >= 2, got {n}")));
    }
    let half = tau * T::lit(0.5);
    let factor = |dt: T| -> C<T> {
        match mode {
            TimeMode::Real => C::new(T::zero(), -dt),
            TimeMode::Imaginary => C::new(-dt, T::zero()),
        }
    };
    let hams: Vec<ComplexMatrix<T>> = (0..n - 1)
        .map(|b| bond_hamiltonian(params, b, n))
        .collect::<Result<_>>()?;
    let layer = |parity: usize, dt: T| -> Result<GateLayer<T>> {
        let gates = (parity..n - 1)
            .step_by(2)
            .map(|b| Ok((b, herm_propagator(&hams[b], factor(dt))?)))
            .collect::<Result<_>>()?;
        Ok(GateLayer { gates })
    };
    let odd = layer(0, half)?;
    Ok(TrotterLayers {
        tau,
        mode,
        n,
        layers: [odd.clone(), layer(1, tau)?, odd],
    })
}
