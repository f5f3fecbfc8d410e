//! Matrix product states: canonical-form bookkeeping, two-site gate updates
//! with SVD truncation, TEBD2 steps, measurements and ground-state search.

mod dmrg;
mod measure;

use crate::error::{Error, Result};
use crate::linalg::{qr_thin, svd, ComplexMatrix};
use crate::model::{TimeMode, TrotterLayers};
use crate::scalar::{cz, Real, C};

pub use dmrg::{ground_state, ground_state_with, imaginary_time_ground_state, DmrgOptions, GroundState};
pub use measure::Environments;

/// Norm drift tolerated on a public operation before it is reported.
pub const NORM_TOL: f64 = 1e-8;

/// Truncation of every two-site update: keep the fewest singular values
/// whose discarded weight `Σ s²` is at most `cutoff` times the total,
/// never more than `chi_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub cutoff: f64,
    pub chi_max: usize,
}

impl TruncationPolicy {
    pub fn new(cutoff: f64, chi_max: usize) -> Result<Self> {
        let p = Self { cutoff, chi_max };
        p.validate()?;
        Ok(p)
    }

    /// No truncation beyond exact zeros.
    pub fn exact() -> Self {
        Self {
            cutoff: 0.0,
            chi_max: usize::MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff >= 0.0) || !self.cutoff.is_finite() {
            return Err(Error::InvalidState(format!("cutoff must be >= 0, got {}", self.cutoff)));
        }
        if self.chi_max == 0 {
            return Err(Error::InvalidState("chi_max must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of singular values to keep.
    fn keep<T: Real>(&self, s: &[T]) -> usize {
        let total: T = s.iter().map(|&x| x * x).sum();
        let budget = T::lit(self.cutoff) * total;
        let mut k = s.len();
        let mut tail = T::zero();
        while k > 1 {
            let w = s[k - 1] * s[k - 1];
            if tail + w > budget {
                break;
            }
            tail += w;
            k -= 1;
        }
        k.min(self.chi_max).max(1)
    }
}

/// Rank-3 site tensor `A[a, s, b]` stored row-major with shape `(dl, 2, dr)`.
/// Read as a `(2·dl) × dr` matrix it is left-grouped; as `dl × (2·dr)` it is
/// right-grouped. Both views share the buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor<T> {
    dl: usize,
    dr: usize,
    data: Vec<C<T>>,
}

impl<T: Real> SiteTensor<T> {
    fn new(dl: usize, dr: usize, data: Vec<C<T>>) -> Self {
        debug_assert_eq!(data.len(), dl * 2 * dr);
        Self { dl, dr, data }
    }

    pub fn left_dim(&self) -> usize {
        self.dl
    }

    pub fn right_dim(&self) -> usize {
        self.dr
    }

    #[inline]
    pub fn get(&self, a: usize, s: usize, b: usize) -> C<T> {
        self.data[(a * 2 + s) * self.dr + b]
    }

    fn left_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(2 * self.dl, self.dr, self.data.clone())
    }

    fn right_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(self.dl, 2 * self.dr, self.data.clone())
    }

    /// The `dl × dr` slice for physical index `s`.
    fn slice(&self, s: usize) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.dl, self.dr, |a, b| self.get(a, s, b))
    }
}

/// Open-boundary MPS over spin-1/2 sites.
#[derive(Clone, Debug)]
pub struct MatrixProductState<T> {
    tensors: Vec<SiteTensor<T>>,
    center: Option<usize>,
}

/// Build an MPS with bond dimension 1 from normalized single-spin states
/// `[⟨↑|ψ⟩, ⟨↓|ψ⟩]`.
pub fn product_mps<T: Real>(local_states: &[[C<T>; 2]]) -> Result<MatrixProductState<T>> {
    if local_states.is_empty() {
        return Err(Error::SizeGuard("an MPS needs at least one site".into()));
    }
    let tensors = local_states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ns = s[0].norm_sqr() + s[1].norm_sqr();
            if (ns - T::one()).abs() > T::tol(1e-10) {
                return Err(Error::Unnormalized {
                    index: i,
                    norm_sqr: ns.to_f64_lossy(),
                });
            }
            Ok(SiteTensor::new(1, 1, s.to_vec()))
        })
        .collect::<Result<_>>()?;
    Ok(MatrixProductState {
        tensors,
        center: Some(0),
    })
}

/// Outcome of a two-site update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateReport<T> {
    /// Discarded fraction of the squared singular values.
    pub discarded_weight: T,
    /// Bond dimension after truncation.
    pub bond_dim: usize,
}

/// Where the singular values go after a two-site update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Absorb {
    Left,
    Right,
}

impl<T: Real> MatrixProductState<T> {
    /// Builds a state from raw site tensors `(dl, 2, dr, data)`; the
    /// orthogonality centre is unknown until [`Self::canonicalize`].
    pub fn from_tensors(tensors: Vec<(usize, usize, Vec<C<T>>)>) -> Result<Self> {
        let n = tensors.len();
        if n == 0 {
            return Err(Error::SizeGuard("an MPS needs at least one site".into()));
        }
        let mut out = Vec::with_capacity(n);
        for (j, (dl, dr, data)) in tensors.into_iter().enumerate() {
            let expect_left = if j == 0 { 1 } else { out.last().map_or(1, |t: &SiteTensor<T>| t.dr) };
            if dl != expect_left || (j + 1 == n && dr != 1) || data.len() != dl * 2 * dr {
                return Err(Error::DimensionMismatch(format!(
                    "site {j}: shape ({dl}, 2, {dr}) with {} entries",
                    data.len()
                )));
            }
            if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            out.push(SiteTensor::new(dl, dr, data));
        }
        Ok(Self {
            tensors: out,
            center: None,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn tensor(&self, site: usize) -> &SiteTensor<T> {
        &self.tensors[site]
    }

    /// Dimension of bond `b` (between sites `b` and `b + 1`).
    pub fn bond_dim(&self, bond: usize) -> usize {
        self.tensors[bond].dr
    }

    pub fn max_bond_dim(&self) -> usize {
        self.tensors.iter().map(|t| t.dr).max().unwrap_or(1)
    }

    fn check_bond(&self, bond: usize) -> Result<()> {
        let n = self.num_sites();
        if bond + 1 >= n {
            return Err(Error::OutOfRange {
                what: "bond",
                value: bond,
                range: format!("[0, {})", n.saturating_sub(1)),
            });
        }
        Ok(())
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.num_sites() {
            return Err(Error::OutOfRange {
                what: "site",
                value: site,
                range: format!("[0, {})", self.num_sites()),
            });
        }
        Ok(())
    }

    /// Brings the state into mixed canonical form around `site` and
    /// normalizes it.
    pub fn canonicalize(&mut self, site: usize) -> Result<()> {
        self.check_site(site)?;
        for j in 0..site {
            self.shift_right(j);
        }
        for j in (site + 1..self.num_sites()).rev() {
            self.shift_left(j);
        }
        self.center = Some(site);
        self.normalize_center();
        Ok(())
    }

    /// Moves the orthogonality centre to `site`, canonicalizing first if the
    /// centre is unknown.
    pub fn move_center(&mut self, site: usize) -> Result<()> {
        self.check_site(site)?;
        let Some(mut c) = self.center else {
            return self.canonicalize(site);
        };
        while c < site {
            self.shift_right(c);
            c += 1;
        }
        while c > site {
            self.shift_left(c);
            c -= 1;
        }
        self.center = Some(site);
        Ok(())
    }

    /// QR at site `j`, pushing the non-isometric part into `j + 1`.
    fn shift_right(&mut self, j: usize) {
        let (q, r) = qr_thin(&self.tensors[j].left_matrix());
        let k = q.cols();
        let dl = self.tensors[j].dl;
        self.tensors[j] = SiteTensor::new(dl, k, q.into_vec());
        let next = &self.tensors[j + 1];
        let merged = r.matmul(&next.right_matrix());
        let dr = next.dr;
        self.tensors[j + 1] = SiteTensor::new(k, dr, merged.into_vec());
    }

    /// LQ at site `j`, pushing the non-isometric part into `j − 1`.
    fn shift_left(&mut self, j: usize) {
        let (q, r) = qr_thin(&self.tensors[j].right_matrix().adjoint());
        let k = q.cols();
        let dr = self.tensors[j].dr;
        self.tensors[j] = SiteTensor::new(k, dr, q.adjoint().into_vec());
        let prev = &self.tensors[j - 1];
        let merged = prev.left_matrix().matmul(&r.adjoint());
        let dl = prev.dl;
        self.tensors[j - 1] = SiteTensor::new(dl, k, merged.into_vec());
    }

    fn normalize_center(&mut self) {
        let c = self.center.expect("canonical");
        let t = &mut self.tensors[c];
        let norm = t.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::zero() {
            for z in t.data.iter_mut() {
                *z /= norm;
            }
        }
    }

    /// `⟨Ψ|Ψ⟩`.
    pub fn norm_sqr(&self) -> T {
        if let Some(c) = self.center {
            return self.tensors[c].data.iter().map(|z| z.norm_sqr()).sum();
        }
        let mut env = ComplexMatrix::identity(1);
        for t in &self.tensors {
            env = measure::transfer_left(&env, t);
        }
        env[(0, 0)].re
    }

    /// Applies a 4×4 gate (row index `2·s₁ + s₂`) on bond `bond` and
    /// truncates. The centre ends on whichever of the two sites it was
    /// closest to.
    pub fn apply_two_site_gate(
        &mut self,
        gate: &ComplexMatrix<T>,
        bond: usize,
        policy: &TruncationPolicy,
    ) -> Result<GateReport<T>> {
        self.check_bond(bond)?;
        let absorb = match self.center {
            Some(c) if c > bond => Absorb::Right,
            _ => Absorb::Left,
        };
        self.apply_gate_directed(gate, bond, policy, absorb, false)
    }

    fn apply_gate_directed(
        &mut self,
        gate: &ComplexMatrix<T>,
        bond: usize,
        policy: &TruncationPolicy,
        absorb: Absorb,
        normalize: bool,
    ) -> Result<GateReport<T>> {
        if gate.rows() != 4 || gate.cols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "two-site gate must be 4x4, got {}x{}",
                gate.rows(),
                gate.cols()
            )));
        }
        match self.center {
            Some(c) if c == bond || c == bond + 1 => {}
            Some(c) if c < bond => self.move_center(bond)?,
            _ => self.move_center(bond + 1)?,
        }
        let theta = self.two_site_theta(bond);
        let dl = self.tensors[bond].dl;
        let dr = self.tensors[bond + 1].dr;
        let applied = apply_gate_to_theta(gate, &theta, dl, dr);
        self.split_theta(applied, bond, policy, absorb, normalize)
    }

    /// `θ[(a, s₁), (s₂, b)]` for bond `bond`.
    fn two_site_theta(&self, bond: usize) -> ComplexMatrix<T> {
        self.tensors[bond]
            .left_matrix()
            .matmul(&self.tensors[bond + 1].right_matrix())
    }

    /// SVD-splits a two-site block back into sites `bond`, `bond + 1`.
    fn split_theta(
        &mut self,
        theta: ComplexMatrix<T>,
        bond: usize,
        policy: &TruncationPolicy,
        absorb: Absorb,
        normalize: bool,
    ) -> Result<GateReport<T>> {
        let dl = self.tensors[bond].dl;
        let dr = self.tensors[bond + 1].dr;
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        let f = svd(&theta)?;
        let k = policy.keep(&f.s);
        let total: T = f.s.iter().map(|&x| x * x).sum();
        let kept: T = f.s[..k].iter().map(|&x| x * x).sum();
        if !(kept > T::zero()) {
            return Err(Error::InvalidState("two-site block vanished".into()));
        }
        let discarded = ((total - kept) / total).max(T::zero());
        let scale = if normalize { T::one() / kept.sqrt() } else { (total / kept).sqrt() };
        let s: Vec<C<T>> = f.s[..k].iter().map(|&x| C::new(x * scale, T::zero())).collect();
        let u = f.u.take_columns(k);
        let vdag = f.vdag.take_rows(k);
        let (left, right) = match absorb {
            Absorb::Right => {
                let sv = ComplexMatrix::from_fn(k, vdag.cols(), |i, j| s[i] * vdag[(i, j)]);
                (u, sv)
            }
            Absorb::Left => (u.scale_columns(&s), vdag),
        };
        self.tensors[bond] = SiteTensor::new(dl, k, left.into_vec());
        self.tensors[bond + 1] = SiteTensor::new(k, dr, right.into_vec());
        self.center = Some(match absorb {
            Absorb::Right => bond + 1,
            Absorb::Left => bond,
        });
        Ok(GateReport {
            discarded_weight: discarded,
            bond_dim: k,
        })
    }

    /// One second-order Trotter step. Each layer is swept in the direction
    /// that starts nearest the current orthogonality centre. Returns the
    /// largest discarded weight of any gate.
    pub fn tebd2_step(&mut self, layers: &TrotterLayers<T>, policy: &TruncationPolicy) -> Result<T> {
        if layers.n != self.num_sites() {
            return Err(Error::DimensionMismatch(format!(
                "Trotter layers for {} sites applied to {} sites",
                layers.n,
                self.num_sites()
            )));
        }
        let normalize = layers.mode == TimeMode::Imaginary;
        let mut worst = T::zero();
        for layer in &layers.layers {
            let gates = &layer.gates;
            if gates.is_empty() {
                continue;
            }
            let first = gates[0].0;
            let last = gates[gates.len() - 1].0;
            let c = match self.center {
                Some(c) => c,
                None => {
                    self.canonicalize(first)?;
                    first
                }
            };
            let ascending = c.abs_diff(first) <= c.abs_diff(last + 1);
            if ascending {
                for (b, g) in gates {
                    let r = self.apply_gate_directed(g, *b, policy, Absorb::Right, normalize)?;
                    worst = worst.max(r.discarded_weight);
                }
            } else {
                for (b, g) in gates.iter().rev() {
                    let r = self.apply_gate_directed(g, *b, policy, Absorb::Left, normalize)?;
                    worst = worst.max(r.discarded_weight);
                }
            }
        }
        Ok(worst)
    }

    /// Dense amplitudes (site 0 most significant); for tests and small chains.
    pub fn to_dense(&self) -> Result<Vec<C<T>>> {
        let n = self.num_sites();
        if n > crate::model::MAX_DENSE_SITES {
            return Err(Error::SizeGuard(format!("dense expansion of {n} sites")));
        }
        // rows: basis prefix, cols: current bond
        let mut acc = ComplexMatrix::identity(1);
        for t in &self.tensors {
            let rows = acc.rows();
            let next = acc.matmul(&t.right_matrix());
            // (prefix, (s, b)) -> ((prefix, s), b)
            acc = next.reshape(rows * 2, t.dr);
        }
        Ok(acc.into_vec())
    }
}

/// `θ'[(a,s₁),(s₂,b)] = Σ G[(s₁s₂),(t₁t₂)] θ[(a,t₁),(t₂,b)]`.
fn apply_gate_to_theta<T: Real>(gate: &ComplexMatrix<T>, theta: &ComplexMatrix<T>, dl: usize, dr: usize) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(2 * dl, 2 * dr);
    let g = gate.as_slice();
    let src = theta.as_slice();
    let dst = out.as_mut_slice();
    let cols = 2 * dr;
    for a in 0..dl {
        let idx = |s1: usize, s2: usize, b: usize| (a * 2 + s1) * cols + s2 * dr + b;
        for b in 0..dr {
            let v = [src[idx(0, 0, b)], src[idx(0, 1, b)], src[idx(1, 0, b)], src[idx(1, 1, b)]];
            for (row, (s1, s2)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                let mut acc = cz::<T>();
                for (col, vc) in v.iter().enumerate() {
                    acc += g[row * 4 + col] * vc;
                }
                dst[idx(s1, s2, b)] = acc;
            }
        }
    }
    out
}
