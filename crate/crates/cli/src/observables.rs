use std::collections::HashMap;

use quench_core::ed::{exact_rdm, StateVector};
use quench_core::mps::{Environments, MatrixProductState};
use quench_core::qi::{
    concurrence, level_k_sums, mutual_information, negativity, renyi2_from_spectrum, single_copy_entropy, spectrum,
    tripartite_mi, vn_entropy,
};
use quench_core::{BipartiteSplit, DensityMatrix, ModelParams, Result, Spectrum};

use crate::config::{Measure, Observable};

/// Read access to one frozen state.
pub trait Probe {
    fn num_sites(&self) -> usize;
    /// Reduced density matrix on ascending zero-based sites.
    fn rdm(&self, sites: &[usize]) -> Result<DensityMatrix<f64>>;
    /// Squared Schmidt values across the central bond.
    fn half_spectrum(&self) -> Result<Spectrum<f64>>;
    fn energy(&self, params: &ModelParams<f64>) -> Result<f64>;
}

pub struct MpsProbe<'a> {
    state: &'a MatrixProductState<f64>,
    envs: Environments<f64>,
}

impl<'a> MpsProbe<'a> {
    pub fn new(state: &'a MatrixProductState<f64>) -> Self {
        Self {
            state,
            envs: Environments::new(state),
        }
    }
}

impl Probe for MpsProbe<'_> {
    fn num_sites(&self) -> usize {
        self.state.num_sites()
    }

    fn rdm(&self, sites: &[usize]) -> Result<DensityMatrix<f64>> {
        self.envs.rdm(self.state, sites)
    }

    fn half_spectrum(&self) -> Result<Spectrum<f64>> {
        self.state.bond_spectrum(self.state.num_sites() / 2 - 1)
    }

    fn energy(&self, params: &ModelParams<f64>) -> Result<f64> {
        self.state.energy(params)
    }
}

pub struct ExactProbe<'a> {
    state: &'a StateVector<f64>,
}

impl<'a> ExactProbe<'a> {
    pub fn new(state: &'a StateVector<f64>) -> Self {
        Self { state }
    }
}

impl Probe for ExactProbe<'_> {
    fn num_sites(&self) -> usize {
        self.state.num_sites()
    }

    fn rdm(&self, sites: &[usize]) -> Result<DensityMatrix<f64>> {
        exact_rdm(self.state, sites)
    }

    fn half_spectrum(&self) -> Result<Spectrum<f64>> {
        let half: Vec<usize> = (0..self.state.num_sites() / 2).collect();
        spectrum(&exact_rdm(self.state, &half)?)
    }

    fn energy(&self, params: &ModelParams<f64>) -> Result<f64> {
        self.state.energy(params)
    }
}

/// Engine-side values that have no counterpart in an exact state.
#[derive(Clone, Copy, Debug, Default)]
pub struct EngineInfo {
    pub bond_dim: usize,
    pub discarded_weight: f64,
}

/// Evaluates observables on one snapshot, reusing reduced density matrices.
pub struct Evaluator<'p, P: Probe> {
    probe: &'p P,
    cache: HashMap<Vec<usize>, DensityMatrix<f64>>,
    half: Option<Spectrum<f64>>,
}

impl<'p, P: Probe> Evaluator<'p, P> {
    pub fn new(probe: &'p P) -> Self {
        Self {
            probe,
            cache: HashMap::new(),
            half: None,
        }
    }

    fn rdm(&mut self, sites: &[usize]) -> Result<DensityMatrix<f64>> {
        if let Some(r) = self.cache.get(sites) {
            return Ok(r.clone());
        }
        let r = self.probe.rdm(sites)?;
        self.cache.insert(sites.to_vec(), r.clone());
        Ok(r)
    }

    fn half(&mut self) -> Result<Spectrum<f64>> {
        if self.half.is_none() {
            self.half = Some(self.probe.half_spectrum()?);
        }
        Ok(self.half.clone().expect("just set"))
    }

    fn entropy_of(rho: &DensityMatrix<f64>) -> Result<f64> {
        Ok(vn_entropy(&spectrum(rho)?))
    }

    /// Appends the values of `obs` to `row`; engine-only quantities come from `info`
    /// and are NaN when it is absent.
    pub fn push(
        &mut self,
        obs: &Observable,
        post: &ModelParams<f64>,
        info: Option<EngineInfo>,
        row: &mut Vec<f64>,
    ) -> Result<()> {
        match &obs.measure {
            Measure::HalfVn => row.push(vn_entropy(&self.half()?)),
            Measure::HalfRenyi2 => row.push(renyi2_from_spectrum(&self.half()?)),
            Measure::HalfSingleCopy => row.push(single_copy_entropy(&self.half()?)),
            Measure::Vn(s) => {
                let rho = self.rdm(s)?;
                row.push(Self::entropy_of(&rho)?);
            }
            Measure::SingleCopy(s) => {
                let rho = self.rdm(s)?;
                row.push(single_copy_entropy(&spectrum(&rho)?));
            }
            Measure::Negativity { sites, block } => {
                let rho = self.rdm(sites)?;
                let split = BipartiteSplit::qubits(*block, sites.len() - block);
                row.push(negativity(&rho, split)?);
            }
            Measure::Concurrence(s) => {
                let rho = self.rdm(s)?;
                row.push(concurrence(&rho)?);
            }
            Measure::LevelK(s) => {
                let rho = self.rdm(s)?;
                row.extend(level_k_sums(&spectrum(&rho)?));
            }
            Measure::Bmi([a, b]) => {
                let rho = self.rdm(&[*a, *b])?;
                let sa = Self::entropy_of(&rho.reduce_to(&[*a])?)?;
                let sb = Self::entropy_of(&rho.reduce_to(&[*b])?)?;
                let sab = Self::entropy_of(&rho)?;
                row.push(mutual_information(sa, sb, sab)?);
            }
            Measure::Tmi([a, b, c]) => {
                let rho = self.rdm(&[*a, *b, *c])?;
                let s = |keep: &[usize]| -> Result<f64> { Self::entropy_of(&rho.reduce_to(keep)?) };
                let (sa, sb, sc) = (s(&[*a])?, s(&[*b])?, s(&[*c])?);
                let i_ab = mutual_information(sa, sb, s(&[*a, *b])?)?;
                let i_ac = mutual_information(sa, sc, s(&[*a, *c])?)?;
                let i_abc = mutual_information(sa, s(&[*b, *c])?, Self::entropy_of(&rho)?)?;
                row.push(tripartite_mi(i_ab, i_ac, i_abc));
            }
            Measure::Energy => row.push(self.probe.energy(post)?),
            Measure::BondChi => row.push(info.map_or(f64::NAN, |i| i.bond_dim as f64)),
            Measure::DiscardedWeight => row.push(info.map_or(f64::NAN, |i| i.discarded_weight)),
        }
        Ok(())
    }

    /// One full measurement row for `observables`.
    pub fn row(
        &mut self,
        observables: &[Observable],
        post: &ModelParams<f64>,
        info: Option<EngineInfo>,
    ) -> Result<Vec<f64>> {
        let mut row = Vec::new();
        for o in observables {
            self.push(o, post, info, &mut row)?;
        }
        Ok(row)
    }
}
