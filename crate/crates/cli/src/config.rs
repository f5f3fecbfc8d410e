//! Run configuration, read from a flat JSON object.
//!
//! Site numbers in configs are one-based; `a` defaults to the chain centre
//! `⌈N/2⌉`.

use std::collections::HashSet;
use std::path::Path;

use quench_core::density::MAX_RDM_SITES;
use quench_core::mps::TruncationPolicy;
use quench_core::ModelParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(alias = "J")]
    pub j: f64,
    pub hx: f64,
    pub hz: f64,
}

impl ParamsSpec {
    pub fn new(j: f64, hx: f64, hz: f64) -> Self {
        Self { j, hx, hz }
    }

    pub fn model(&self) -> ModelParams<f64> {
        ModelParams::new(self.j, self.hx, self.hz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub cutoff: f64,
    pub chi_max: usize,
}

impl Default for PolicySpec {
    fn default() -> Self {
        Self {
            cutoff: 1e-9,
            chi_max: 50,
        }
    }
}

/// One requested observable. Sites are one-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    VneeHalf,
    R2eeHalf,
    SeeHalf,
    VneeSites {
        sites: Vec<usize>,
    },
    SeeSites {
        sites: Vec<usize>,
    },
    /// Sites `a` and `a + 1 + d`.
    NegativityPair {
        #[serde(default)]
        a: Option<usize>,
        #[serde(default)]
        d: usize,
    },
    /// Block `a..a+n-2` against spin `a+n-1`.
    NegativitySplit {
        #[serde(default)]
        a: Option<usize>,
        n: usize,
    },
    ConcurrencePair {
        #[serde(default)]
        a: Option<usize>,
        #[serde(default)]
        d: usize,
    },
    LevelkSites {
        sites: Vec<usize>,
    },
    /// `I(a : a+1+d)`.
    Bmi {
        #[serde(default)]
        a: Option<usize>,
        #[serde(default)]
        d: usize,
    },
    /// `I₃(a : a+1 : a+2)`.
    Tmi {
        #[serde(default)]
        a: Option<usize>,
    },
    Energy,
    BondChi,
    DiscardedWeight,
}

fn default_stride() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuenchConfig {
    #[serde(alias = "N")]
    pub n: usize,
    pub pre: ParamsSpec,
    pub post: ParamsSpec,
    pub tau: f64,
    pub t_max: f64,
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default = "default_stride")]
    pub measure_stride: usize,
    #[serde(default)]
    pub observables: Vec<ObservableSpec>,
    #[serde(default)]
    pub output_path: Option<String>,
}

/// What an observable needs from a snapshot, with zero-based sites.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    HalfVn,
    HalfRenyi2,
    HalfSingleCopy,
    Vn(Vec<usize>),
    SingleCopy(Vec<usize>),
    Negativity { sites: Vec<usize>, block: usize },
    Concurrence([usize; 2]),
    LevelK(Vec<usize>),
    Bmi([usize; 2]),
    Tmi([usize; 3]),
    Energy,
    BondChi,
    DiscardedWeight,
}

impl Measure {
    /// Whether the quantity exists for an exact state vector too.
    pub fn is_physical(&self) -> bool {
        !matches!(self, Measure::BondChi | Measure::DiscardedWeight)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub measure: Measure,
    /// Column names; several for level-k sums.
    pub columns: Vec<String>,
}

fn join(sites: &[usize]) -> String {
    sites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("_")
}

impl QuenchConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn policy(&self) -> CliResult<TruncationPolicy> {
        TruncationPolicy::new(self.policy.cutoff, self.policy.chi_max).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Number of Trotter steps to reach `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.tau + 1e-9).floor() as usize
    }

    /// Default `a`: the chain centre, one-based.
    pub fn center(&self) -> usize {
        self.n.div_ceil(2)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.n < 2 {
            return bad(format!("N must be at least 2, got {}", self.n));
        }
        for (name, p) in [("pre", &self.pre), ("post", &self.post)] {
            if !(p.j.is_finite() && p.hx.is_finite() && p.hz.is_finite()) {
                return bad(format!("{name} parameters must be finite"));
            }
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if !(self.t_max >= self.tau && self.t_max.is_finite()) {
            return bad(format!("t_max must be at least tau, got {}", self.t_max));
        }
        if self.measure_stride == 0 {
            return bad("measure_stride must be at least 1".into());
        }
        self.policy()?;
        let mut seen = HashSet::new();
        for o in self.resolve()? {
            for c in o.columns {
                if !seen.insert(c.clone()) {
                    return bad(format!("duplicate observable column {c}"));
                }
            }
        }
        Ok(())
    }

    /// Zero-based measurements and their column names, in declaration order.
    pub fn resolve(&self) -> CliResult<Vec<Observable>> {
        self.observables.iter().map(|o| self.resolve_one(o)).collect()
    }

    fn sites(&self, sites: &[usize]) -> CliResult<Vec<usize>> {
        if sites.is_empty() || sites.len() > MAX_RDM_SITES {
            return Err(CliError::Config(format!(
                "site lists need 1 to {MAX_RDM_SITES} entries, got {}",
                sites.len()
            )));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(format!("sites {sites:?} must be strictly ascending")));
        }
        if sites[0] < 1 || sites[sites.len() - 1] > self.n {
            return Err(CliError::Config(format!("sites {sites:?} outside [1, {}]", self.n)));
        }
        Ok(sites.iter().map(|s| s - 1).collect())
    }

    fn resolve_one(&self, spec: &ObservableSpec) -> CliResult<Observable> {
        let one = |measure: Measure, name: String| Observable {
            measure,
            columns: vec![name],
        };
        let a_or = |a: Option<usize>| a.unwrap_or(self.center());
        Ok(match spec {
            ObservableSpec::VneeHalf => one(Measure::HalfVn, "vnee_half".into()),
            ObservableSpec::R2eeHalf => one(Measure::HalfRenyi2, "r2ee_half".into()),
            ObservableSpec::SeeHalf => one(Measure::HalfSingleCopy, "see_half".into()),
            ObservableSpec::VneeSites { sites } => {
                one(Measure::Vn(self.sites(sites)?), format!("vnee_sites_{}", join(sites)))
            }
            ObservableSpec::SeeSites { sites } => one(
                Measure::SingleCopy(self.sites(sites)?),
                format!("see_sites_{}", join(sites)),
            ),
            ObservableSpec::NegativityPair { a, d } => {
                let a = a_or(*a);
                let s = self.sites(&[a, a + 1 + d])?;
                one(
                    Measure::Negativity { sites: s, block: 1 },
                    format!("negativity_pair_a{a}_d{d}"),
                )
            }
            ObservableSpec::NegativitySplit { a, n } => {
                if !(2..=5).contains(n) {
                    return Err(CliError::Config(format!("negativity_split needs n in 2..=5, got {n}")));
                }
                let a = a_or(*a);
                let all: Vec<usize> = (a..a + n).collect();
                one(
                    Measure::Negativity {
                        sites: self.sites(&all)?,
                        block: n - 1,
                    },
                    format!("negativity_split_a{a}_n{n}"),
                )
            }
            ObservableSpec::ConcurrencePair { a, d } => {
                let a = a_or(*a);
                let s = self.sites(&[a, a + 1 + d])?;
                one(Measure::Concurrence([s[0], s[1]]), format!("concurrence_pair_a{a}_d{d}"))
            }
            ObservableSpec::LevelkSites { sites } => {
                let s = self.sites(sites)?;
                let base = format!("levelk_sites_{}", join(sites));
                Observable {
                    columns: (1..=1usize << s.len()).map(|k| format!("{base}_k{k}")).collect(),
                    measure: Measure::LevelK(s),
                }
            }
            ObservableSpec::Bmi { a, d } => {
                let a = a_or(*a);
                let s = self.sites(&[a, a + 1 + d])?;
                one(Measure::Bmi([s[0], s[1]]), format!("bmi_a{a}_d{d}"))
            }
            ObservableSpec::Tmi { a } => {
                let a = a_or(*a);
                let s = self.sites(&[a, a + 1, a + 2])?;
                one(Measure::Tmi([s[0], s[1], s[2]]), format!("tmi_a{a}"))
            }
            ObservableSpec::Energy => one(Measure::Energy, "energy".into()),
            ObservableSpec::BondChi => one(Measure::BondChi, "bond_chi".into()),
            ObservableSpec::DiscardedWeight => one(Measure::DiscardedWeight, "discarded_weight".into()),
        })
    }
}
