use std::time::Instant;

use log::info;
use quench_core::ed::{exact_ground, ExactPropagator};
use quench_core::model::{trotter2_layers, TimeMode};
use quench_core::mps::{ground_state, MatrixProductState, TruncationPolicy, NORM_TOL};
use quench_core::qi::vn_entropy;
use serde::Serialize;

use crate::config::{ParamsSpec, QuenchConfig};
use crate::error::{CliError, CliResult};
use crate::observables::{EngineInfo, Evaluator, ExactProbe, MpsProbe};
use crate::series::TimeSeries;

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub n: usize,
    pub steps: usize,
    pub measurements: usize,
    pub ground_energy: f64,
    pub ground_sweeps: usize,
    pub max_discarded_weight: f64,
    pub max_bond_dim: usize,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub series: TimeSeries,
    pub summary: RunSummary,
}

/// One measurement point handed to an observer.
pub struct Snapshot<'a> {
    pub step: usize,
    pub time: f64,
    pub state: &'a MatrixProductState<f64>,
    pub row: &'a [f64],
}

/// Ground state of `config.pre`, evolved under `config.post`.
pub fn run_quench(config: &QuenchConfig) -> CliResult<RunOutput> {
    run_quench_with(config, |_| Ok(()))
}

/// As [`run_quench`], calling `observe` at every measurement point.
pub fn run_quench_with(
    config: &QuenchConfig,
    mut observe: impl FnMut(&Snapshot) -> CliResult<()>,
) -> CliResult<RunOutput> {
    config.validate()?;
    let start = Instant::now();
    let observables = config.resolve()?;
    let names = observables.iter().flat_map(|o| o.columns.iter().cloned()).collect();
    let mut series = TimeSeries::new(names);
    let policy = config.policy()?;
    let pre = config.pre.model();
    let post = config.post.model();

    let ground = ground_state(&pre, config.n, &policy)?;
    info!(
        "ground state: E = {}, {} sweeps, chi = {}",
        ground.energy,
        ground.sweeps,
        ground.state.max_bond_dim()
    );
    let mut state = ground.state;
    let layers = trotter2_layers(&post, config.tau, config.n, TimeMode::Real)?;
    let steps = config.steps();
    let mut window_discarded = 0.0f64;
    let mut max_discarded = 0.0f64;
    let mut max_bond_dim = state.max_bond_dim();

    for step in 0..=steps {
        if step > 0 {
            let w = state.tebd2_step(&layers, &policy)?;
            window_discarded = window_discarded.max(w);
            max_discarded = max_discarded.max(w);
            max_bond_dim = max_bond_dim.max(state.max_bond_dim());
        }
        if step % config.measure_stride != 0 {
            continue;
        }
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > NORM_TOL {
            return Err(CliError::Contract(format!("norm drifted by {drift:e} at step {step}")));
        }
        let t = step as f64 * config.tau;
        let probe = MpsProbe::new(&state);
        let info = EngineInfo {
            bond_dim: state.max_bond_dim(),
            discarded_weight: window_discarded,
        };
        let row = Evaluator::new(&probe).row(&observables, &post, Some(info))?;
        series.push(t, &row)?;
        observe(&Snapshot {
            step,
            time: t,
            state: &state,
            row: &row,
        })?;
        window_discarded = 0.0;
        if step % (config.measure_stride * 100) == 0 {
            info!("t = {t:.2}, chi = {}, {:.1?}", state.max_bond_dim(), start.elapsed());
        }
    }
    let summary = RunSummary {
        n: config.n,
        steps,
        measurements: series.len(),
        ground_energy: ground.energy,
        ground_sweeps: ground.sweeps,
        max_discarded_weight: max_discarded,
        max_bond_dim,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { series, summary })
}

/// Largest chain accepted by [`oracle_compare`].
pub const ORACLE_MAX_SITES: usize = 10;
/// Comparison horizon.
pub const ORACLE_T_MAX: f64 = 5.0;

#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    pub observable: String,
    pub max_abs_deviation: f64,
    pub at_time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub tau: f64,
    pub t_max: f64,
    pub samples: usize,
    pub deviations: Vec<Deviation>,
    pub max_deviation: f64,
}

/// Runs the engine and the exact propagator on the same schedule up to
/// `min(t_max, 5)` and reports the largest deviation of each physical column.
pub fn oracle_compare(config: &QuenchConfig) -> CliResult<OracleReport> {
    config.validate()?;
    if config.n > ORACLE_MAX_SITES {
        return Err(CliError::Config(format!(
            "oracle comparison needs N <= {ORACLE_MAX_SITES}, got {}",
            config.n
        )));
    }
    let mut cfg = config.clone();
    cfg.t_max = config.t_max.min(ORACLE_T_MAX);
    let observables = cfg.resolve()?;
    let post = cfg.post.model();
    let (_, psi0) = exact_ground(&cfg.pre.model(), cfg.n)?;
    let prop = ExactPropagator::new(&post, cfg.n)?;

    let physical: Vec<bool> = observables
        .iter()
        .flat_map(|o| std::iter::repeat(o.measure.is_physical()).take(o.columns.len()))
        .collect();
    let mut worst = vec![(0.0f64, 0.0f64); physical.len()];
    let mut samples = 0;
    let out = run_quench_with(&cfg, |snap| {
        let psi = prop.evolve(&psi0, snap.time)?;
        let probe = ExactProbe::new(&psi);
        let exact = Evaluator::new(&probe).row(&observables, &post, None)?;
        for (i, (a, b)) in snap.row.iter().zip(&exact).enumerate() {
            if physical[i] {
                let d = (a - b).abs();
                if !(d <= worst[i].0) {
                    worst[i] = (d, snap.time);
                }
            }
        }
        samples += 1;
        Ok(())
    })?;
    let deviations: Vec<Deviation> = out
        .series
        .names()
        .iter()
        .zip(&worst)
        .zip(&physical)
        .filter(|(_, &p)| p)
        .map(|((name, &(d, t)), _)| Deviation {
            observable: name.clone(),
            max_abs_deviation: d,
            at_time: t,
        })
        .collect();
    let max_deviation = deviations.iter().map(|d| d.max_abs_deviation).fold(0.0, f64::max);
    Ok(OracleReport {
        n: cfg.n,
        tau: cfg.tau,
        t_max: cfg.t_max,
        samples,
        deviations,
        max_deviation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundReport {
    pub n: usize,
    pub params: ParamsSpec,
    pub energy: f64,
    pub energy_per_site: f64,
    pub sweeps: usize,
    pub gap: f64,
    pub max_bond_dim: usize,
    pub half_chain_vnee: f64,
    /// Entanglement entropy across every bond, left to right.
    pub bond_vnee: Vec<f64>,
}

pub fn ground_report(params: ParamsSpec, n: usize, policy: &TruncationPolicy) -> CliResult<GroundReport> {
    if n < 2 {
        return Err(CliError::Config(format!("N must be at least 2, got {n}")));
    }
    if !(params.j.is_finite() && params.hx.is_finite() && params.hz.is_finite()) {
        return Err(CliError::Config("parameters must be finite".into()));
    }
    let g = ground_state(&params.model(), n, policy)?;
    let mut state = g.state;
    let mut bond_vnee = Vec::with_capacity(n - 1);
    for b in 0..n - 1 {
        state.move_center(b)?;
        bond_vnee.push(vn_entropy(&state.bond_spectrum(b)?));
    }
    Ok(GroundReport {
        n,
        params,
        energy: g.energy,
        energy_per_site: g.energy / n as f64,
        sweeps: g.sweeps,
        gap: g.gap,
        max_bond_dim: state.max_bond_dim(),
        half_chain_vnee: bond_vnee[n / 2 - 1],
        bond_vnee,
    })
}
