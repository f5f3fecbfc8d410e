use quench_core::qi::majorizes_sums;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub time: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Time span covered by the default extrema window.
pub const WINDOW_SPAN: f64 = 0.2;

/// Smallest odd window (at least 3) spanning [`WINDOW_SPAN`] at sample spacing `dt`.
pub fn default_window(dt: f64) -> usize {
    let w = (WINDOW_SPAN / dt).round().max(2.0) as usize;
    if w % 2 == 0 {
        w + 1
    } else {
        w
    }
}

/// Typical spacing of a sample grid.
pub fn sample_spacing(times: &[f64]) -> f64 {
    if times.len() < 2 {
        return f64::NAN;
    }
    let mut d: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    d.sort_by(f64::total_cmp);
    d[d.len() / 2]
}

/// Points that are the strict maximum or minimum of their centred window.
/// Same-kind neighbours closer than `window · Δt` are merged, keeping the
/// more extreme one.
pub fn detect_extrema(times: &[f64], values: &[f64], window: usize) -> CliResult<Vec<Extremum>> {
    if window < 3 || window % 2 == 0 {
        return Err(CliError::Config(format!("extrema window must be odd and at least 3, got {window}")));
    }
    if times.len() != values.len() {
        return Err(CliError::Contract("times and values differ in length".into()));
    }
    if values.len() < window {
        return Err(CliError::Contract(format!(
            "series of {} samples is shorter than the window {window}",
            values.len()
        )));
    }
    let half = window / 2;
    let merge_span = window as f64 * sample_spacing(times);
    let mut found: Vec<Extremum> = Vec::new();
    for i in half..values.len() - half {
        let v = values[i];
        if !v.is_finite() {
            continue;
        }
        let others = (i - half..=i + half).filter(|&j| j != i).map(|j| values[j]);
        let kind = if others.clone().all(|w| v > w) {
            ExtremumKind::Max
        } else if others.clone().all(|w| v < w) {
            ExtremumKind::Min
        } else {
            continue;
        };
        let e = Extremum {
            time: times[i],
            value: v,
            kind,
        };
        let k = found.len();
        // an opposite extremum squeezed between two merged ones goes with them
        if k >= 2 && found[k - 1].kind != kind && found[k - 2].kind == kind && e.time - found[k - 2].time < merge_span {
            found.pop();
        }
        match found.last_mut() {
            Some(last) if last.kind == kind && e.time - last.time < merge_span => {
                let better = match kind {
                    ExtremumKind::Max => e.value > last.value,
                    ExtremumKind::Min => e.value < last.value,
                };
                if better {
                    *last = e;
                }
            }
            _ => found.push(e),
        }
    }
    Ok(found)
}

/// Spacings between consecutive extrema of one kind.
pub fn spacings(extrema: &[Extremum], kind: ExtremumKind) -> Vec<f64> {
    let t: Vec<f64> = extrema.iter().filter(|e| e.kind == kind).map(|e| e.time).collect();
    t.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Spacings between each minimum and the maximum that follows it.
pub fn min_to_max_spacings(extrema: &[Extremum]) -> Vec<f64> {
    extrema
        .windows(2)
        .filter(|w| w[0].kind == ExtremumKind::Min && w[1].kind == ExtremumKind::Max)
        .map(|w| w[1].time - w[0].time)
        .collect()
}

/// Mean and population standard deviation; `None` for an empty slice.
pub fn mean_std(x: &[f64]) -> Option<(f64, f64)> {
    if x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|y| (y - m).powi(2)).sum::<f64>() / n;
    Some((m, v.sqrt()))
}

/// Maximal runs with `|value| ≤ eps` lasting at least two samples.
/// A non-positive `eps` only matches exact zeros.
pub fn detect_zero_intervals(times: &[f64], values: &[f64], eps: f64) -> Vec<(f64, f64)> {
    let eps = eps.max(0.0);
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=values.len() {
        let zero = i < values.len() && values[i].abs() <= eps;
        match (zero, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= 2 {
                    out.push((times[s], times[i - 1]));
                }
                start = None;
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorizationReport {
    /// `violations[i]` is set when the spectrum at sample `i + 1` is not
    /// majorized by the one at sample `i`.
    pub flags: Vec<bool>,
    pub violations: usize,
}

impl MajorizationReport {
    pub fn fraction(&self) -> f64 {
        if self.flags.is_empty() {
            0.0
        } else {
            self.violations as f64 / self.flags.len() as f64
        }
    }
}

/// Monotonicity of the mixing order along a series of level-k sums;
/// `columns[k-1]` holds the level-k sums.
pub fn majorization_monotonicity_report(columns: &[&[f64]]) -> MajorizationReport {
    let len = columns.iter().map(|c| c.len()).min().unwrap_or(0);
    let sums = |i: usize| -> Vec<f64> { columns.iter().map(|c| c[i]).collect() };
    let flags: Vec<bool> = (1..len).map(|i| !majorizes_sums(&sums(i - 1), &sums(i))).collect();
    let violations = flags.iter().filter(|&&f| f).count();
    MajorizationReport { flags, violations }
}

/// Groups `<base>_k1 … <base>_kK` columns of a level-k observable.
pub fn levelk_groups(series: &TimeSeries) -> Vec<(String, Vec<String>)> {
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    for name in series.names() {
        let Some((base, k)) = name.rsplit_once("_k") else { continue };
        if !base.starts_with("levelk") || k.parse::<usize>().is_err() {
            continue;
        }
        match groups.iter_mut().find(|(b, _)| b == base) {
            Some((_, cols)) => cols.push(name.clone()),
            None => groups.push((base.to_string(), vec![name.clone()])),
        }
    }
    for (_, cols) in groups.iter_mut() {
        cols.sort_by_key(|c| c.rsplit_once("_k").and_then(|(_, k)| k.parse::<usize>().ok()));
    }
    groups
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableReport {
    pub observable: String,
    pub period_mean: Option<f64>,
    pub period_std: Option<f64>,
    pub zero_intervals: Vec<(f64, f64)>,
    pub majorization_violations: Option<usize>,
    pub extrema: Vec<Extremum>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub window: usize,
    pub epsilon: f64,
    pub observables: Vec<ObservableReport>,
}

/// Extrema, minima spacing and zero intervals for every column, plus a
/// majorization report for each level-k group.
pub fn analyze(series: &TimeSeries, window: Option<usize>, eps: f64) -> CliResult<AnalysisReport> {
    if !(eps > 0.0) {
        return Err(CliError::Config(format!("epsilon must be positive, got {eps}")));
    }
    let times = series.times();
    let window = window.unwrap_or_else(|| default_window(sample_spacing(times)));
    let mut observables = Vec::new();
    for (name, vals) in series.columns() {
        let extrema = if vals.len() >= window {
            detect_extrema(times, vals, window)?
        } else {
            Vec::new()
        };
        let period = mean_std(&spacings(&extrema, ExtremumKind::Min));
        observables.push(ObservableReport {
            observable: name.to_string(),
            period_mean: period.map(|p| p.0),
            period_std: period.map(|p| p.1),
            zero_intervals: detect_zero_intervals(times, vals, eps),
            majorization_violations: None,
            extrema,
        });
    }
    for (base, cols) in levelk_groups(series) {
        let data: Vec<&[f64]> = cols.iter().map(|c| series.column(c).expect("grouped from names")).collect();
        let rep = majorization_monotonicity_report(&data);
        observables.push(ObservableReport {
            observable: base,
            period_mean: None,
            period_std: None,
            zero_intervals: Vec::new(),
            majorization_violations: Some(rep.violations),
            extrema: Vec::new(),
        });
    }
    Ok(AnalysisReport {
        window,
        epsilon: eps,
        observables,
    })
}
