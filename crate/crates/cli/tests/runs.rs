use quench_cli::{
    majorization_monotonicity_report, oracle_compare, run_quench, ObservableSpec, ParamsSpec,
    PolicySpec, QuenchConfig,
};

fn paramagnet() -> ParamsSpec {
    ParamsSpec::new(-0.2, -1.0, 0.0)
}

fn ordered() -> ParamsSpec {
    ParamsSpec::new(-1.0, -0.1, -0.5)
}

fn cfg(n: usize, pre: ParamsSpec, post: ParamsSpec, tau: f64, t_max: f64, stride: usize) -> QuenchConfig {
    QuenchConfig {
        n,
        pre,
        post,
        tau,
        t_max,
        policy: PolicySpec {
            cutoff: 1e-15,
            chi_max: 64,
        },
        measure_stride: stride,
        observables: Vec::new(),
        output_path: None,
    }
}

fn small_set(a: usize) -> Vec<ObservableSpec> {
    vec![
        ObservableSpec::VneeHalf,
        ObservableSpec::R2eeHalf,
        ObservableSpec::SeeHalf,
        ObservableSpec::VneeSites { sites: vec![a] },
        ObservableSpec::SeeSites { sites: vec![a, a + 1] },
        ObservableSpec::NegativityPair { a: None, d: 0 },
        ObservableSpec::NegativityPair { a: None, d: 1 },
        ObservableSpec::NegativitySplit { a: None, n: 3 },
        ObservableSpec::ConcurrencePair { a: None, d: 0 },
        ObservableSpec::LevelkSites {
            sites: vec![a, a + 1, a + 2],
        },
        ObservableSpec::Bmi { a: None, d: 0 },
        ObservableSpec::Tmi { a: None },
        ObservableSpec::Energy,
    ]
}

#[test]
fn null_quench_is_stationary() {
    let mut c = cfg(10, paramagnet(), paramagnet(), 0.01, 2.0, 10);
    c.observables = small_set(5);
    let out = run_quench(&c).unwrap();
    assert_eq!(out.series.len(), 21);
    for (name, col) in out.series.columns() {
        let spread = col.iter().map(|v| (v - col[0]).abs()).fold(0.0, f64::max);
        assert!(spread < 2e-4, "{name} moves by {spread:e}");
    }
    c.tau = 0.002;
    c.measure_stride = 50;
    let rep = oracle_compare(&c).unwrap();
    assert_eq!(rep.samples, 21);
    assert!(rep.max_deviation < 1e-6, "{}", rep.max_deviation);
}

#[test]
fn oracle_deviation_shrinks_with_step() {
    let mut coarse = cfg(8, paramagnet(), ordered(), 0.01, 2.0, 20);
    coarse.observables = small_set(4);
    let mut fine = coarse.clone();
    fine.tau = 0.002;
    fine.measure_stride = 100;
    let a = oracle_compare(&coarse).unwrap();
    let b = oracle_compare(&fine).unwrap();
    assert_eq!(a.samples, b.samples);
    assert!(a.max_deviation < 2e-4);
    assert!(b.max_deviation * 10.0 <= a.max_deviation, "{} vs {}", a.max_deviation, b.max_deviation);
}

#[test]
fn oracle_rejects_large_chains() {
    let c = cfg(12, paramagnet(), ordered(), 0.01, 1.0, 10);
    assert_eq!(oracle_compare(&c).unwrap_err().exit_code(), 1);
}

#[test]
fn paramagnetic_start_is_nearly_unentangled() {
    let mut c = cfg(100, paramagnet(), ordered(), 0.01, 0.01, 1);
    c.policy = PolicySpec::default();
    c.observables = vec![ObservableSpec::VneeHalf, ObservableSpec::BondChi];
    let out = run_quench(&c).unwrap();
    let s0 = out.series.column("vnee_half").unwrap()[0];
    assert!((0.0..0.2).contains(&s0), "{s0}");
}

#[test]
fn reverse_quench_majorization_is_nearly_monotone() {
    let mut c = cfg(100, ordered(), paramagnet(), 0.01, 10.0, 1);
    c.policy = PolicySpec::default();
    c.observables = vec![ObservableSpec::LevelkSites { sites: vec![50, 51, 52] }];
    let out = run_quench(&c).unwrap();
    let names: Vec<String> = (1..=8).map(|k| format!("levelk_sites_50_51_52_k{k}")).collect();
    let cols: Vec<&[f64]> = names.iter().map(|n| out.series.column(n).unwrap()).collect();
    let rep = majorization_monotonicity_report(&cols);
    let rise = cols[0].windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
    assert!(rise < 1e-6, "largest eigenvalue rises by {rise:e}");
    assert!(rep.violations > 0);
    assert!(rep.fraction() < 0.25, "{}", rep.fraction());
}
