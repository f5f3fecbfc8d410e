mod common;

use common::{c, rng};
use quench_core::ed::{exact_evolve, exact_ground, exact_rdm, ExactPropagator, StateVector};
use quench_core::linalg::{kron, pauli, ComplexMatrix};
use quench_core::model::{trotter2_layers, ModelParams, TimeMode};
use quench_core::mps::{
    ground_state, ground_state_with, imaginary_time_ground_state, product_mps, DmrgOptions, MatrixProductState,
    TruncationPolicy,
};
use quench_core::qi::{spectrum, vn_entropy};
use quench_core::{Complex64, Error};
use rand::Rng;

const UP: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
const DOWN: [Complex64; 2] = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];

fn plus() -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [c(s, 0.0), c(s, 0.0)]
}

fn paramagnet() -> ModelParams<f64> {
    ModelParams::new(-0.2, -1.0, 0.0)
}

fn ordered() -> ModelParams<f64> {
    ModelParams::new(-1.0, -0.1, -0.5)
}

fn tight() -> TruncationPolicy {
    TruncationPolicy::new(1e-14, 128).unwrap()
}

fn random_spinor(r: &mut impl Rng) -> [Complex64; 2] {
    let a = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
    let b = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

fn random_unitary4(r: &mut impl Rng) -> ComplexMatrix<f64> {
    let m = ComplexMatrix::from_fn(4, 4, |_, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    quench_core::linalg::qr_thin(&m).0
}

fn swap_gate() -> ComplexMatrix<f64> {
    ComplexMatrix::from_real(
        4,
        4,
        &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.],
    )
    .unwrap()
}

fn random_product(n: usize, seed: u64) -> MatrixProductState<f64> {
    let mut r = rng(seed);
    let locals: Vec<_> = (0..n).map(|_| random_spinor(&mut r)).collect();
    product_mps(&locals).unwrap()
}

/// Entangled state built by random unitaries on a brick pattern.
fn scrambled(n: usize, layers: usize, seed: u64) -> MatrixProductState<f64> {
    let mut r = rng(seed);
    let mut s = random_product(n, seed + 1);
    for l in 0..layers {
        for b in (l % 2..n - 1).step_by(2) {
            let u = random_unitary4(&mut r);
            s.apply_two_site_gate(&u, b, &TruncationPolicy::exact()).unwrap();
        }
    }
    s
}

fn dense_state(s: &MatrixProductState<f64>) -> StateVector<f64> {
    StateVector::normalized(s.num_sites(), s.to_dense().unwrap()).unwrap()
}

fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

#[test]
fn all_up_product_state() {
    let s = product_mps(&vec![UP; 10]).unwrap();
    assert_eq!(s.max_bond_dim(), 1);
    for j in 0..10 {
        let rho = s.rdm(&[j]).unwrap();
        let want = ComplexMatrix::from_real(2, 2, &[1., 0., 0., 0.]).unwrap();
        assert!(rho.matrix().max_abs_diff(&want) < 1e-14);
    }
    let e = s.energy(&ModelParams::new(1.0, 0.0, 0.0)).unwrap();
    assert!((e + 9.0).abs() < 1e-12);
}

#[test]
fn plus_product_state_is_unentangled() {
    let s = product_mps(&vec![plus(); 6]).unwrap();
    for j in 0..6 {
        let rho = s.rdm(&[j]).unwrap();
        assert!(vn_entropy(&spectrum(&rho).unwrap()).abs() < 1e-12);
        assert!(s.expect_z(j).unwrap().abs() < 1e-14);
    }
    for b in 0..5 {
        assert_eq!(s.bond_spectrum(b).unwrap().probs().len(), 1);
    }
}

#[test]
fn unnormalized_local_state_is_rejected() {
    let bad = [c(1.0, 0.0), c(0.5, 0.0)];
    let err = product_mps(&[UP, bad, UP]).unwrap_err();
    assert!(matches!(err, Error::Unnormalized { index: 1, .. }));
}

#[test]
fn dense_expansion_matches_kron() {
    let s = product_mps(&[UP, plus(), DOWN]).unwrap();
    let dense = s.to_dense().unwrap();
    let want = common::kron_vec(&common::kron_vec(&UP, &plus()), &DOWN);
    for (a, b) in dense.iter().zip(&want) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn identity_gate_leaves_rdms_unchanged() {
    let mut s = scrambled(8, 4, 3);
    let before: Vec<_> = (0..7).map(|j| s.rdm(&[j, j + 1]).unwrap()).collect();
    for b in 0..7 {
        s.apply_two_site_gate(&ComplexMatrix::identity(4), b, &tight()).unwrap();
    }
    for (j, rho) in before.iter().enumerate() {
        let after = s.rdm(&[j, j + 1]).unwrap();
        assert!(after.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }
}

#[test]
fn unitary_gates_preserve_norm_without_truncation() {
    let mut r = rng(11);
    let mut s = random_product(9, 12);
    for _ in 0..60 {
        let b = r.gen_range(0..8);
        let u = random_unitary4(&mut r);
        let rep = s.apply_two_site_gate(&u, b, &TruncationPolicy::exact()).unwrap();
        assert_eq!(rep.discarded_weight, 0.0);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn swap_exchanges_single_site_marginals() {
    let mut s = random_product(5, 21);
    let r2 = s.rdm(&[2]).unwrap();
    let r3 = s.rdm(&[3]).unwrap();
    s.apply_two_site_gate(&swap_gate(), 2, &TruncationPolicy::exact()).unwrap();
    assert!(s.rdm(&[2]).unwrap().matrix().max_abs_diff(r3.matrix()) < 1e-12);
    assert!(s.rdm(&[3]).unwrap().matrix().max_abs_diff(r2.matrix()) < 1e-12);
}

#[test]
fn gate_matches_dense_application() {
    let mut r = rng(5);
    let mut s = scrambled(6, 3, 40);
    let psi = s.to_dense().unwrap();
    let u = random_unitary4(&mut r);
    s.apply_two_site_gate(&u, 2, &TruncationPolicy::exact()).unwrap();
    let full = kron(&kron(&ComplexMatrix::identity(4), &u), &ComplexMatrix::identity(4));
    let want = full.apply(&psi);
    let got = s.to_dense().unwrap();
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn gate_rejects_bad_bond_and_shape() {
    let mut s = random_product(4, 1);
    let err = s.apply_two_site_gate(&ComplexMatrix::identity(4), 3, &tight()).unwrap_err();
    assert!(matches!(err, Error::OutOfRange { .. }));
    let err = s.apply_two_site_gate(&ComplexMatrix::identity(2), 0, &tight()).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch(_)));
}

#[test]
fn truncation_reports_discarded_weight() {
    let mut s = scrambled(10, 6, 8);
    let before = s.max_bond_dim();
    assert!(before > 2);
    let mut r = rng(9);
    let rep = s
        .apply_two_site_gate(&random_unitary4(&mut r), 4, &TruncationPolicy::new(0.0, 2).unwrap())
        .unwrap();
    assert_eq!(rep.bond_dim, 2);
    assert!(rep.discarded_weight > 0.0 && rep.discarded_weight < 1.0);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-10);

    let loose = TruncationPolicy::new(1e-3, 64).unwrap();
    let rep = s.apply_two_site_gate(&random_unitary4(&mut r), 2, &loose).unwrap();
    assert!(rep.discarded_weight <= 1e-3);
}

#[test]
fn truncation_policy_validation() {
    assert!(TruncationPolicy::new(-1e-3, 10).is_err());
    assert!(TruncationPolicy::new(1e-10, 0).is_err());
    assert!(TruncationPolicy::new(f64::NAN, 4).is_err());
}

#[test]
fn rdm_of_product_state_is_tensor_product() {
    let mut r = rng(31);
    let locals: Vec<_> = (0..7).map(|_| random_spinor(&mut r)).collect();
    let s = product_mps(&locals).unwrap();
    let rho = s.rdm(&[1, 4, 6]).unwrap();
    let v = common::kron_vec(&common::kron_vec(&locals[1], &locals[4]), &locals[6]);
    assert!(rho.matrix().max_abs_diff(&common::projector(&v)) < 1e-13);
}

#[test]
fn rdm_matches_dense_marginal() {
    for seed in 0..4 {
        let s = scrambled(8, 5, 100 + seed);
        let psi = dense_state(&s);
        for sites in [vec![0], vec![3, 4], vec![1, 5, 7], vec![0, 2, 3, 6]] {
            let a = s.rdm(&sites).unwrap();
            let b = exact_rdm(&psi, &sites).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12, "{sites:?}");
        }
    }
}

#[test]
fn bell_pair_rdm() {
    let mut s = product_mps(&[plus(), UP]).unwrap();
    let cnot = ComplexMatrix::from_real(
        4,
        4,
        &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
    )
    .unwrap();
    s.apply_two_site_gate(&cnot, 0, &TruncationPolicy::exact()).unwrap();
    let rho = s.rdm(&[0, 1]).unwrap();
    assert!((rho.purity() - 1.0).abs() < 1e-12);
    let p = s.bond_spectrum(0).unwrap();
    assert!((p.probs()[0] - 0.5).abs() < 1e-12 && (p.probs()[1] - 0.5).abs() < 1e-12);
}

#[test]
fn rdm_nesting_is_consistent() {
    let s = scrambled(9, 6, 77);
    let big = s.rdm(&[1, 2, 4, 6, 7]).unwrap();
    for keep in [vec![2, 6], vec![1, 4, 7], vec![6]] {
        let direct = s.rdm(&keep).unwrap();
        let reduced = big.reduce_to(&keep).unwrap();
        assert!(direct.matrix().max_abs_diff(reduced.matrix()) < 1e-10);
    }
}

#[test]
fn rdm_size_guard_and_site_checks() {
    let s = random_product(10, 2);
    assert!(matches!(s.rdm(&[0, 1, 2, 3, 4, 5, 6]), Err(Error::SizeGuard(_))));
    assert!(s.rdm(&[3, 2]).is_err());
    assert!(s.rdm(&[1, 1]).is_err());
    assert!(s.rdm(&[10]).is_err());
    assert!(s.rdm(&[]).is_err());
}

#[test]
fn bond_spectrum_matches_rdm_entropy() {
    let mut s = scrambled(10, 6, 5);
    for bond in [1, 4, 7] {
        let left: Vec<usize> = if bond < 5 { (0..=bond).collect() } else { (bond + 1..10).collect() };
        let from_rdm = vn_entropy(&spectrum(&s.rdm(&left).unwrap()).unwrap());
        let from_bond = vn_entropy(&s.bond_spectrum(bond).unwrap());
        assert!((from_rdm - from_bond).abs() < 1e-8);
        s.move_center(9 - bond).unwrap();
        assert!((vn_entropy(&s.bond_spectrum(bond).unwrap()) - from_bond).abs() < 1e-10);
    }
}

#[test]
fn bond_spectrum_without_known_center() {
    let s = scrambled(6, 4, 15);
    let raw: Vec<_> = (0..6)
        .map(|j| {
            let t = s.tensor(j);
            let data = (0..t.left_dim())
                .flat_map(|a| (0..2).flat_map(move |p| (0..t.right_dim()).map(move |b| t.get(a, p, b))))
                .collect();
            (t.left_dim(), t.right_dim(), data)
        })
        .collect();
    let u = MatrixProductState::from_tensors(raw).unwrap();
    assert_eq!(u.center(), None);
    for b in 0..5 {
        let x = s.bond_spectrum(b).unwrap();
        let y = u.bond_spectrum(b).unwrap();
        assert_eq!(x.len(), y.len());
        for (p, q) in x.probs().iter().zip(y.probs()) {
            assert!((p - q).abs() < 1e-10);
        }
    }
}

#[test]
fn energy_is_gauge_invariant() {
    let mut s = scrambled(8, 4, 61);
    let p = ModelParams::new(0.7, -0.4, 0.3);
    let e0 = s.energy(&p).unwrap();
    let dense = dense_state(&s).energy(&p).unwrap();
    assert!((e0 - dense).abs() < 1e-12);
    for c in [7, 0, 3] {
        s.move_center(c).unwrap();
        assert!((s.energy(&p).unwrap() - e0).abs() < 1e-12);
    }
}

#[test]
fn classical_eigenstate_is_stationary() {
    let p = ModelParams::new(1.0, 0.0, 0.0);
    let mut s = product_mps(&vec![UP; 10]).unwrap();
    let layers = trotter2_layers(&p, 0.05, 10, TimeMode::Real).unwrap();
    for _ in 0..40 {
        s.tebd2_step(&layers, &tight()).unwrap();
    }
    for j in 0..10 {
        let rho = s.rdm(&[j]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }
    assert_eq!(s.max_bond_dim(), 1);
}

#[test]
fn tebd_quench_tracks_exact_dynamics() {
    let n = 10;
    let g = ground_state(&paramagnet(), n, &tight()).unwrap();
    let (_, psi0) = exact_ground(&paramagnet(), n).unwrap();
    let prop = ExactPropagator::new(&ordered(), n).unwrap();
    let tau = 0.01;
    let layers = trotter2_layers(&ordered(), tau, n, TimeMode::Real).unwrap();
    let mut s = g.state;
    let mut worst = 0.0f64;
    for k in 1..=100 {
        s.tebd2_step(&layers, &tight()).unwrap();
        if k % 10 == 0 {
            let psi = prop.evolve(&psi0, k as f64 * tau).unwrap();
            for j in 0..n {
                worst = worst.max((s.expect_z(j).unwrap() - psi.expect_z(j)).abs());
            }
        }
    }
    assert!(worst < 2e-4, "max sigma-z deviation {worst:e}");
}

fn trotter_error(n: usize, tau: f64, t: f64) -> f64 {
    let post = ordered();
    let mut r = rng(4);
    let locals: Vec<_> = (0..n).map(|_| random_spinor(&mut r)).collect();
    let psi0 = StateVector::product(&locals).unwrap();
    let exact = exact_evolve(&psi0, &post, t).unwrap();
    let mut s = product_mps(&locals).unwrap();
    let layers = trotter2_layers(&post, tau, n, TimeMode::Real).unwrap();
    for _ in 0..(t / tau).round() as usize {
        s.tebd2_step(&layers, &TruncationPolicy::exact()).unwrap();
    }
    let got = s.to_dense().unwrap();
    got.iter().zip(exact.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn trotter_error_is_second_order() {
    let e1 = trotter_error(8, 0.1, 1.0);
    let e2 = trotter_error(8, 0.05, 1.0);
    let ratio = e1 / e2;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn quench_energy_drift_is_small() {
    let n = 40;
    let pol = TruncationPolicy::new(1e-10, 50).unwrap();
    let mut s = ground_state(&paramagnet(), n, &pol).unwrap().state;
    let layers = trotter2_layers(&ordered(), 0.01, n, TimeMode::Real).unwrap();
    let e0 = s.energy(&ordered()).unwrap();
    let mut worst = 0.0f64;
    for k in 1..=1000 {
        s.tebd2_step(&layers, &pol).unwrap();
        if k % 50 == 0 {
            worst = worst.max((s.energy(&ordered()).unwrap() - e0).abs());
        }
    }
    assert!(worst <= 1e-3 * n as f64, "drift {worst:e}");
}

#[test]
fn bulk_sites_are_translation_insensitive() {
    let n = 40;
    let pol = TruncationPolicy::new(1e-10, 50).unwrap();
    let mut s = ground_state(&paramagnet(), n, &pol).unwrap().state;
    let layers = trotter2_layers(&ordered(), 0.01, n, TimeMode::Real).unwrap();
    for _ in 0..200 {
        s.tebd2_step(&layers, &pol).unwrap();
    }
    let entropy = |j: usize| vn_entropy(&spectrum(&s.rdm(&[j]).unwrap()).unwrap());
    let (a, b) = (entropy(19), entropy(22));
    assert!((a - b).abs() < 2e-2, "{a} vs {b}");
}

#[test]
fn dmrg_rejects_bad_input() {
    assert!(matches!(ground_state(&paramagnet(), 1, &tight()), Err(Error::SizeGuard(_))));
    let nan = ModelParams::new(f64::NAN, 1.0, 0.0);
    assert!(ground_state(&nan, 6, &tight()).is_err());
}

#[test]
fn dmrg_decoupled_field() {
    let g = ground_state(&ModelParams::new(0.0f64, -1.0, 0.0), 12, &tight()).unwrap();
    assert!((g.energy + 12.0).abs() < 1e-10);
    for j in 0..12 {
        assert!(g.state.expect_z(j).unwrap().abs() < 1e-8);
    }
}

#[test]
fn dmrg_matches_exact_ground_state() {
    let n = 10;
    let g = ground_state(&paramagnet(), n, &tight()).unwrap();
    let (e, psi) = exact_ground(&paramagnet(), n).unwrap();
    assert!((g.energy - e).abs() < 1e-8 * e.abs());
    assert!((g.state.energy(&paramagnet()).unwrap() - e).abs() < 1e-8 * e.abs());
    let f = fidelity(&g.state.to_dense().unwrap(), psi.amplitudes());
    assert!(f > 1.0 - 1e-6, "fidelity {f}");
}

#[test]
fn dmrg_ordered_phase_lands_in_low_doublet() {
    // Longitudinal field in this phase splits the two symmetry-broken
    // configurations by far less than the DMRG resolution.
    let n = 10;
    let p = ordered();
    let g = ground_state(&p, n, &tight()).unwrap();
    let h = quench_core::model::dense_hamiltonian(&p, n).unwrap();
    let eig = quench_core::linalg::herm_eig(&h).unwrap();
    let e0 = eig.values[eig.values.len() - 1];
    assert!((g.energy - e0).abs() < 1e-8 * e0.abs());
    let psi = g.state.to_dense().unwrap();
    let dim = 1 << n;
    let weight: f64 = (1..=2)
        .map(|k| {
            let col: Vec<Complex64> = (0..dim).map(|i| eig.vectors[(i, dim - k)]).collect();
            fidelity(&col, &psi)
        })
        .sum();
    assert!(weight > 1.0 - 1e-6, "doublet weight {weight}");
}

#[test]
fn dmrg_detects_degeneracy() {
    let err = ground_state(&ModelParams::new(0.0, 0.0, 0.0), 6, &tight()).unwrap_err();
    assert!(matches!(err, Error::DegenerateGroundState { .. }));
}

#[test]
fn dmrg_reports_non_convergence() {
    let opts = DmrgOptions {
        max_sweeps: 1,
        ..DmrgOptions::default()
    };
    let err = ground_state_with(&paramagnet(), 8, &tight(), &opts).unwrap_err();
    assert!(matches!(err, Error::GroundStateNotConverged { .. }));
}

#[test]
fn imaginary_time_agrees_with_dmrg() {
    let n = 10;
    let g = ground_state(&paramagnet(), n, &tight()).unwrap();
    let it = imaginary_time_ground_state(&paramagnet(), n, &tight()).unwrap();
    assert!((it.energy - g.energy).abs() < 1e-7 * g.energy.abs(), "{} vs {}", it.energy, g.energy);
}

#[test]
fn single_precision_engine() {
    let up = [num_complex::Complex32::new(1.0, 0.0), num_complex::Complex32::new(0.0, 0.0)];
    let mut s = product_mps(&vec![up; 6]).unwrap();
    let p = ModelParams::new(-0.2f32, -1.0, 0.0);
    let layers = trotter2_layers(&p, 0.05, 6, TimeMode::Real).unwrap();
    for _ in 0..20 {
        s.tebd2_step(&layers, &TruncationPolicy::new(1e-8, 16).unwrap()).unwrap();
    }
    assert!((s.norm_sqr() - 1.0).abs() < 1e-4);
    let rho = s.rdm(&[2, 3]).unwrap();
    assert!((rho.matrix().trace().re - 1.0).abs() < 1e-5);
    let _ = pauli::z::<f32>();
}

#[test]
fn mid_quench_non_contiguous_rdm_matches_exact() {
    let n = 10;
    let mut s = ground_state(&paramagnet(), n, &tight()).unwrap().state;
    let (_, psi0) = exact_ground(&paramagnet(), n).unwrap();
    let tau = 0.005;
    let layers = trotter2_layers(&ordered(), tau, n, TimeMode::Real).unwrap();
    for _ in 0..100 {
        s.tebd2_step(&layers, &tight()).unwrap();
    }
    let psi = exact_evolve(&psi0, &ordered(), 0.5).unwrap();
    for sites in [[3, 5, 7], [2, 4, 6]] {
        let a = s.rdm(&sites).unwrap();
        let b = exact_rdm(&psi, &sites).unwrap();
        let d = a.matrix().max_abs_diff(b.matrix());
        assert!(d < 1e-6, "{sites:?}: {d:e}");
    }
}
