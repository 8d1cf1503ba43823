use petzsim::channels::{binary_symmetric, classical_bayes_reversal, classical_channel, dephasing, search_channel, KrausMap};
use petzsim::linalg::{basis, ComplexMatrix, DensityMatrix};
use petzsim::petz::*;
use petzsim::qsvt::SqrtMode;
use petzsim::random::{random_channel, random_state, random_state_with_spectrum, rng};

fn random_instance(seed: u64, eps: f64) -> PetzInstance {
    let mut r = rng(seed);
    let d_a = 2 + (seed as usize % 3);
    let d_b = 2 + (seed as usize / 3 % 2);
    let d_e = d_a.div_ceil(d_b).max(1 + seed as usize % 4);
    let ch = random_channel(d_a, d_b, d_e, &mut r);
    let sigma = random_state(d_a, 0.5, &mut r);
    PetzInstance::with_exact_bounds(ch, sigma, eps).unwrap()
}

#[test]
fn random_instances_respect_budget_and_c3() {
    for seed in 0..10 {
        let inst = random_instance(seed, 0.1);
        let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
        assert!(d.isometry_defect <= d.error_budget, "{seed}: {d:?}");
        assert!(d.error_budget <= d.error_budget_certified + 1e-12);
        assert!(d.within_c3, "{seed}: {d:?}");
        let p = d.p_success_expected;
        assert!(d.p_success_measured >= p / 4.0 && d.p_success_measured <= 4.0 * p);
        assert!(d.tp_defect <= 2.0 * d.choi_upper + 1e-9);
    }
}

#[test]
fn bsc_recovery_matches_bayes() {
    let w = binary_symmetric(0.1);
    let prior = [0.7, 0.3];
    let inst = PetzInstance::with_exact_bounds(
        classical_channel(&w).unwrap(),
        DensityMatrix::diagonal(&prior).unwrap(),
        0.05,
    )
    .unwrap();
    let res = run_pipeline_canonical(&inst).unwrap();
    let rev = classical_bayes_reversal(&prior, &w).unwrap();
    for y in 0..2 {
        let out = res.recovered_channel.apply(&ComplexMatrix::unit(2, 2, y, y)).unwrap();
        for x in 0..2 {
            assert!((out[(x, x)].re - rev.get(x, y)).abs() <= C3 * 0.05);
        }
    }
}

#[test]
fn n_rep_tracks_sqrt_d_e_kappa() {
    let mut r = rng(9);
    let ch = random_channel(2, 2, 2, &mut r);
    let sigma = random_state(2, 0.5, &mut r);
    let exact = PetzInstance::with_exact_bounds(ch, sigma, 0.1).unwrap();
    let inst = PetzInstance::new(exact.channel, exact.sigma, 0.1, exact.kappa_sigma, 4.0, SqrtMode::ExactSupport).unwrap();
    let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
    let ratio = d.n_rep as f64 / 8f64.sqrt();
    assert!((1.0..=10.0).contains(&ratio), "{ratio}");
}

#[test]
fn certified_budget_is_order_eps() {
    let mut r = rng(10);
    let ch = random_channel(2, 2, 2, &mut r);
    let sigma = random_state(2, 0.5, &mut r);
    let exact = PetzInstance::with_exact_bounds(ch, sigma, 0.1).unwrap();
    let inst = PetzInstance::new(exact.channel, exact.sigma, 0.1, exact.kappa_sigma, 4.0, SqrtMode::ExactSupport).unwrap();
    let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
    assert!(d.error_budget_certified <= 3.0 * 0.1, "{}", d.error_budget_certified);
    assert_eq!(error_budget(&inst, 0.0, 0.0), 0.0);
    assert!((error_budget(&inst, 0.01, 0.01) - (0.01 * 8f64.sqrt() + 2.0 * 2f64.sqrt() * 0.01)).abs() < 1e-15);
}

#[test]
fn search_examples() {
    let exact = exact_petz(&search_channel(4, 2).unwrap(), &DensityMatrix::maximally_mixed(4)).unwrap();
    let out = exact.apply(&ComplexMatrix::outer(&basis(2, 1), &basis(2, 1))).unwrap();
    assert!(out.approx_eq(&ComplexMatrix::outer(&basis(4, 1), &basis(4, 1)), 1e-12));
    let r = search_demo(8, 3, 0.1).unwrap();
    assert!((r.exact_success - 1.0).abs() <= 1e-9);
    assert!(r.approx_success >= 0.9, "{r:?}");
}

#[test]
fn rank_deficient_sigma() {
    let mut r = rng(12);
    let sigma = random_state_with_spectrum(&[0.6, 0.4, 0.0], &mut r);
    let ch = random_channel(3, 2, 2, &mut r);
    let inst = PetzInstance::with_exact_bounds(ch, sigma, 0.1).unwrap();
    let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
    assert!(d.isometry_defect <= d.error_budget, "{d:?}");
    assert!(d.within_c3, "{d:?}");
}

#[test]
fn rank_deficient_output() {
    let inst = PetzInstance::with_exact_bounds(dephasing(0.2).unwrap(), DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(), 0.1)
        .unwrap();
    let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
    assert!(!d.n_sigma_full_rank);
    assert!(d.within_c3, "{d:?}");
    let v = ideal_isometric_extension(&inst).unwrap();
    assert!(v.adjoint_matmul(&v).approx_eq(&ComplexMatrix::from_real_diag(&[1.0, 0.0]), 1e-8));
}

#[test]
fn thresholded_mode() {
    let mut r = rng(14);
    let ch = random_channel(2, 2, 2, &mut r);
    let sigma = random_state(2, 0.5, &mut r);
    let inst = PetzInstance::with_exact_bounds(ch, sigma, 0.4).unwrap().with_sqrt_mode(SqrtMode::Thresholded);
    let d = run_pipeline_canonical(&inst).unwrap().diagnostics;
    assert!(d.isometry_defect <= d.error_budget, "{d:?}");
    assert!(d.within_c3, "{d:?}");
}

#[test]
fn unitary_w_tilde_approximates_adjoint() {
    let mut r = rng(13);
    let u = petzsim::random::random_unitary(2, &mut r);
    let inst = PetzInstance::with_exact_bounds(
        petzsim::channels::unitary_channel(&u).unwrap(),
        DensityMatrix::maximally_mixed(2),
        0.05,
    )
    .unwrap();
    let (us, un) = canonical_purifiers(&inst).unwrap();
    let w = build_w_tilde(&inst, &us, &un).unwrap();
    let v = w.approximate_isometry();
    assert!(petzsim::linalg::spectral_norm(&(&v - &u.adjoint())) <= w.circuit.delta);
}
