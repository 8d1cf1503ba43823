use petzsim::channels::{partial_trace_channel, KrausMap};
use petzsim::experiments::instrument_success;
use petzsim::linalg::{basis, c, choi_matrix, ComplexMatrix, DensityMatrix};
use petzsim::petz::{exact_petz, C3};
use petzsim::pgm::*;
use petzsim::random::{random_state, random_unitary, rng};

fn pure(v: &[petzsim::linalg::C64]) -> DensityMatrix {
    DensityMatrix::pure(v).unwrap()
}

fn bloch_projector(theta: f64, phi: f64) -> ComplexMatrix {
    let v = [c((theta / 2.0).cos(), 0.0), c((theta / 2.0).sin() * phi.cos(), (theta / 2.0).sin() * phi.sin())];
    ComplexMatrix::outer(&v, &v)
}

fn brute_force_two_state(p0: f64, r0: &ComplexMatrix, p1: f64, r1: &ComplexMatrix) -> f64 {
    let id = ComplexMatrix::identity(2);
    let mut best = p0.max(p1);
    for i in 0..=200 {
        for j in 0..400 {
            let pr = bloch_projector(std::f64::consts::PI * i as f64 / 200.0, std::f64::consts::TAU * j as f64 / 400.0);
            let q = &id - &pr;
            let s = p0 * pr.matmul(r0).trace().re + p1 * q.matmul(r1).trace().re;
            best = best.max(s);
        }
    }
    best
}

#[test]
fn helstrom_matches_brute_force() {
    let mut r = rng(21);
    for _ in 0..4 {
        let (r0, r1) = (random_state(2, 0.0, &mut r), random_state(2, 0.0, &mut r));
        let h = helstrom_success(0.4, r0.matrix(), 0.6, r1.matrix());
        let b = brute_force_two_state(0.4, r0.matrix(), 0.6, r1.matrix());
        assert!(b <= h + 1e-12);
        assert!(h - b <= 1e-3, "{h} {b}");
    }
}

#[test]
fn pgm_is_at_least_optimal_squared() {
    let mut r = rng(22);
    for _ in 0..10 {
        let states = vec![random_state(2, 0.0, &mut r), random_state(2, 0.0, &mut r)];
        let e = Ensemble::unlabeled(vec![0.5, 0.5], states).unwrap();
        let pgm = pgm_success_probability(&e).unwrap();
        let opt = helstrom_success(0.5, e.states()[0].matrix(), 0.5, e.states()[1].matrix());
        assert!(pgm <= opt + 1e-12);
        assert!(pgm >= opt * opt - 1e-12);
    }
}

#[test]
fn bb84_instrument_marginals_match_povm() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [c(s, 0.0), c(s, 0.0)];
    let minus = [c(s, 0.0), c(-s, 0.0)];
    let e = Ensemble::unlabeled(
        vec![0.25; 4],
        vec![pure(&basis(2, 0)), pure(&basis(2, 1)), pure(&plus), pure(&minus)],
    )
    .unwrap();
    let povm = pgm_povm(&e).unwrap();
    for (el, s) in povm.elements.iter().zip(e.states()) {
        assert!(el.approx_eq(&s.matrix().scale_real(0.5), 1e-12));
    }
    assert!(povm.completeness_defect(&ComplexMatrix::identity(2)) < 1e-12);
    let inst = pretty_good_instrument(&e).unwrap();
    let mut r = rng(23);
    for _ in 0..5 {
        let rho = random_state(2, 0.0, &mut r);
        let marg = label_marginal(&inst.apply(rho.matrix()).unwrap(), 4);
        let probs = povm.probabilities(rho.matrix());
        for (a, b) in marg.iter().zip(&probs) {
            assert!((a - b).abs() < 1e-12);
        }
    }
    assert!((pgm_success_probability(&e).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn relabeling_permutes_elements() {
    let mut r = rng(24);
    let states: Vec<_> = (0..3).map(|_| random_state(3, 0.0, &mut r)).collect();
    let probs = vec![0.2, 0.5, 0.3];
    let e = Ensemble::unlabeled(probs.clone(), states.clone()).unwrap();
    let perm = [2, 0, 1];
    let f = Ensemble::unlabeled(
        perm.iter().map(|&i| probs[i]).collect(),
        perm.iter().map(|&i| states[i].clone()).collect(),
    )
    .unwrap();
    let (pe, pf) = (pgm_povm(&e).unwrap(), pgm_povm(&f).unwrap());
    for (k, &i) in perm.iter().enumerate() {
        assert!(pf.elements[k].approx_eq(&pe.elements[i], 1e-10));
    }
    let (se, sf) = (pgm_success_probability(&e).unwrap(), pgm_success_probability(&f).unwrap());
    assert!((se - sf).abs() < 1e-12);
}

#[test]
fn unitary_conjugation_is_covariant() {
    let mut r = rng(25);
    let states: Vec<_> = (0..3).map(|_| random_state(2, 0.0, &mut r)).collect();
    let u = random_unitary(2, &mut r);
    let probs = vec![0.3, 0.3, 0.4];
    let e = Ensemble::unlabeled(probs.clone(), states.clone()).unwrap();
    let rotated = states
        .iter()
        .map(|s| DensityMatrix::with_tolerance(u.conjugate(s.matrix()).hermitian_part(), 1e-10).unwrap())
        .collect();
    let f = Ensemble::unlabeled(probs, rotated).unwrap();
    let (pe, pf) = (pgm_povm(&e).unwrap(), pgm_povm(&f).unwrap());
    for (a, b) in pe.elements.iter().zip(&pf.elements) {
        assert!(u.conjugate(a).approx_eq(b, 1e-9));
    }
    assert!((pgm_success_probability(&e).unwrap() - pgm_success_probability(&f).unwrap()).abs() < 1e-10);
}

#[test]
fn pipeline_identifies_orthogonal_states() {
    let eps = 0.05;
    let e = Ensemble::unlabeled(vec![0.5, 0.5], vec![pure(&basis(2, 0)), pure(&basis(2, 1))]).unwrap();
    let res = pgm_via_petz(&e, eps).unwrap();
    assert!(res.diagnostics.within_c3);
    let success = instrument_success(&e, &res.recovered_channel).unwrap();
    assert!(success >= 1.0 - C3 * eps, "{success}");
    assert!((instrument_success(&e, &res.exact).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn pipeline_on_identical_states_returns_prior() {
    let eps = 0.1;
    let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
    let probs = vec![0.3, 0.7];
    let e = Ensemble::unlabeled(probs.clone(), vec![rho.clone(), rho.clone()]).unwrap();
    let res = pgm_via_petz(&e, eps).unwrap();
    let marg = label_marginal(&res.recovered_channel.apply(rho.matrix()).unwrap(), 2);
    for (a, b) in marg.iter().zip(&probs) {
        assert!((a - b).abs() <= C3 * eps, "{marg:?}");
    }
}

#[test]
fn pipeline_on_random_pair_is_within_c3() {
    let mut r = rng(26);
    let e = Ensemble::unlabeled(vec![0.45, 0.55], vec![random_state(2, 0.3, &mut r), random_state(2, 0.3, &mut r)]).unwrap();
    let res = pgm_via_petz(&e, 0.1).unwrap();
    assert!(res.diagnostics.choi_upper <= C3 * 0.1);
    let petz = exact_petz(&partial_trace_channel(2, 2).unwrap(), &e.cq_state()).unwrap();
    assert!(choi_matrix(&petz).approx_eq(&choi_matrix(&pretty_good_instrument(&e).unwrap()), 1e-10));
}
