use rand::Rng;
use petzsim::channels::*;
use petzsim::linalg::{basis, ComplexMatrix};
use petzsim::petz::exact_petz;
use petzsim::random::{random_channel, random_distribution, random_state, random_stochastic, rng};

#[test]
fn amplitude_damping_excited_state() {
    let out = amplitude_damping(0.3).unwrap().apply(&ComplexMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
    assert!(out.approx_eq(&ComplexMatrix::from_real_diag(&[0.3, 0.7]), 1e-15));
}

#[test]
fn search_channel_adjoint_on_flag() {
    let ch = search_channel(4, 2).unwrap();
    let flag = ComplexMatrix::outer(&basis(2, 1), &basis(2, 1));
    let out = ch.adjoint_apply(&flag).unwrap();
    assert!(out.approx_eq(&ComplexMatrix::outer(&basis(4, 1), &basis(4, 1)), 1e-12));
}

#[test]
fn hilbert_schmidt_adjoint_and_dual_path() {
    let mut r = rng(3);
    for &(din, dout, k) in &[(2, 2, 2), (3, 2, 2), (2, 4, 3)] {
        let ch = random_channel(din, dout, k, &mut r);
        let rho = random_state(din, 0.0, &mut r).into_matrix();
        let omega = petzsim::random::random_hermitian(dout, &mut r);
        let lhs = omega.matmul(&ch.apply(&rho).unwrap()).trace();
        let rhs = ch.adjoint_apply(&omega).unwrap().matmul(&rho).trace();
        assert!((lhs - rhs).norm() <= 1e-9);
        assert!((ch.apply(&rho).unwrap().trace().re - 1.0).abs() <= 1e-9);
        let ext = isometric_extension(&ch).unwrap();
        let via = ext.adjoint_via_dilation(&omega).unwrap();
        assert!(via.approx_eq(&ch.adjoint_apply(&omega).unwrap(), 1e-9));
    }
}

#[test]
fn bayes_consistency_and_petz_agreement() {
    let mut r = rng(4);
    for _ in 0..20 {
        let (nx, ny) = (2 + r.random_range(0..3), 2 + r.random_range(0..3));
        let p: Vec<f64> = random_distribution(nx, 0.5, &mut r);
        let s: f64 = p.iter().sum();
        let p: Vec<f64> = p.iter().map(|x| x / s).collect();
        let w = random_stochastic(nx, ny, &mut r);
        let rev = classical_bayes_reversal(&p, &w).unwrap();
        for x in 0..nx {
            for y in 0..ny {
                assert!((p[x] * w[y][x] - rev.p_y[y] * rev.get(x, y)).abs() <= 1e-12);
            }
        }
        let petz = exact_petz(&classical_channel(&w).unwrap(), &petzsim::linalg::DensityMatrix::diagonal(&p).unwrap()).unwrap();
        for y in 0..ny {
            let out = petz.apply(&ComplexMatrix::unit(ny, ny, y, y)).unwrap();
            for x in 0..nx {
                assert!((out[(x, x)].re - rev.get(x, y)).abs() <= 1e-9);
            }
            assert!(out.hermitian_part().approx_eq(&ComplexMatrix::from_real_diag(&out.real_diag()), 1e-9));
        }
    }
}

#[test]
fn channel_json_roundtrip_and_rejection() {
    let ch = amplitude_damping(0.25).unwrap();
    let back = QuantumChannel::from_json(&ch.to_json().unwrap()).unwrap();
    assert_eq!(back, ch);
    let not_tp = r#"{"dim_in":1,"dim_out":1,"kraus":[[[0.5,0.0]]]}"#;
    assert!(QuantumChannel::from_json(not_tp).is_err());
}
