use petzsim::block_encoding::*;
use petzsim::linalg::{spectral_norm, ComplexMatrix, DensityMatrix};
use petzsim::random::{ginibre, random_state, random_unitary, rng};

#[test]
fn purification_encodings_are_exact() {
    let mut r = rng(5);
    for i in 0..100 {
        let d = 2 + i % 3;
        let rho = random_state(d, if i % 4 == 0 { 0.0 } else { 0.3 }, &mut r);
        let be = from_purification(&purifier(&rho).unwrap(), d).unwrap();
        let block = be.encoded_block();
        assert!(block.max_abs_diff(rho.matrix()) <= 1e-10);
        assert!(block.hermiticity_defect() <= 1e-10);
        assert!(DensityMatrix::with_tolerance(block.hermitian_part(), 1e-10).is_ok());
        assert!(verify(&be, rho.matrix(), 1e-10).unwrap().passed);
    }
}

#[test]
fn random_two_qubit_purifier_gives_marginal() {
    let mut r = rng(6);
    let u = random_unitary(4, &mut r);
    let psi = u.col(0);
    let marginal = ComplexMatrix::outer(&psi, &psi).partial_trace(&[2, 2], 0);
    let be = from_purification(&u, 2).unwrap();
    assert!(be.encoded_block().approx_eq(&marginal, 1e-10));
}

#[test]
fn dilation_reproduces_contractions() {
    let mut r = rng(7);
    for _ in 0..20 {
        let a = ginibre(3, 3, &mut r);
        let c = a.scale_real(0.9 / spectral_norm(&a));
        let be = dilate_contraction(&c).unwrap();
        assert!(be.unitary().unitarity_defect() <= 1e-9);
        assert!(be.encoded_block().approx_eq(&c, 1e-9));
    }
}

#[test]
fn compose_matches_product() {
    let mut r = rng(8);
    let a = ginibre(3, 3, &mut r);
    let b = ginibre(3, 3, &mut r);
    let ea = encode_operator(&a, 1.5 * spectral_norm(&a)).unwrap();
    let eb = encode_operator(&b, 1.5 * spectral_norm(&b)).unwrap();
    let ab = compose(&ea, &eb).unwrap();
    let rep = verify(&ab, &a.matmul(&b), 1e-9).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!((ab.alpha() - ea.alpha() * eb.alpha()).abs() <= 1e-12);
    let with_id = compose(&ea, &BlockEncoding::identity(3)).unwrap();
    assert!(with_id.encoded_block().approx_eq(&a, 1e-9));
}
