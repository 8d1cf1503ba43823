//! Block-encodings from purifications and from operators, composed and tensored.

use petzsim::block_encoding::{compose, encode_operator, from_purification, purifier, tensor, verify, BlockOperator};
use petzsim::linalg::{spectral_norm, DensityMatrix};
use petzsim::random::{ginibre, random_state, rng};

fn main() -> petzsim::Result<()> {
    let mut r = rng(3);
    let rho = random_state(3, 0.2, &mut r);
    let be = from_purification(&purifier(&rho)?, 3)?;
    let report = verify(&be, rho.matrix(), 1e-12)?;
    println!("ρ from its purifier: dim {}, defect {:.2e}, queries {}", be.dim(), report.defect, be.query_cost());

    let a = ginibre(3, 3, &mut r);
    let alpha = 1.25 * spectral_norm(&a);
    let ea = encode_operator(&a, alpha)?;
    println!("A / α: defect {:.2e}", verify(&ea, &a, 1e-12)?.defect);

    let prod = compose(&ea, &be)?;
    println!("A·ρ: alpha {:.3}, defect {:.2e}", prod.alpha(), verify(&prod, &a.matmul(rho.matrix()), 1e-10)?.defect);

    let half = DensityMatrix::maximally_mixed(2);
    let t = tensor(&be, &from_purification(&purifier(&half)?, 2)?)?;
    println!("ρ ⊗ I/2: defect {:.2e}", verify(&t, &rho.kron(&half).into_matrix(), 1e-10)?.defect);
    Ok(())
}
