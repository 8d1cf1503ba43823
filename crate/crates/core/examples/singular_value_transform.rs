//! Inverse square root and square root of a state through its purified block-encoding.

use petzsim::block_encoding::{from_purification, purifier, BlockOperator};
use petzsim::linalg::{inv_sqrt_psd, spectral_norm, sqrt_psd};
use petzsim::qsvt::{inv_sqrt_encoding, sqrt_encoding, SqrtMode};
use petzsim::random::{random_state, rng};

fn main() -> petzsim::Result<()> {
    let rho = random_state(3, 0.4, &mut rng(8));
    let kappa = rho.condition_bound();
    let be = from_purification(&purifier(&rho)?, 3)?;

    for &eps in &[0.2, 0.1, 0.05] {
        let inv = inv_sqrt_encoding(&be, kappa, eps, 2)?;
        let err = spectral_norm(&(&inv.encoding.encoded_block() - &inv_sqrt_psd(rho.matrix())?));
        let sq = sqrt_encoding(&be, kappa, eps, 2, kappa, SqrtMode::ExactSupport)?;
        let err2 = spectral_norm(&(&sq.encoding.encoded_block() - &sqrt_psd(rho.matrix())?));
        println!(
            "eps {eps:<5} ρ^-1/2: degree {:>4} error {err:.2e} (cert {:.2e})   ρ^1/2: degree {:>3} error {err2:.2e} (cert {:.2e})",
            inv.poly.degree, inv.certified_delta, sq.poly.degree, sq.certified_delta
        );
    }
    Ok(())
}
