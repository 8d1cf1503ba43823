//! Oblivious amplification of W̃: measured amplitude, rounds and n_rep as κ grows.

use petzsim::channels::unitary_channel;
use petzsim::linalg::DensityMatrix;
use petzsim::petz::{amplify, build_w_tilde, canonical_purifiers, PetzInstance};
use petzsim::random::{random_unitary, rng};

fn main() -> petzsim::Result<()> {
    let u = random_unitary(2, &mut rng(1));
    println!("{:>6} {:>8} {:>6} {:>6} {:>10}", "kappa", "gamma", "k", "n_rep", "n_rep/√κ");
    for &kappa in &[2.0, 4.0, 8.0, 16.0, 32.0] {
        let sigma = DensityMatrix::diagonal(&[1.0 - 1.0 / kappa, 1.0 / kappa])?;
        let inst = PetzInstance::with_exact_bounds(unitary_channel(&u)?, sigma, 0.1)?;
        let (us, un) = canonical_purifiers(&inst)?;
        let w = build_w_tilde(&inst, &us, &un)?;
        let amp = amplify(&w.circuit)?;
        println!(
            "{kappa:>6} {:>8.4} {:>6} {:>6} {:>10.3}",
            amp.gamma,
            amp.rounds,
            amp.n_rep,
            amp.n_rep as f64 / kappa.sqrt()
        );
    }
    Ok(())
}
