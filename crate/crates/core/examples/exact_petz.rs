//! Exact Petz map of amplitude damping relative to a mixed state.

use petzsim::channels::{amplitude_damping, KrausMap};
use petzsim::linalg::{choi_matrix, eig_hermitian, DensityMatrix};
use petzsim::petz::exact_petz;

fn main() -> petzsim::Result<()> {
    let channel = amplitude_damping(0.4)?;
    let sigma = DensityMatrix::diagonal(&[0.3, 0.7])?;
    let petz = exact_petz(&channel, &sigma)?;

    let n_sigma = channel.apply(sigma.matrix())?;
    let back = petz.apply(&n_sigma)?;
    println!("|P(N(σ)) - σ|_max = {:.2e}", back.max_abs_diff(sigma.matrix()));
    println!("TP defect = {:.2e}", petz.trace_preservation_defect());
    let min = eig_hermitian(&choi_matrix(&petz))?.eigenvalues.last().copied().unwrap_or(0.0);
    println!("min Choi eigenvalue = {min:.2e}");

    let excited = petzsim::linalg::ComplexMatrix::from_real_diag(&[0.0, 1.0]);
    let out = channel.apply(&excited)?;
    println!("N(|1><1|) diag = {:?}", out.real_diag());
    println!("P(N(|1><1|)) diag = {:?}", petz.apply(&out)?.real_diag());
    Ok(())
}
