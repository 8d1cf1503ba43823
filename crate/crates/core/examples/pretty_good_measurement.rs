//! PGM against the Helstrom optimum for two pure qubit states, and the instrument via the pipeline.

use std::f64::consts::PI;

use petzsim::experiments::instrument_success;
use petzsim::linalg::{c, DensityMatrix};
use petzsim::pgm::{helstrom_success, pgm_success_probability, pgm_via_petz, Ensemble};

fn main() -> petzsim::Result<()> {
    println!("{:>6} {:>8} {:>8} {:>10}", "angle", "PGM", "optimum", "optimum²");
    for k in 1..=6 {
        let t = k as f64 * PI / 24.0;
        let a = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)])?;
        let b = DensityMatrix::pure(&[c(t.cos(), 0.0), c(t.sin(), 0.0)])?;
        let e = Ensemble::unlabeled(vec![0.5, 0.5], vec![a.clone(), b.clone()])?;
        let pgm = pgm_success_probability(&e)?;
        let opt = helstrom_success(0.5, a.matrix(), 0.5, b.matrix());
        println!("{t:>6.3} {pgm:>8.5} {opt:>8.5} {:>10.5}", opt * opt);
    }

    let e = Ensemble::unlabeled(
        vec![0.4, 0.6],
        vec![DensityMatrix::diagonal(&[0.9, 0.1])?, DensityMatrix::diagonal(&[0.2, 0.8])?],
    )?;
    let res = pgm_via_petz(&e, 0.05)?;
    println!(
        "pipeline instrument: label success {:.5} (PGM {:.5}), Choi bound {:.2e}",
        instrument_success(&e, &res.recovered_channel)?,
        pgm_success_probability(&e)?,
        res.diagnostics.choi_upper
    );
    Ok(())
}
