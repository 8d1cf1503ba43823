//! Amplification and query scaling over a (d_E, κ) grid.

use petzsim::experiments::{complexity_sweep, SweepParams};

fn main() -> petzsim::Result<()> {
    let params = SweepParams {
        d_e: vec![1, 2, 4],
        kappa: vec![4.0, 8.0, 16.0],
        eps: vec![],
        dim: 2,
        floor: 0.5,
    };
    println!("{:>3} {:>6} {:>6} {:>9} {:>9} {:>10} {:>9}", "d_E", "kappa", "n_rep", "n_rep/√", "queries", "formula", "ratio");
    for r in complexity_sweep(&params, 0.1, 7, 1)? {
        let d = &r.diagnostics;
        println!(
            "{:>3} {:>6} {:>6} {:>9.3} {:>9} {:>10.1} {:>9.3}",
            d.d_e, d.kappa_nsigma, d.n_rep, r.n_rep_ratio, d.modeled_queries.total, d.modeled_queries.formula, d.modeled_queries.ratio
        );
    }
    Ok(())
}
