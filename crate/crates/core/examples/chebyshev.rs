//! Degree and certificates of the square-root approximants over a (θ, δ) grid.

use petzsim::poly::{approx_inv_sqrt, approx_sqrt, approx_sqrt_thresholded, sup_error};

fn main() -> petzsim::Result<()> {
    println!("{:>6} {:>7} {:>8} {:>8} {:>10} {:>10} {:>8}", "theta", "delta", "deg f1", "deg f2", "err f1", "err f2", "C f1");
    for &theta in &[0.5, 0.25, 0.1, 0.05] {
        for &delta in &[0.1, 0.01, 1e-3] {
            let f1 = approx_inv_sqrt(theta, delta)?;
            let f2 = approx_sqrt(theta, delta)?;
            let e1 = sup_error(&f1, |x| 1.0 / x.sqrt(), theta, 1.0, 10_000)?;
            let e2 = sup_error(&f2, f64::sqrt, theta, 1.0, 10_000)?;
            println!(
                "{theta:>6} {delta:>7} {:>8} {:>8} {e1:>10.2e} {e2:>10.2e} {:>8.3}",
                f1.degree,
                f2.degree,
                f1.scaling_constant()
            );
        }
    }
    let t = approx_sqrt_thresholded(0.04, 0.01)?;
    println!("thresholded sqrt θ=0.04 δ=0.01: degree {}, p(0) = {:.2e}", t.degree, t.eval(0.0)?);
    Ok(())
}
