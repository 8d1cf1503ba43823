//! The Petz map of a classical channel is the Bayes reversal.

use petzsim::experiments::bayes_comparison;

fn main() -> petzsim::Result<()> {
    let prior = [0.5, 0.3, 0.2];
    let p_y_given_x = vec![vec![0.8, 0.1, 0.3], vec![0.2, 0.9, 0.7]];
    let (bayes, petz) = bayes_comparison(&prior, &p_y_given_x)?;
    for x in 0..prior.len() {
        for y in 0..p_y_given_x.len() {
            println!("p(x={x}|y={y}) Bayes {:.6}  Petz {:.6}", bayes[x][y], petz[x][y]);
        }
    }
    Ok(())
}
