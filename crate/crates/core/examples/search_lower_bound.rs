//! Recovering the marked element of a search oracle with the exact and approximate Petz map.

use petzsim::petz::search_demo;

fn main() -> petzsim::Result<()> {
    println!("{:>3} {:>6} {:>8} {:>8} {:>9} {:>8}", "N", "marked", "exact", "approx", "queries", "√N");
    for &n in &[2, 4, 8, 16] {
        let r = search_demo(n, n / 2 + 1, 0.1)?;
        println!(
            "{n:>3} {:>6} {:>8.5} {:>8.5} {:>9} {:>8.3}",
            r.marked, r.exact_success, r.approx_success, r.total_queries, r.sqrt_n
        );
    }
    Ok(())
}
