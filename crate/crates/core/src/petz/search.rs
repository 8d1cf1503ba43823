use serde::{Deserialize, Serialize};

use super::exact::exact_petz;
use super::pipeline::run_pipeline_canonical;
use super::PetzInstance;
use crate::channels::{search_channel, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{basis, ComplexMatrix, DensityMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    /// 1-based label of the marked element.
    pub marked: usize,
    pub eps: f64,
    pub exact_success: f64,
    pub approx_success: f64,
    /// Uses of the forward channel unitary (one per use of `W̃`).
    pub channel_uses: usize,
    pub total_queries: usize,
    pub sqrt_n: f64,
    pub choi_upper: f64,
}

/// Recovers the marked element of an `N`-element search instance from the oracle output
/// `|1><1|`, exactly and through the pipeline.
pub fn search_demo(n: usize, marked: usize, eps: f64) -> Result<SearchReport> {
    if n < 2 || marked == 0 || marked > n {
        return Err(Error::param(format!("need N ≥ 2 and 1 ≤ m ≤ N, got N = {n}, m = {marked}")));
    }
    let channel = search_channel(n, marked)?;
    let sigma = DensityMatrix::maximally_mixed(n);
    let omega = ComplexMatrix::outer(&basis(2, 1), &basis(2, 1));
    let m = marked - 1;

    let exact = exact_petz(&channel, &sigma)?;
    let exact_success = exact.apply(&omega)?[(m, m)].re;

    let inst = PetzInstance::with_exact_bounds(channel, sigma, eps)?;
    let result = run_pipeline_canonical(&inst)?;
    let out = result.recovered_channel.apply(&omega)?;
    let d = &result.diagnostics;
    Ok(SearchReport {
        n,
        marked,
        eps,
        exact_success,
        approx_success: out[(m, m)].re,
        channel_uses: d.modeled_queries.u_channel,
        total_queries: d.modeled_queries.total,
        sqrt_n: (n as f64).sqrt(),
        choi_upper: d.choi_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_elements() {
        let r = search_demo(2, 2, 0.1).unwrap();
        assert!((r.exact_success - 1.0).abs() < 1e-12);
        assert!(r.approx_success >= 0.9, "{r:?}");
    }

    #[test]
    fn bad_labels() {
        assert!(search_demo(1, 1, 0.1).is_err());
        assert!(search_demo(4, 0, 0.1).is_err());
        assert!(search_demo(4, 5, 0.1).is_err());
    }
}
