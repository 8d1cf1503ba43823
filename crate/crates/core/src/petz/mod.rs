//! The Petz recovery map: exact oracle, the block-encoded isometry `W̃`, oblivious amplitude
//! amplification and the end-to-end pipeline.

mod amplify;
mod exact;
mod pipeline;
mod search;
mod w_tilde;

pub use amplify::{amplify, Amplified, SPREAD_TOL};
pub use exact::{exact_petz, ideal_isometric_extension, ideal_isometric_extension_via_dilation};
pub use pipeline::{
    canonical_purifiers, run_pipeline, run_pipeline_canonical, PetzResult, PipelineDiagnostics,
    QueryCounts, C3,
};
pub use search::{search_demo, SearchReport};
pub use w_tilde::{
    approximate_isometric_extension, build_w_tilde, error_budget, maximally_entangled_preparation,
    WTilde,
};

use serde::{Deserialize, Serialize};

use crate::channels::{KrausMap, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{condition_bound, DensityMatrix};
use crate::qsvt::SqrtMode;

/// Relative slack allowed when comparing a supplied condition bound with the true one.
const KAPPA_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetzInstance {
    pub channel: QuantumChannel,
    pub sigma: DensityMatrix,
    pub eps: f64,
    pub kappa_sigma: f64,
    pub kappa_nsigma: f64,
    pub sqrt_mode: SqrtMode,
}

impl PetzInstance {
    pub fn new(
        channel: QuantumChannel,
        sigma: DensityMatrix,
        eps: f64,
        kappa_sigma: f64,
        kappa_nsigma: f64,
        sqrt_mode: SqrtMode,
    ) -> Result<Self> {
        if channel.dim_in() != sigma.dim() {
            return Err(Error::dims(format!(
                "channel input dimension {} does not match state dimension {}",
                channel.dim_in(),
                sigma.dim()
            )));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param(format!("eps = {eps} must lie in (0, 1)")));
        }
        let true_sigma = sigma.condition_bound();
        let n_sigma = channel.apply(sigma.matrix())?;
        let true_nsigma = condition_bound(&n_sigma)?;
        for (name, given, actual) in [
            ("kappa_sigma", kappa_sigma, true_sigma),
            ("kappa_nsigma", kappa_nsigma, true_nsigma),
        ] {
            if !(given >= actual * (1.0 - KAPPA_SLACK)) {
                return Err(Error::cert(
                    "condition bounds",
                    format!("{name} = {given} is below the true condition bound {actual}"),
                ));
            }
        }
        Ok(Self {
            channel,
            sigma,
            eps,
            kappa_sigma,
            kappa_nsigma,
            sqrt_mode,
        })
    }

    /// Instance with the exact condition bounds of `σ` and `𝒩(σ)`.
    pub fn with_exact_bounds(channel: QuantumChannel, sigma: DensityMatrix, eps: f64) -> Result<Self> {
        let ks = sigma.condition_bound();
        let kn = condition_bound(&channel.apply(sigma.matrix())?)?;
        Self::new(channel, sigma, eps, ks, kn, SqrtMode::ExactSupport)
    }

    pub fn with_sqrt_mode(mut self, mode: SqrtMode) -> Self {
        self.sqrt_mode = mode;
        self
    }

    pub fn d_a(&self) -> usize {
        self.channel.dim_in()
    }

    pub fn d_b(&self) -> usize {
        self.channel.dim_out()
    }

    /// Environment dimension: the number of Kraus operators of the channel.
    pub fn d_e(&self) -> usize {
        self.channel.kraus_count()
    }

    pub fn n_sigma(&self) -> DensityMatrix {
        let m = self.channel.apply(self.sigma.matrix()).expect("dimensions checked");
        DensityMatrix::with_tolerance(m.hermitian_part(), 1e-8).expect("channel output is a state")
    }
}
