use serde::{Deserialize, Serialize};

use super::amplify::amplify;
use super::exact::{exact_petz, ideal_isometric_extension};
use super::w_tilde::{build_w_tilde, error_budget};
use super::PetzInstance;
use crate::block_encoding::{purifier, BlockOperator};
use crate::channels::{CpMap, KrausMap};
use crate::error::Result;
use crate::linalg::{
    diamond_distance_bounds, inv_sqrt_psd, spectral_norm, sqrt_psd, support_projector,
    ComplexMatrix,
};

/// End-to-end constant: the Choi trace-norm distance between the pipeline output and the
/// exact Petz map is expected to stay below `C3·ε`.
pub const C3: f64 = 8.0;

/// Modeled unitary uses. Purified-access encodings cost two uses of their purifier each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub u_nsigma: usize,
    pub u_sigma: usize,
    pub u_channel: usize,
    pub u_phi: usize,
    pub w_tilde_uses: usize,
    pub total: usize,
    /// `√(d_E κ_𝒩σ)·(κ_𝒩σ Q_𝒩σ + Q_𝒩 + Q_σ·min(κ_σ, d_E κ_𝒩σ/ε²))` with unit-cost queries
    /// `Q_𝒩 = 1` and `Q_σ = Q_𝒩σ = 2`.
    pub formula: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineDiagnostics {
    pub d_a: usize,
    pub d_b: usize,
    pub d_e: usize,
    pub eps: f64,
    pub kappa_sigma: f64,
    pub kappa_nsigma: f64,
    /// Probability of the all-zeros ancilla outcome for a maximally mixed input.
    pub p_success_measured: f64,
    /// `1/(16 d_E κ_𝒩σ)`
    pub p_success_expected: f64,
    pub n_rep: usize,
    pub rounds: usize,
    pub gamma: f64,
    pub damping: f64,
    pub singular_value_spread: f64,
    /// `1/(4√(d_E κ_𝒩σ))`
    pub w_tilde_subnorm: f64,
    /// `‖raw block‖ / ‖Ṽ^𝒫‖`
    pub w_tilde_subnorm_measured: f64,
    /// `‖Ṽ^𝒫 - V^𝒫‖`
    pub isometry_defect: f64,
    /// Error budget from the measured polynomial errors.
    pub error_budget: f64,
    /// Error budget from the polynomial certificates.
    pub error_budget_certified: f64,
    pub sqrt_error: f64,
    pub inv_sqrt_error: f64,
    pub degrees: [usize; 2],
    /// `‖amplified block - V^𝒫‖`
    pub amplified_defect: f64,
    /// `‖Σ K†K - Π_supp 𝒩(σ)‖_F` for the recovered map.
    pub tp_defect: f64,
    pub n_sigma_full_rank: bool,
    pub choi_lower: f64,
    pub choi_upper: f64,
    pub c3: f64,
    pub within_c3: bool,
    pub modeled_queries: QueryCounts,
}

#[derive(Clone, Debug)]
pub struct PetzResult {
    /// Kraus operators are the `Ẽ` blocks of the amplified isometry.
    pub recovered_channel: CpMap,
    pub exact: CpMap,
    pub diagnostics: PipelineDiagnostics,
}

/// Deterministic purifiers of `σ` and `𝒩(σ)`.
pub fn canonical_purifiers(inst: &PetzInstance) -> Result<(ComplexMatrix, ComplexMatrix)> {
    Ok((purifier(&inst.sigma)?, purifier(&inst.n_sigma())?))
}

pub fn run_pipeline_canonical(inst: &PetzInstance) -> Result<PetzResult> {
    let (us, un) = canonical_purifiers(inst)?;
    run_pipeline(inst, &us, &un)
}

fn query_counts(inst: &PetzInstance, per_w: [usize; 4], n_rep: usize) -> QueryCounts {
    let [u_nsigma, u_sigma, u_channel, u_phi] = per_w.map(|q| q * n_rep);
    let total = u_nsigma + u_sigma + u_channel + u_phi;
    let (d_e, kn, ks, eps) = (inst.d_e() as f64, inst.kappa_nsigma, inst.kappa_sigma, inst.eps);
    let formula = (d_e * kn).sqrt() * (kn * 2.0 + 1.0 + 2.0 * ks.min(d_e * kn / (eps * eps)));
    QueryCounts {
        u_nsigma,
        u_sigma,
        u_channel,
        u_phi,
        w_tilde_uses: n_rep,
        total,
        formula,
        ratio: total as f64 / formula,
    }
}

/// Builds `W̃`, amplifies it and reads the recovered channel off the amplified block.
pub fn run_pipeline(
    inst: &PetzInstance,
    u_sigma: &ComplexMatrix,
    u_nsigma: &ComplexMatrix,
) -> Result<PetzResult> {
    let (d_a, d_b, d_e) = (inst.d_a(), inst.d_b(), inst.d_e());
    let w = build_w_tilde(inst, u_sigma, u_nsigma)?;
    let raw = w.circuit.raw_block();
    let v_tilde = raw.scale_real(w.circuit.alpha());
    let v = ideal_isometric_extension(inst)?;

    let n_sigma = inst.n_sigma();
    let sqrt_error = spectral_norm(&(&w.f2.encoding.encoded_block() - &sqrt_psd(inst.sigma.matrix())?));
    let inv_sqrt_error =
        spectral_norm(&(&w.f1.encoding.encoded_block() - &inv_sqrt_psd(n_sigma.matrix())?));

    let amp = amplify(&w.circuit)?;
    let kraus: Vec<ComplexMatrix> = (0..d_e)
        .map(|e| amp.block.submatrix(e * d_a, 0, d_a, d_b))
        .collect();
    let recovered = CpMap::new(d_b, d_a, kraus)?;
    let exact = exact_petz(&inst.channel, &inst.sigma)?;
    let (choi_lower, choi_upper) = diamond_distance_bounds(&recovered, &exact)?;
    let support = support_projector(n_sigma.matrix())?;

    let per_w = [w.f1.modeled_queries, w.f2.modeled_queries, 1, 1];
    let diagnostics = PipelineDiagnostics {
        d_a,
        d_b,
        d_e,
        eps: inst.eps,
        kappa_sigma: inst.kappa_sigma,
        kappa_nsigma: inst.kappa_nsigma,
        p_success_measured: raw.frobenius_norm().powi(2) / d_b as f64,
        p_success_expected: 1.0 / (16.0 * d_e as f64 * inst.kappa_nsigma),
        n_rep: amp.n_rep,
        rounds: amp.rounds,
        gamma: amp.gamma,
        damping: amp.damping,
        singular_value_spread: amp.spread,
        w_tilde_subnorm: 1.0 / w.circuit.alpha(),
        w_tilde_subnorm_measured: spectral_norm(&raw) / spectral_norm(&v_tilde),
        isometry_defect: spectral_norm(&(&v_tilde - &v)),
        error_budget: error_budget(inst, sqrt_error, inv_sqrt_error),
        error_budget_certified: w.circuit.delta(),
        sqrt_error,
        inv_sqrt_error,
        degrees: [w.f1.poly.degree, w.f2.poly.degree],
        amplified_defect: spectral_norm(&(&amp.block - &v)),
        tp_defect: (&recovered.gram() - &support).frobenius_norm(),
        n_sigma_full_rank: n_sigma.is_full_rank(),
        choi_lower,
        choi_upper,
        c3: C3,
        within_c3: choi_upper <= C3 * inst.eps,
        modeled_queries: query_counts(inst, per_w, amp.n_rep),
    };
    Ok(PetzResult {
        recovered_channel: recovered,
        exact,
        diagnostics,
    })
}
