use serde::{Deserialize, Serialize};

use super::run::bayes_comparison;
use crate::block_encoding::{encode_operator, from_purification, purifier, verify};
use crate::channels::{partial_trace_channel, KrausMap};
use crate::error::Result;
use crate::linalg::{choi_matrix, eig_hermitian, spectral_norm, support_projector};
use crate::petz::{
    exact_petz, ideal_isometric_extension, ideal_isometric_extension_via_dilation,
    run_pipeline_canonical, PetzInstance,
};
use crate::pgm::{average_support, pgm_povm, pretty_good_instrument, Ensemble};
use crate::poly::{approx_inv_sqrt, approx_sqrt, sup_error};
use crate::random::{self, rng_stream};

/// Outcome of one invariant: `value ≤ tolerance` passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn worst(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, f64::max)
}

fn random_instance(seed: u64, stream: u64, eps: f64) -> Result<PetzInstance> {
    let mut rng = rng_stream(seed, stream);
    let d_a = 2 + (stream as usize % 2);
    let d_b = 2 + (stream as usize / 2 % 2);
    let d_e = d_a.div_ceil(d_b).max(1 + stream as usize % 3);
    let channel = random::random_channel(d_a, d_b, d_e, &mut rng);
    let sigma = random::random_state(d_a, 0.5, &mut rng);
    PetzInstance::with_exact_bounds(channel, sigma, eps)
}

/// Invariant suite over a handful of seeded instances.
pub fn verify_suite(seed: u64, eps: f64) -> Result<VerifyOutcome> {
    let instances = (0..8)
        .map(|s| random_instance(seed, s, eps))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();

    let mut cp = Vec::new();
    let mut tp = Vec::new();
    let mut fixed = Vec::new();
    let mut dual = Vec::new();
    for inst in &instances {
        let petz = exact_petz(&inst.channel, &inst.sigma)?;
        let e = eig_hermitian(&choi_matrix(&petz))?;
        cp.push(-e.eigenvalues.last().copied().unwrap_or(0.0));
        let n_sigma = inst.n_sigma();
        let support = support_projector(n_sigma.matrix())?;
        tp.push((&petz.gram() - &support).frobenius_norm());
        fixed.push(petz.apply(n_sigma.matrix())?.max_abs_diff(inst.sigma.matrix()));
        let v = ideal_isometric_extension(inst)?;
        dual.push(spectral_norm(&(&v - &ideal_isometric_extension_via_dilation(inst)?)));
    }
    checks.push(Check::new("exact_petz_cp", worst(cp), 1e-9));
    checks.push(Check::new("exact_petz_tp_on_support", worst(tp), 1e-9));
    checks.push(Check::new("exact_petz_recovers_sigma", worst(fixed), 1e-9));
    checks.push(Check::new("extension_dual_path", worst(dual), 1e-8));

    let mut bayes = Vec::new();
    for s in 0..8 {
        let mut rng = rng_stream(seed, 100 + s);
        let (nx, ny) = (2 + s as usize % 3, 2 + s as usize / 3 % 3);
        let prior = random::random_distribution(nx, 0.5, &mut rng);
        let total: f64 = prior.iter().sum();
        let prior: Vec<f64> = prior.iter().map(|p| p / total).collect();
        let (b, p) = bayes_comparison(&prior, &random::random_stochastic(nx, ny, &mut rng))?;
        bayes.push(worst(b.iter().flatten().zip(p.iter().flatten()).map(|(x, y)| (x - y).abs())));
    }
    checks.push(Check::new("classical_bayes_consistency", worst(bayes), 1e-9));

    let (theta, delta) = (0.1, 0.01);
    let f1 = approx_inv_sqrt(theta, delta)?;
    let f2 = approx_sqrt(theta, delta)?;
    checks.push(Check::new(
        "inv_sqrt_polynomial_error",
        sup_error(&f1, |x| x.powf(-0.5), theta, 1.0, 10_001)?,
        2.0 * delta / theta.sqrt(),
    ));
    checks.push(Check::new(
        "sqrt_polynomial_error",
        sup_error(&f2, f64::sqrt, theta, 1.0, 10_001)?,
        2.0 * delta,
    ));

    let mut be = Vec::new();
    for s in 0..4 {
        let mut rng = rng_stream(seed, 200 + s);
        let a = random::ginibre(3, 3, &mut rng);
        let alpha = spectral_norm(&a) * 1.5;
        be.push(verify(&encode_operator(&a, alpha)?, &a, 1e-10)?.defect);
        let rho = random::random_state(3, 0.2, &mut rng);
        be.push(verify(&from_purification(&purifier(&rho)?, 3)?, rho.matrix(), 1e-10)?.defect);
    }
    checks.push(Check::new("block_encoding_defect", worst(be), 1e-10));

    let mut completeness = Vec::new();
    let mut identity = Vec::new();
    for s in 0..6 {
        let mut rng = rng_stream(seed, 300 + s);
        let (n, d) = (2 + s as usize % 2, 2 + s as usize / 2 % 2);
        let probs = random::random_distribution(n, 0.5, &mut rng);
        let total: f64 = probs.iter().sum();
        let mut probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
        let head: f64 = probs[..n - 1].iter().sum();
        probs[n - 1] = 1.0 - head;
        let states = (0..n).map(|_| random::random_state(d, 0.0, &mut rng)).collect();
        let e = Ensemble::unlabeled(probs, states)?;
        completeness.push(pgm_povm(&e)?.completeness_defect(&average_support(&e)?));
        let petz = exact_petz(&partial_trace_channel(n, d)?, &e.cq_state())?;
        identity.push(choi_matrix(&pretty_good_instrument(&e)?).max_abs_diff(&choi_matrix(&petz)));
    }
    checks.push(Check::new("pgm_completeness", worst(completeness), 1e-9));
    checks.push(Check::new("instrument_petz_identity", worst(identity), 1e-9));

    let mut chain = Vec::new();
    for inst in instances.iter().take(3) {
        let d = run_pipeline_canonical(inst)?.diagnostics;
        chain.push(d.isometry_defect - d.error_budget);
    }
    checks.push(Check::new("isometry_defect_within_budget", worst(chain), 0.0));

    Ok(VerifyOutcome { seed, checks })
}
