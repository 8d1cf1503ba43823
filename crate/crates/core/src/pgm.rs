//! Pretty good measurement and pretty good instrument for an ensemble `{p_x, σ_x}`.
//!
//! The instrument is the Petz map of the partial trace `Tr_X` with respect to the
//! classical-quantum state `σ_XB = Σ_x p_x |x><x| ⊗ σ_x`.

use serde::{Deserialize, Serialize};

use crate::block_encoding::{purification_vector, purifier, purifier_from_vector};
use crate::channels::{partial_trace_channel, CpMap};
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, inv_sqrt_psd, sqrt_psd, support_projector, trace_norm, ComplexMatrix,
    DensityMatrix, C64, DEFAULT_NULL_REL,
};
use crate::petz::{run_pipeline, PetzInstance, PetzResult};
use crate::qsvt::SqrtMode;

const PROB_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleFile", into = "EnsembleFile")]
pub struct Ensemble {
    labels: Vec<String>,
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

/// Ensemble JSON: `{labels, probs, states}` with each state a list of rows of `[re, im]`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    labels: Vec<String>,
    probs: Vec<f64>,
    states: Vec<Vec<Vec<C64>>>,
}

impl TryFrom<EnsembleFile> for Ensemble {
    type Error = Error;
    fn try_from(f: EnsembleFile) -> Result<Self> {
        let states = f
            .states
            .into_iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::dims("state rows must form a square matrix"));
                }
                let data = rows.into_iter().flatten().collect();
                DensityMatrix::new(ComplexMatrix::from_row_major(n, n, data)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(f.labels, f.probs, states)
    }
}

impl From<Ensemble> for EnsembleFile {
    fn from(e: Ensemble) -> Self {
        let states = e
            .states
            .iter()
            .map(|s| {
                let m = s.matrix();
                (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
            })
            .collect();
        EnsembleFile {
            labels: e.labels,
            probs: e.probs,
            states,
        }
    }
}

impl Ensemble {
    pub fn new(labels: Vec<String>, probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if states.is_empty() || labels.len() != states.len() || probs.len() != states.len() {
            return Err(Error::param(format!(
                "ensemble needs equally many labels ({}), probabilities ({}) and states ({})",
                labels.len(),
                probs.len(),
                states.len()
            )));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::param("probabilities must be non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::param(format!("probabilities sum to {total}")));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::dims("ensemble states have different dimensions"));
        }
        Ok(Self {
            labels,
            probs,
            states,
        })
    }

    /// Labels `0, 1, …`.
    pub fn unlabeled(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        let labels = (0..states.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs, states)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `σ̄ = Σ_x p_x σ_x`
    pub fn average(&self) -> ComplexMatrix {
        let d = self.dim();
        self.states
            .iter()
            .zip(&self.probs)
            .fold(ComplexMatrix::zeros(d, d), |acc, (s, &p)| &acc + &s.matrix().scale_real(p))
    }

    /// Dense `σ_XB` on `X ⊗ B`.
    pub fn cq_state(&self) -> DensityMatrix {
        let (n, d) = (self.len(), self.dim());
        let mut m = ComplexMatrix::zeros(n * d, n * d);
        for (x, (s, &p)) in self.states.iter().zip(&self.probs).enumerate() {
            for r in 0..d {
                for c in 0..d {
                    m[(x * d + r, x * d + c)] = s.matrix()[(r, c)] * p;
                }
            }
        }
        DensityMatrix::with_tolerance(m, 1e-9).expect("mixture of states")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    pub elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn sum(&self) -> ComplexMatrix {
        let d = self.elements[0].rows();
        self.elements
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, e| &acc + e)
    }

    /// `‖Σ E_x - Π‖_F` against a projector `Π`.
    pub fn completeness_defect(&self, projector: &ComplexMatrix) -> f64 {
        (&self.sum() - projector).frobenius_norm()
    }

    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| e.matmul(rho).trace().re)
            .collect()
    }
}

/// `E_x = σ̄^{-1/2} p_x σ_x σ̄^{-1/2}` (pseudo-inverse on the support of `σ̄`).
pub fn pgm_povm(e: &Ensemble) -> Result<Povm> {
    let inv = inv_sqrt_psd(&e.average())?;
    let elements = e
        .states
        .iter()
        .zip(&e.probs)
        .map(|(s, &p)| inv.matmul(&s.matrix().scale_real(p)).matmul(&inv).hermitian_part())
        .collect();
    Ok(Povm { elements })
}

/// Instrument `B -> X ⊗ B` with Kraus operators `|x> ⊗ √p_x σ_x^{1/2} σ̄^{-1/2}`.
pub fn pretty_good_instrument(e: &Ensemble) -> Result<CpMap> {
    let (n, d) = (e.len(), e.dim());
    let inv = inv_sqrt_psd(&e.average())?;
    let kraus = e
        .states
        .iter()
        .zip(&e.probs)
        .enumerate()
        .map(|(x, (s, &p))| {
            let k = sqrt_psd(s.matrix())?.matmul(&inv).scale_real(p.sqrt());
            Ok(ComplexMatrix::from_fn(n * d, d, |r, c| {
                if r / d == x {
                    k[(r % d, c)]
                } else {
                    C64::new(0.0, 0.0)
                }
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    CpMap::new(d, n * d, kraus)
}

/// `Σ_x p_x Tr[E_x σ_x]`
pub fn pgm_success_probability(e: &Ensemble) -> Result<f64> {
    let povm = pgm_povm(e)?;
    Ok(povm
        .elements
        .iter()
        .zip(e.states.iter().zip(&e.probs))
        .map(|(el, (s, &p))| p * el.matmul(s.matrix()).trace().re)
        .sum())
}

/// Optimal two-state discrimination probability `(1 + ‖p₀ρ₀ - p₁ρ₁‖₁) / 2`.
pub fn helstrom_success(p0: f64, rho0: &ComplexMatrix, p1: f64, rho1: &ComplexMatrix) -> f64 {
    0.5 * (1.0 + trace_norm(&(&rho0.scale_real(p0) - &rho1.scale_real(p1))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgmParameters {
    pub d_e: usize,
    /// Condition bound of `σ̄`.
    pub kappa_nsigma: f64,
    /// Reciprocal minimum non-zero eigenvalue of `σ_XB`: `max_x κ_x / p_x`.
    pub kappa_sigma: f64,
    /// `min_x p_x κ_x`, reported alongside for comparison.
    pub kappa_sigma_alt: f64,
}

fn min_nonzero_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let e = eig_hermitian(m)?;
    let thr = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
    e.min_above(thr)
        .ok_or_else(|| Error::Numerical("matrix has no nonzero eigenvalue".into()))
}

pub fn pgm_parameters(e: &Ensemble) -> Result<PgmParameters> {
    let kappa_nsigma = 1.0 / min_nonzero_eigenvalue(&e.average())?;
    let mut kappa_sigma = 0.0f64;
    let mut kappa_sigma_alt = f64::INFINITY;
    for (s, &p) in e.states.iter().zip(&e.probs) {
        if p <= 0.0 {
            continue;
        }
        let k = s.condition_bound();
        kappa_sigma = kappa_sigma.max(k / p);
        kappa_sigma_alt = kappa_sigma_alt.min(p * k);
    }
    Ok(PgmParameters {
        d_e: e.len(),
        kappa_nsigma,
        kappa_sigma,
        kappa_sigma_alt,
    })
}

/// Unitary on `(X' ⊗ R) ⊗ (X ⊗ B)` preparing `Σ_x √p_x |x>_{X'} |φ_x>_{RB}` with `|x>_X`
/// copied, i.e. a purification of `σ_XB`.
pub fn cq_purifier(e: &Ensemble) -> Result<ComplexMatrix> {
    let (n, d) = (e.len(), e.dim());
    let dim_sys = n * d;
    let mut psi = vec![C64::new(0.0, 0.0); dim_sys * dim_sys];
    for (x, (s, &p)) in e.states.iter().zip(&e.probs).enumerate() {
        let phi = purification_vector(s);
        for r in 0..d {
            for b in 0..d {
                let reference = x * d + r;
                let system = x * d + b;
                psi[reference * dim_sys + system] = phi[r * d + b] * p.sqrt();
            }
        }
    }
    purifier_from_vector(&psi)
}

/// The pipeline applied to `Tr_X` and `σ_XB`.
pub fn pgm_via_petz(e: &Ensemble, eps: f64) -> Result<PetzResult> {
    let params = pgm_parameters(e)?;
    let channel = partial_trace_channel(e.len(), e.dim())?;
    let inst = PetzInstance::new(
        channel,
        e.cq_state(),
        eps,
        params.kappa_sigma,
        params.kappa_nsigma,
        SqrtMode::ExactSupport,
    )?;
    let avg = DensityMatrix::with_tolerance(e.average().hermitian_part(), 1e-9)?;
    run_pipeline(&inst, &cq_purifier(e)?, &purifier(&avg)?)
}

/// `Π_{supp σ̄}`
pub fn average_support(e: &Ensemble) -> Result<ComplexMatrix> {
    support_projector(&e.average())
}

/// Marginal label distribution of an instrument output on `X ⊗ B`.
pub fn label_marginal(output: &ComplexMatrix, n: usize) -> Vec<f64> {
    let reduced = output.partial_trace(&[n, output.rows() / n], 1);
    reduced.real_diag()
}
