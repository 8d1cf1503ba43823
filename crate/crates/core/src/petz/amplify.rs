use crate::block_encoding::{embedding, BlockOperator};
use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};

/// Largest relative spread `(max - min) / max` of the retained singular values for which
/// the block still counts as a scaled isometry.
pub const SPREAD_TOL: f64 = 0.5;

/// Result of oblivious amplitude amplification.
#[derive(Clone, Debug)]
pub struct Amplified {
    /// Ancilla-zero block of the amplified unitary (alpha = 1).
    pub block: ComplexMatrix,
    /// Reflection rounds `k`.
    pub rounds: usize,
    /// Uses of the input unitary or its inverse: `2k + 1`.
    pub n_rep: usize,
    /// Measured amplitude `γ` of the input block.
    pub gamma: f64,
    /// Rotation applied to an extra qubit so that `(2k+1)·arcsin(tγ) = π/2`.
    pub damping: f64,
    /// Relative spread of the retained singular values.
    pub spread: f64,
}

/// Mean of the singular values at least a quarter of the largest, and their relative spread.
fn measure_gamma(block: &ComplexMatrix) -> Result<(f64, f64)> {
    let s = singular_values(block);
    let max = s.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Amplification("block is zero".into()));
    }
    let kept: Vec<f64> = s.into_iter().filter(|&x| x >= 0.25 * max).collect();
    let min = kept.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = kept.iter().sum::<f64>() / kept.len() as f64;
    Ok((mean, (max - min) / max))
}

/// `Π_out (-A R_in A† R_out)^k A Π_in` with `R = 2Π - I`, after damping the amplitude to
/// `sin(π / (2(2k+1)))` where `k` is the smallest round count reaching `π/2`.
pub fn amplify(w: &impl BlockOperator) -> Result<Amplified> {
    let raw = w.raw_block();
    let (gamma, spread) = measure_gamma(&raw)?;
    if spread > SPREAD_TOL {
        return Err(Error::Amplification(format!(
            "singular values spread by {spread:.3} (limit {SPREAD_TOL}); block is not a scaled isometry"
        )));
    }
    let gamma = gamma.min(1.0);
    let phi = gamma.asin();
    let rounds = ((std::f64::consts::FRAC_PI_2 / phi - 1.0) / 2.0 - 1e-12).ceil().max(0.0) as usize;
    let n_rep = 2 * rounds + 1;
    let damping = ((std::f64::consts::PI / (2.0 * n_rep as f64)).sin() / gamma).min(1.0);
    let (c, s) = (damping, (1.0 - damping * damping).max(0.0).sqrt());

    let dim = w.dim();
    let in_idx = w.in_indices();
    let out_idx = w.out_indices();
    let mut in_mask = vec![false; dim];
    in_idx.iter().for_each(|&i| in_mask[i] = true);
    let mut out_mask = vec![false; dim];
    out_idx.iter().for_each(|&i| out_mask[i] = true);

    // The state lives on (A's space) ⊗ (damping qubit); x0/x1 are the qubit components.
    let forward = |x0: &ComplexMatrix, x1: &ComplexMatrix| {
        let (y0, y1) = (w.apply(x0), w.apply(x1));
        (&y0.scale_real(c) - &y1.scale_real(s), &y0.scale_real(s) + &y1.scale_real(c))
    };
    let backward = |x0: &ComplexMatrix, x1: &ComplexMatrix| {
        let (y0, y1) = (w.apply_adjoint(x0), w.apply_adjoint(x1));
        (&y0.scale_real(c) + &y1.scale_real(s), &y1.scale_real(c) - &y0.scale_real(s))
    };
    let reflect = |x0: &mut ComplexMatrix, x1: &mut ComplexMatrix, mask: &[bool]| {
        for r in 0..dim {
            if !mask[r] {
                for col in 0..x0.cols() {
                    x0[(r, col)] = -x0[(r, col)];
                }
            }
        }
        *x1 = x1.scale_real(-1.0);
    };

    let start = embedding(dim, &in_idx);
    let zero = ComplexMatrix::zeros(dim, in_idx.len());
    let (mut x0, mut x1) = forward(&start, &zero);
    for _ in 0..rounds {
        reflect(&mut x0, &mut x1, &out_mask);
        let (mut y0, mut y1) = backward(&x0, &x1);
        reflect(&mut y0, &mut y1, &in_mask);
        let (z0, z1) = forward(&y0, &y1);
        x0 = z0.scale_real(-1.0);
        x1 = z1.scale_real(-1.0);
    }
    let all: Vec<usize> = (0..in_idx.len()).collect();
    let block = x0.select(&out_idx, &all);
    Ok(Amplified {
        block,
        rounds,
        n_rep,
        gamma,
        damping,
        spread,
    })
}
