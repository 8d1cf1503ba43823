use super::exact::stack;
use super::PetzInstance;
use crate::block_encoding::{
    from_digits, from_purification, verify, BlockCircuit, BlockOperator, Circuit, Factor,
};
use crate::channels::{isometric_extension, IsometricExtension, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, ComplexMatrix, C64};
use crate::qsvt::{inv_sqrt_encoding, sqrt_encoding, SVTResult};

const PURIFIER_TOL: f64 = 1e-9;

/// The unitary `W̃` with its ingredients.
///
/// Registers, most significant first: `R''` (2), `X` (the dilation space of `𝒩`, read
/// as `E ⊗ B` before `U^𝒩†` and as `E' ⊗ A` after), `Ẽ` (`d_E`), `R'` (2).
#[derive(Clone, Debug)]
pub struct WTilde {
    pub circuit: BlockCircuit,
    pub f1: SVTResult,
    pub f2: SVTResult,
    pub extension: IsometricExtension,
    pub register_dims: [usize; 4],
}

impl WTilde {
    /// `Ṽ^𝒫 = alpha · block`, rows `ẽ·d_A + a`.
    pub fn approximate_isometry(&self) -> ComplexMatrix {
        self.circuit.encoded_block()
    }

    /// Number of ancilla-zero rows `(ẽ, a)` and columns `b`.
    pub fn block_shape(&self) -> (usize, usize) {
        (self.circuit.out_indices.len(), self.circuit.in_indices.len())
    }
}

/// Unitary on `E ⊗ Ẽ` whose first column is `|Γ>/√d_E`.
pub fn maximally_entangled_preparation(d_e: usize) -> Result<ComplexMatrix> {
    let amp = C64::new(1.0 / (d_e as f64).sqrt(), 0.0);
    let col: Vec<C64> = (0..d_e * d_e)
        .map(|i| if i / d_e == i % d_e { amp } else { C64::new(0.0, 0.0) })
        .collect();
    complete_to_unitary(&ComplexMatrix::column(&col))
}

/// `‖σ^{1/2} - f̃₂(σ)‖·√(d_E κ_𝒩σ) + 2√d_E·‖𝒩(σ)^{-1/2} - f̃₁(𝒩(σ))‖`.
pub fn error_budget(inst: &PetzInstance, sqrt_error: f64, inv_sqrt_error: f64) -> f64 {
    let d_e = inst.d_e() as f64;
    sqrt_error * (d_e * inst.kappa_nsigma).sqrt() + 2.0 * d_e.sqrt() * inv_sqrt_error
}

/// `Σ_ẽ |ẽ> ⊗ f2 K_ẽ† f1` for given approximations `f1 ≈ 𝒩(σ)^{-1/2}`, `f2 ≈ σ^{1/2}`.
pub fn approximate_isometric_extension(
    inst: &PetzInstance,
    f1: &ComplexMatrix,
    f2: &ComplexMatrix,
) -> ComplexMatrix {
    let blocks: Vec<ComplexMatrix> = inst
        .channel
        .kraus()
        .iter()
        .map(|k| f2.matmul(&k.adjoint_matmul(f1)))
        .collect();
    stack(&blocks)
}

fn check_purifier(
    u: &ComplexMatrix,
    dim: usize,
    target: &ComplexMatrix,
    name: &str,
) -> Result<crate::block_encoding::BlockEncoding> {
    let be = from_purification(u, dim)?;
    let report = verify(&be, target, PURIFIER_TOL)?;
    if !report.passed {
        return Err(Error::cert(
            "purifier",
            format!("{name} purifier reproduces its state only to {:.3e}", report.defect),
        ));
    }
    Ok(be)
}

/// Assembles `W̃ = U^{f̃₂} (U^𝒩)† (U^Φ ⊗ U^{f̃₁})` from purifiers of `σ` and `𝒩(σ)`.
///
/// The block is `Ṽ^𝒫 / (4√(d_E κ_𝒩σ))`; the returned encoding carries
/// `alpha = 4√(d_E κ_𝒩σ)` so that its encoded block is `Ṽ^𝒫` itself.
pub fn build_w_tilde(
    inst: &PetzInstance,
    u_sigma: &ComplexMatrix,
    u_nsigma: &ComplexMatrix,
) -> Result<WTilde> {
    let (d_a, d_b, d_e) = (inst.d_a(), inst.d_b(), inst.d_e());
    let be_sigma = check_purifier(u_sigma, d_a, inst.sigma.matrix(), "sigma")?;
    let be_nsigma = check_purifier(u_nsigma, d_b, inst.n_sigma().matrix(), "N(sigma)")?;

    let f1 = inv_sqrt_encoding(&be_nsigma, inst.kappa_nsigma, inst.eps, d_e)?;
    let f2 = sqrt_encoding(
        &be_sigma,
        inst.kappa_sigma,
        inst.eps,
        d_e,
        inst.kappa_nsigma,
        inst.sqrt_mode,
    )?;
    let extension = isometric_extension(&inst.channel)?;
    let d_x = extension.dilation_dim();
    let dims = [2, d_x, d_e, 2];
    let total: usize = dims.iter().product();
    let idx = |r2: usize, x: usize, et: usize, r1: usize| from_digits(&[r2, x, et, r1], &dims);

    let mut phi_orbits = Vec::new();
    let mut f1_orbits = Vec::new();
    for r2 in 0..2 {
        for r1 in 0..2 {
            for b in 0..d_b {
                phi_orbits.push(
                    (0..d_e * d_e)
                        .map(|l| idx(r2, (l / d_e) * d_b + b, l % d_e, r1))
                        .collect(),
                );
            }
        }
        for e in 0..d_e {
            for et in 0..d_e {
                f1_orbits.push(
                    (0..2 * d_b)
                        .map(|l| idx(r2, e * d_b + l % d_b, et, l / d_b))
                        .collect(),
                );
            }
        }
    }
    let mut f2_orbits = Vec::new();
    for ep in 0..d_x / d_a {
        for et in 0..d_e {
            for r1 in 0..2 {
                f2_orbits.push(
                    (0..2 * d_a)
                        .map(|l| idx(l / d_a, ep * d_a + l % d_a, et, r1))
                        .collect(),
                );
            }
        }
    }

    let circuit = Circuit::new(total)
        .then(Factor::from_orbits(maximally_entangled_preparation(d_e)?, phi_orbits))
        .then(Factor::from_orbits(f1.encoding.unitary().clone(), f1_orbits))
        .then(Factor::on_registers(&dims, &[1], extension.dilation_unitary.adjoint()))
        .then(Factor::from_orbits(f2.encoding.unitary().clone(), f2_orbits));

    let in_indices = (0..d_b).map(|b| idx(0, b, 0, 0)).collect();
    let out_indices = (0..d_e * d_a)
        .map(|l| idx(0, l % d_a, l / d_a, 0))
        .collect();
    let alpha = 4.0 * (d_e as f64 * inst.kappa_nsigma).sqrt();
    let delta = error_budget(inst, f2.certified_delta, f1.certified_delta);
    let query_cost = f1.modeled_queries + f2.modeled_queries + 2;
    Ok(WTilde {
        circuit: BlockCircuit {
            circuit,
            in_indices,
            out_indices,
            alpha,
            delta,
            query_cost,
        },
        f1,
        f2,
        extension,
        register_dims: dims,
    })
}
