use super::PetzInstance;
use crate::channels::{isometric_extension, CpMap, KrausMap, QuantumChannel};
use crate::error::Result;
use crate::linalg::{inv_sqrt_psd, sqrt_psd, ComplexMatrix, DensityMatrix, C64};

/// `𝒫(ω) = σ^{1/2} 𝒩†(𝒩(σ)^{-1/2} ω 𝒩(σ)^{-1/2}) σ^{1/2}` with Kraus operators
/// `σ^{1/2} K_k† 𝒩(σ)^{-1/2}`.
///
/// Inverses are pseudo-inverses, so the map is trace preserving only on the support of
/// `𝒩(σ)`; it is therefore returned as a [`CpMap`].
pub fn exact_petz(channel: &QuantumChannel, sigma: &DensityMatrix) -> Result<CpMap> {
    let n_sigma = channel.apply(sigma.matrix())?.hermitian_part();
    let left = sqrt_psd(sigma.matrix())?;
    let right = inv_sqrt_psd(&n_sigma)?;
    let kraus = channel
        .kraus()
        .iter()
        .map(|k| left.matmul(&k.adjoint_matmul(&right)))
        .collect();
    CpMap::new(channel.dim_out(), channel.dim_in(), kraus)
}

/// `V^𝒫 = Σ_ẽ |ẽ> ⊗ σ^{1/2} K_ẽ† 𝒩(σ)^{-1/2}`, a `(d_E d_A) x d_B` matrix with rows
/// `ẽ·d_A + a`.
pub fn ideal_isometric_extension(inst: &PetzInstance) -> Result<ComplexMatrix> {
    let petz = exact_petz(&inst.channel, &inst.sigma)?;
    Ok(stack(petz.kraus()))
}

pub(crate) fn stack(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let (r, c) = blocks[0].shape();
    ComplexMatrix::from_fn(blocks.len() * r, c, |row, col| blocks[row / r][(row % r, col)])
}

/// The same isometry assembled from the dilation of `𝒩`:
/// `(<0|_{E'} ⊗ I) σ^{1/2} (U^𝒩)† 𝒩(σ)^{-1/2} (|Γ>_{EẼ} ⊗ I_B)`.
pub fn ideal_isometric_extension_via_dilation(inst: &PetzInstance) -> Result<ComplexMatrix> {
    let ext = isometric_extension(&inst.channel)?;
    let (d_a, d_b, d_e) = (inst.d_a(), inst.d_b(), inst.d_e());
    let dim = ext.dilation_dim();
    let n_inv = inv_sqrt_psd(inst.n_sigma().matrix())?;
    let s_half = sqrt_psd(inst.sigma.matrix())?;
    let u_dag = ext.dilation_unitary.adjoint();
    let mut out = ComplexMatrix::zeros(d_e * d_a, d_b);
    for b in 0..d_b {
        for et in 0..d_e {
            // |ẽ>_E ⊗ 𝒩σ^{-1/2}|b> in the padded EB space, paired with |ẽ>_Ẽ.
            let mut v = vec![C64::new(0.0, 0.0); dim];
            for bp in 0..d_b {
                v[et * d_b + bp] = n_inv[(bp, b)];
            }
            let w: Vec<C64> = (0..d_a)
                .map(|a| (0..dim).map(|x| u_dag[(a, x)] * v[x]).sum())
                .collect();
            for a in 0..d_a {
                out[(et * d_a + a, b)] = (0..d_a).map(|a2| s_half[(a, a2)] * w[a2]).sum();
            }
        }
    }
    Ok(out)
}
