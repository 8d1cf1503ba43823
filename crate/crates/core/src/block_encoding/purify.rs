use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, vec_norm, ComplexMatrix, DensityMatrix, C64};

/// `|ψ> = Σ_i √λ_i |i>_R |v_i>_A` on `R ⊗ A` with `d_R = d_A`.
pub fn purification_vector(rho: &DensityMatrix) -> Vec<C64> {
    let d = rho.dim();
    let spec = rho.spectrum();
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    for (i, &lam) in spec.eigenvalues.iter().enumerate() {
        let w = lam.max(0.0).sqrt();
        for a in 0..d {
            psi[i * d + a] = spec.eigenvectors[(a, i)] * w;
        }
    }
    let n = vec_norm(&psi);
    psi.iter_mut().for_each(|x| *x /= n);
    psi
}

/// Deterministic unitary whose first column is the unit vector `psi`.
pub fn purifier_from_vector(psi: &[C64]) -> Result<ComplexMatrix> {
    let n = vec_norm(psi);
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::param(format!("purification vector has norm {n}")));
    }
    complete_to_unitary(&ComplexMatrix::column(psi))
}

/// Unitary `U^ρ` on `R ⊗ A` with `U^ρ|0>|0>` purifying `ρ`.
pub fn purifier(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    purifier_from_vector(&purification_vector(rho))
}
