use super::kraus::{KrausMap, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, eig_hermitian, ComplexMatrix, C64};

/// Stinespring isometry `V: A -> E ⊗ B` together with a unitary dilation
/// `U: E'A -> EB` satisfying `U |0>_{E'} = V`.
///
/// The dilation acts on a space of dimension `d_E' · d_A` where
/// `d_E' = ceil(d_E d_B / d_A)`. On the output side the `E ⊗ B` space occupies the first
/// `d_E d_B` coordinates; any remaining coordinates are padding that `V` never reaches.
#[derive(Clone, Debug)]
pub struct IsometricExtension {
    pub dim_in: usize,
    pub dim_out: usize,
    pub dim_env: usize,
    pub dim_env_in: usize,
    /// `(d_E d_B) x d_A`, rows indexed `e·d_B + b`.
    pub isometry: ComplexMatrix,
    /// `(d_E' d_A) x (d_E' d_A)`, columns indexed `e'·d_A + a`.
    pub dilation_unitary: ComplexMatrix,
}

impl IsometricExtension {
    pub fn dilation_dim(&self) -> usize {
        self.dim_env_in * self.dim_in
    }

    /// `Tr_E[V ρ V†]`
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.isometry
            .conjugate(rho)
            .partial_trace(&[self.dim_env, self.dim_out], 0)
    }

    /// Adjoint channel through the dilation:
    /// `Tr_Ẽ[<0|_{E'} U† (Γ_{EẼ} ⊗ ω_B) U |0>_{E'}]`.
    pub fn adjoint_via_dilation(&self, omega: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d_a, d_b, d_e) = (self.dim_in, self.dim_out, self.dim_env);
        if omega.shape() != (d_b, d_b) {
            return Err(Error::dims("adjoint input has wrong dimension"));
        }
        let dim = self.dilation_dim();
        // Operator on (padded EB) ⊗ Ẽ.
        let y = ComplexMatrix::from_fn(dim * d_e, dim * d_e, |r, col| {
            let (x, et) = (r / d_e, r % d_e);
            let (x2, et2) = (col / d_e, col % d_e);
            if x >= d_e * d_b || x2 >= d_e * d_b {
                return C64::new(0.0, 0.0);
            }
            let (e, b) = (x / d_b, x % d_b);
            let (e2, b2) = (x2 / d_b, x2 % d_b);
            if e == et && e2 == et2 {
                omega[(b, b2)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let u = self.dilation_unitary.kron(&ComplexMatrix::identity(d_e));
        let z = u.adjoint_matmul(&y.matmul(&u));
        // E' = 0 block: indices (0·d_A + a)·d_Ẽ + ẽ.
        let keep: Vec<usize> = (0..d_a * d_e).collect();
        let block = z.select(&keep, &keep);
        Ok(block.partial_trace(&[d_a, d_e], 1))
    }
}

/// Builds `V|ψ> = Σ_i |i>_E ⊗ K_i|ψ>` with `d_E` equal to the Kraus count.
pub fn isometric_extension(channel: &QuantumChannel) -> Result<IsometricExtension> {
    let d_a = channel.dim_in();
    let d_b = channel.dim_out();
    let d_e = channel.kraus_count();
    let mut v = ComplexMatrix::zeros(d_e * d_b, d_a);
    for (e, k) in channel.kraus().iter().enumerate() {
        for b in 0..d_b {
            for a in 0..d_a {
                v[(e * d_b + b, a)] = k[(b, a)];
            }
        }
    }
    let d_env_in = (d_e * d_b).div_ceil(d_a);
    let dim = d_env_in * d_a;
    let mut padded = ComplexMatrix::zeros(dim, d_a);
    for r in 0..d_e * d_b {
        for a in 0..d_a {
            padded[(r, a)] = v[(r, a)];
        }
    }
    let dilation_unitary = complete_to_unitary(&padded)?;
    Ok(IsometricExtension {
        dim_in: d_a,
        dim_out: d_b,
        dim_env: d_e,
        dim_env_in: d_env_in,
        isometry: v,
        dilation_unitary,
    })
}

/// Re-expresses a channel with the minimal number of Kraus operators (its Kraus rank),
/// read off the eigendecomposition of the Choi matrix.
pub fn minimal_kraus(channel: &QuantumChannel) -> Result<QuantumChannel> {
    let choi = crate::linalg::choi_matrix(channel);
    let (d_a, d_b) = (channel.dim_in(), channel.dim_out());
    let e = eig_hermitian(&choi)?;
    let thr = 1e-12 * e.max_abs_eigenvalue().max(1.0);
    let mut kraus = Vec::new();
    for (k, &l) in e.eigenvalues.iter().enumerate() {
        if l <= thr {
            continue;
        }
        let s = l.sqrt();
        // Choi is Σ |a><a'| ⊗ N(|a><a'|): eigenvector index a·d_B + b.
        kraus.push(ComplexMatrix::from_fn(d_b, d_a, |b, a| {
            e.eigenvectors[(a * d_b + b, k)] * s
        }));
    }
    QuantumChannel::new(d_a, d_b, kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::constructors::*;
    use crate::linalg::c;

    #[test]
    fn unitary_channel_has_trivial_environment() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scale_real(0.5f64.sqrt());
        let ext = isometric_extension(&unitary_channel(&h).unwrap()).unwrap();
        assert_eq!(ext.dim_env, 1);
        assert!(ext.isometry.approx_eq(&h, 1e-15));
    }

    #[test]
    fn search_channel_environment_dimension() {
        let ext = isometric_extension(&search_channel(4, 2).unwrap()).unwrap();
        assert_eq!(ext.dim_env, 4);
        assert!(ext.isometry.isometry_defect() < 1e-12);
        assert!(ext.dilation_unitary.unitarity_defect() < 1e-12);
    }

    #[test]
    fn amplitude_damping_dilation() {
        let ch = amplitude_damping(0.3).unwrap();
        let ext = isometric_extension(&ch).unwrap();
        assert_eq!(ext.dim_env, 2);
        assert!(ext.isometry.isometry_defect() < 1e-9);
        let first = ext.dilation_unitary.submatrix(0, 0, ext.dilation_dim(), 2);
        assert!(first.submatrix(0, 0, 4, 2).approx_eq(&ext.isometry, 1e-15));
        let rho = ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
            (0, 0) => c(0.4, 0.0),
            (1, 1) => c(0.6, 0.0),
            (0, 1) => c(0.1, 0.2),
            _ => c(0.1, -0.2),
        });
        assert!(ext.apply(&rho).approx_eq(&ch.apply(&rho).unwrap(), 1e-12));
    }

    #[test]
    fn minimal_kraus_shrinks_redundant_list() {
        let k = ComplexMatrix::identity(2).scale_real(0.5f64.sqrt());
        let ch = QuantumChannel::new(2, 2, vec![k.clone(), k]).unwrap();
        let min = minimal_kraus(&ch).unwrap();
        assert_eq!(min.kraus_count(), 1);
    }
}
