use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::spectral::{eig_hermitian, SpectralDecomposition, DEFAULT_NULL_REL};
use crate::error::{Error, Result};

pub const STATE_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STATE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotAState(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotAState(format!("hermiticity defect {defect:.3e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let e = eig_hermitian(&matrix)?;
        let min = e.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Normalizes a PSD matrix by its trace.
    pub fn from_unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::NotAState(format!("trace {tr} is not positive")));
        }
        Self::new(matrix.scale_real(1.0 / tr).hermitian_part())
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = super::matrix::vec_norm(psi);
        if n == 0.0 {
            return Err(Error::NotAState("zero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spectrum(&self) -> SpectralDecomposition {
        eig_hermitian(&self.matrix).expect("validated Hermitian")
    }

    /// Reciprocal of the minimum non-zero eigenvalue.
    pub fn condition_bound(&self) -> f64 {
        let e = self.spectrum();
        let thr = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
        1.0 / e.min_above(thr).expect("unit trace implies a nonzero eigenvalue")
    }

    /// Number of eigenvalues above the default null threshold.
    pub fn rank(&self) -> usize {
        let e = self.spectrum();
        let thr = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
        e.eigenvalues.iter().filter(|&&l| l > thr).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.matrix
    }
}
