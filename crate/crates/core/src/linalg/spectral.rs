//! Hermitian eigendecomposition, singular values and spectral matrix functions.
//!
//! The decompositions are delegated to `nalgebra`; everything here converts to and from
//! [`ComplexMatrix`] and enforces the ordering and tolerance conventions used by the rest
//! of the crate (eigenvalues descending, pseudo-inverse convention on the null space).

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default relative null-space threshold used by pseudo-inverse style functions.
pub const DEFAULT_NULL_REL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// Real eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `V f(Λ) V†`
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fvals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &fk) in fvals.iter().enumerate() {
            if fk == 0.0 {
                continue;
            }
            for r in 0..n {
                let a = v[(r, k)] * fk;
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue strictly above `threshold`, if any.
    pub fn min_above(&self, threshold: f64) -> Option<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|&x| x > threshold)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.min(x))))
    }
}

fn to_na(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn from_na(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in descending order.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::dims(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = to_na(&m.hermitian_part()).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = from_na(&eig.eigenvectors);
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Thin SVD `M = U diag(s) V†` with `U` of shape `rows x k`, `V` of shape `cols x k`.
pub fn svd(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let svd = to_na(m).svd(true, true);
    let u = from_na(svd.u.as_ref().expect("u requested"));
    let v_t = from_na(svd.v_t.as_ref().expect("v_t requested"));
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    (u, s, v_t.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.hermiticity_defect() <= 1e-13 * m.max_abs().max(1.0) {
        if let Ok(e) = eig_hermitian(m) {
            return e.max_abs_eigenvalue();
        }
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.hermiticity_defect() <= 1e-13 * m.max_abs().max(1.0) {
        if let Ok(e) = eig_hermitian(m) {
            return e.eigenvalues.iter().map(|x| x.abs()).sum();
        }
    }
    singular_values(m).iter().sum()
}

/// Applies `f` to the eigenvalues of a PSD matrix that exceed `null_threshold`, mapping the
/// rest to zero (pseudo-inverse convention).
pub fn matrix_function_psd(
    m: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
    null_threshold: f64,
) -> Result<ComplexMatrix> {
    let e = eig_hermitian(m)?;
    let scale = e.max_abs_eigenvalue().max(f64::MIN_POSITIVE);
    if let Some(&min) = e.eigenvalues.last() {
        if min < -1e-10 * scale.max(1.0) {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    for &l in &e.eigenvalues {
        if l > null_threshold && !f(l).is_finite() {
            return Err(Error::FunctionUndefined { eigenvalue: l });
        }
    }
    Ok(e.reconstruct_with(|l| if l > null_threshold { f(l) } else { 0.0 }))
}

/// `matrix_function_psd` with the default relative threshold `1e-12·‖m‖`.
pub fn matrix_function_psd_default(
    m: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let e = eig_hermitian(m)?;
    let threshold = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
    matrix_function_psd(m, f, threshold)
}

/// Applies `f` to every eigenvalue of a Hermitian matrix (no null-space convention).
pub fn matrix_function_hermitian(
    m: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(m)?.reconstruct_with(f))
}

/// Principal square root of a PSD matrix; small negative eigenvalues are clipped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function_psd(m, f64::sqrt, 0.0)
}

/// Pseudo-inverse square root with the default relative null threshold.
pub fn inv_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function_psd_default(m, |x| 1.0 / x.sqrt())
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above the
/// default relative threshold.
pub fn support_projector(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function_psd_default(m, |_| 1.0)
}

/// Reciprocal of the smallest eigenvalue above the default null threshold.
pub fn condition_bound(m: &ComplexMatrix) -> Result<f64> {
    let e = eig_hermitian(m)?;
    let threshold = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
    e.min_above(threshold)
        .map(|l| 1.0 / l)
        .ok_or_else(|| Error::Numerical("matrix has no nonzero eigenvalue".into()))
}

/// Extends the orthonormal columns of `m` (shape `n x k`) to an `n x n` unitary.
///
/// The added columns come from Gram–Schmidt on the standard basis, each time taking the
/// basis vector with the largest residual, so the completion is deterministic.
pub fn complete_to_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (n, k) = m.shape();
    if k > n {
        return Err(Error::dims(format!("cannot complete {n}x{k} to a unitary")));
    }
    let defect = m.isometry_defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary { defect });
    }
    let mut basis: Vec<Vec<C64>> = (0..k).map(|j| m.col(j)).collect();
    while basis.len() < n {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..n {
            let mut v = vec![ZERO; n];
            v[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let norm = super::matrix::vec_norm(&v);
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn + 1e-12) {
                best = Some((norm, v));
            }
        }
        let (norm, mut v) = best.expect("n > 0");
        if norm < 1e-6 {
            return Err(Error::Numerical("orthonormal completion degenerated".into()));
        }
        for z in &mut v {
            *z /= norm;
        }
        basis.push(v);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, b) in basis.iter().enumerate() {
        u.set_col(j, b);
    }
    Ok(u)
}
