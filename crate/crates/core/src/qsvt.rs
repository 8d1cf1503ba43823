//! Semantic singular-value transformation of block-encoded PSD operators.
//!
//! The polynomial is applied to the eigenvalues of the (Hermitian, PSD) block and the
//! result is re-embedded by [`dilate_contraction`]. Query counts are modeled as polynomial
//! degree times the query cost of the input encoding.

use serde::{Deserialize, Serialize};

use crate::block_encoding::{dilate_contraction, BlockEncoding, BlockOperator};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DEFAULT_NULL_REL};
use crate::poly::{approx_inv_sqrt, approx_sqrt, approx_sqrt_thresholded, ChebyshevPoly, PolyKind};

/// Constant in the certificate `‖f̃₁(𝒩σ) - 𝒩σ^{-1/2}‖ ≤ C1·ε/√d_E`.
pub const C1: f64 = 1.0;
/// Constant in the certificate `‖f̃₂(σ) - σ^{1/2}‖ ≤ C2·ε/√(d_E κ_𝒩σ)`.
pub const C2: f64 = 1.0;

const NEGATIVE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SqrtMode {
    /// `θ = 1/κ_σ`: exact on the support of σ.
    #[default]
    ExactSupport,
    /// `θ ≈ ε²/(d_E κ_𝒩σ)`: eigenvalues of σ below θ are treated as zero.
    Thresholded,
}

#[derive(Clone, Debug)]
pub struct SVTResult {
    /// Encodes `f̃(A)` with `alpha = out_alpha`.
    pub encoding: BlockEncoding,
    pub poly: ChebyshevPoly,
    pub modeled_queries: usize,
    /// Bound on `‖alpha·block - f(A)‖` for the ideal function `f` (pseudo-inverse
    /// convention on the kernel).
    pub certified_delta: f64,
    /// Bound on `‖f̃(A) - f(A)‖` from the polynomial alone.
    pub approximation_error: f64,
}

/// Error of `p` against its ideal function at the given eigenvalues, using the polynomial's
/// certificates. `None` when an eigenvalue lies in a region the polynomial does not
/// certify.
fn certified_error(p: &ChebyshevPoly, eigenvalues: &[f64]) -> Option<f64> {
    let scale = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let null = DEFAULT_NULL_REL * scale.max(1.0);
    let mut err = 0.0f64;
    for &l in eigenvalues {
        let e = if p.kind == PolyKind::Custom {
            0.0
        } else if l <= null {
            p.zero_error_cert
        } else if l >= p.theta * (1.0 - 1e-9) {
            p.sup_error_cert
        } else {
            p.low_error_cert?
        };
        err = err.max(e);
    }
    Some(err)
}

/// Block-encoding of `p(A)` where `A` is the raw block of `be`, normalized by `out_alpha`.
pub fn svt_apply(be: &BlockEncoding, p: &ChebyshevPoly, out_alpha: f64) -> Result<SVTResult> {
    if !be.is_square_block() {
        return Err(Error::dims("singular-value transform needs a square block"));
    }
    if p.cap > out_alpha * (1.0 + 1e-12) {
        return Err(Error::cert(
            "svt",
            format!("polynomial cap {:.6} exceeds out_alpha {out_alpha:.6}", p.cap),
        ));
    }
    let block = be.raw_block();
    let defect = block.hermiticity_defect();
    if defect > 1e-9 {
        return Err(Error::NotHermitian { defect });
    }
    let e = eig_hermitian(&block.hermitian_part())?;
    let min = e.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -NEGATIVE_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let values: Vec<f64> = e.eigenvalues.iter().map(|&l| p.eval_clamped(l)).collect();
    if let Some(v) = values.iter().find(|v| v.abs() > out_alpha * (1.0 + 1e-12)) {
        return Err(Error::cert(
            "svt",
            format!("|p(λ)| = {v:.6} exceeds out_alpha {out_alpha:.6}"),
        ));
    }
    let mut idx = 0;
    let transformed = e.reconstruct_with(|_| {
        let v = values[idx];
        idx += 1;
        v
    });
    let dil = dilate_contraction(&transformed.scale_real(1.0 / out_alpha))?;
    let approximation_error = certified_error(p, &e.eigenvalues).unwrap_or(f64::INFINITY);
    let input_error = be.delta() / be.alpha().max(f64::MIN_POSITIVE);
    let certified_delta = p.lipschitz() * input_error + approximation_error;
    let modeled_queries = p.degree * be.query_cost();
    let encoding = BlockEncoding::new(
        dil.unitary().clone(),
        out_alpha,
        certified_delta,
        be.dim_sys(),
        modeled_queries,
    )?;
    Ok(SVTResult {
        encoding,
        poly: p.clone(),
        modeled_queries,
        certified_delta,
        approximation_error,
    })
}

/// `(2√κ, C1·ε/√d_E)`-encoding of `𝒩(σ)^{-1/2}` from an encoding of `𝒩(σ)`.
pub fn inv_sqrt_encoding(be_nsigma: &BlockEncoding, kappa: f64, eps: f64, d_e: usize) -> Result<SVTResult> {
    check_eps(eps)?;
    if !(kappa >= 1.0) || d_e == 0 {
        return Err(Error::param(format!("kappa = {kappa} must be ≥ 1 and d_E ≥ 1")));
    }
    let theta = (1.0 / kappa).min(0.5);
    let delta = (C1 * eps * theta.sqrt() / (2.0 * (d_e as f64).sqrt())).min(0.5);
    let p = approx_inv_sqrt(theta, delta)?;
    let res = svt_apply(be_nsigma, &p, 2.0 * kappa.sqrt())?;
    if !res.approximation_error.is_finite() {
        let lmin = eig_hermitian(&be_nsigma.raw_block().hermitian_part())?
            .min_above(DEFAULT_NULL_REL)
            .unwrap_or(0.0);
        return Err(Error::cert(
            "inverse square root",
            format!("kappa = {kappa} is below the true condition bound {:.6}", 1.0 / lmin),
        ));
    }
    let bound = C1 * eps / (d_e as f64).sqrt();
    if res.certified_delta > bound {
        return Err(Error::cert(
            "inverse square root",
            format!("certificate {:.3e} exceeds {bound:.3e}", res.certified_delta),
        ));
    }
    Ok(res)
}

/// `(2, C2·ε/√(d_E κ_𝒩σ))`-encoding of `σ^{1/2}` from an encoding of σ.
pub fn sqrt_encoding(
    be_sigma: &BlockEncoding,
    kappa_sigma: f64,
    eps: f64,
    d_e: usize,
    kappa_nsigma: f64,
    mode: SqrtMode,
) -> Result<SVTResult> {
    check_eps(eps)?;
    if !(kappa_sigma >= 1.0) || !(kappa_nsigma >= 1.0) || d_e == 0 {
        return Err(Error::param("condition bounds must be ≥ 1 and d_E ≥ 1"));
    }
    let scale = (d_e as f64 * kappa_nsigma).sqrt();
    let p = match mode {
        SqrtMode::ExactSupport => {
            let theta = (1.0 / kappa_sigma).min(0.5);
            let delta = (C2 * eps / (2.0 * scale)).min(0.5);
            let e = eig_hermitian(&be_sigma.raw_block().hermitian_part())?;
            let null = DEFAULT_NULL_REL * e.max_abs_eigenvalue();
            if e.eigenvalues.iter().all(|&l| l > null) {
                approx_sqrt(theta, delta)?
            } else {
                approx_sqrt_thresholded(theta, delta)?
            }
        }
        SqrtMode::Thresholded => {
            let theta = (eps * eps / (4.0 * scale * scale)).min(0.5);
            let delta = (C2 * eps / (4.0 * scale)).min(0.5);
            approx_sqrt_thresholded(theta, delta)?
        }
    };
    let res = svt_apply(be_sigma, &p, 2.0)?;
    let bound = C2 * eps / scale;
    if !res.approximation_error.is_finite() || res.certified_delta > bound {
        return Err(Error::cert(
            "square root",
            format!(
                "certificate {:.3e} exceeds {bound:.3e} (kappa_sigma = {kappa_sigma})",
                res.certified_delta
            ),
        ));
    }
    Ok(res)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("eps = {eps} must lie in (0, 1)")))
    }
}

/// `f(A)` for the ideal function of `p` (pseudo-inverse convention), for checks.
pub fn ideal_function(a: &ComplexMatrix, kind: PolyKind) -> Result<ComplexMatrix> {
    match kind {
        PolyKind::InvSqrt => crate::linalg::inv_sqrt_psd(a),
        _ => crate::linalg::sqrt_psd(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block_encoding::{from_purification, purifier};
    use crate::linalg::{spectral_norm, DensityMatrix};

    fn encode(rho: &DensityMatrix) -> BlockEncoding {
        from_purification(&purifier(rho).unwrap(), rho.dim()).unwrap()
    }

    #[test]
    fn identity_polynomial() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.3, 0.1]).unwrap();
        let r = svt_apply(&encode(&rho), &ChebyshevPoly::identity(), 1.0).unwrap();
        assert!(r.encoding.encoded_block().approx_eq(rho.matrix(), 1e-12));
        assert_eq!(r.modeled_queries, 2);
    }

    #[test]
    fn inv_sqrt_on_diag_three_quarter() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let p = approx_inv_sqrt(0.25, 0.01).unwrap();
        let r = svt_apply(&encode(&rho), &p, 4.0).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[2.0 / 3f64.sqrt(), 2.0]);
        let err = spectral_norm(&(&r.encoding.encoded_block() - &expected));
        assert!(err <= 0.04, "{err}");
    }

    #[test]
    fn semantic_transform_is_exact() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let p = approx_sqrt(0.2, 0.01).unwrap();
        let r = svt_apply(&encode(&rho), &p, 2.0).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[
            p.eval(0.5).unwrap(),
            p.eval(0.3).unwrap(),
            p.eval(0.2).unwrap(),
        ]);
        assert!(r.encoding.encoded_block().approx_eq(&expected, 1e-9));
    }

    #[test]
    fn inv_sqrt_encoding_certificates() {
        let half = DensityMatrix::maximally_mixed(2);
        let r = inv_sqrt_encoding(&encode(&half), 2.0, 0.1, 1).unwrap();
        let target = ComplexMatrix::identity(2).scale_real(2f64.sqrt());
        let err = spectral_norm(&(&r.encoding.encoded_block() - &target));
        assert!(err <= C1 * 0.1 && err <= r.certified_delta);
        assert!((r.encoding.alpha() - 2.0 * 2f64.sqrt()).abs() < 1e-15);

        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let r = inv_sqrt_encoding(&encode(&rho), 4.0, 0.1, 4).unwrap();
        let target = ideal_function(rho.matrix(), PolyKind::InvSqrt).unwrap();
        let err = spectral_norm(&(&r.encoding.encoded_block() - &target));
        assert!(err <= C1 * 0.1 / 2.0, "{err}");
    }

    #[test]
    fn underestimated_kappa_is_a_certification_failure() {
        let rho = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let err = inv_sqrt_encoding(&encode(&rho), 4.0, 0.1, 2).unwrap_err();
        assert!(err.is_certification_failure(), "{err}");
    }

    #[test]
    fn sqrt_of_half_identity() {
        let half = DensityMatrix::maximally_mixed(2);
        let r = sqrt_encoding(&encode(&half), 2.0, 0.1, 2, 2.0, SqrtMode::ExactSupport).unwrap();
        let target = ComplexMatrix::identity(2).scale_real(0.5f64.sqrt());
        let err = spectral_norm(&(&r.encoding.encoded_block() - &target));
        assert!(err <= r.certified_delta);
        assert_eq!(r.encoding.alpha(), 2.0);
    }

    #[test]
    fn thresholded_sqrt_of_pure_state() {
        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let r = sqrt_encoding(&encode(&pure), 1.0, 0.2, 2, 2.0, SqrtMode::Thresholded).unwrap();
        let b = r.encoding.encoded_block();
        let theta = r.poly.theta;
        assert!(b[(1, 1)].norm() <= theta.sqrt() + 2.0 * r.poly.delta);
        assert!((b[(0, 0)].re - 1.0).abs() <= 2.0 * r.poly.delta);
    }
}
