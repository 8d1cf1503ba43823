//! Dense complex linear algebra: matrices, states, spectral functions and channel distances.

mod density;
mod distance;
mod matrix;
mod spectral;

pub use density::{DensityMatrix, STATE_TOL};
pub use distance::{choi_matrix, diamond_distance_bounds, entanglement_fidelity};
pub use matrix::{basis, c, inner, vec_norm, ComplexMatrix, C64};
pub use spectral::{
    complete_to_unitary, condition_bound, eig_hermitian, inv_sqrt_psd, matrix_function_hermitian,
    matrix_function_psd, matrix_function_psd_default, singular_values, spectral_norm, sqrt_psd,
    support_projector, svd, trace_norm, SpectralDecomposition, DEFAULT_NULL_REL, HERMITIAN_TOL,
};

pub(crate) use matrix::{ONE, ZERO};
