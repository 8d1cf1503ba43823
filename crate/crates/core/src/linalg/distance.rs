use super::matrix::ComplexMatrix;
use super::spectral::trace_norm;
use crate::channels::KrausMap;
use crate::error::{Error, Result};

/// `(id ⊗ N)(|Γ><Γ|)` with `|Γ> = Σ_i |i>|i>`; rows indexed `i·d_out + b`.
pub fn choi_matrix(map: &impl KrausMap) -> ComplexMatrix {
    let (d_in, d_out) = (map.dim_in(), map.dim_out());
    let n = d_in * d_out;
    let mut choi = ComplexMatrix::zeros(n, n);
    for k in map.kraus() {
        let v: Vec<_> = (0..n).map(|idx| k[(idx % d_out, idx / d_out)]).collect();
        for r in 0..n {
            if v[r].norm_sqr() == 0.0 {
                continue;
            }
            for col in 0..n {
                choi[(r, col)] += v[r] * v[col].conj();
            }
        }
    }
    choi
}

/// Bounds `(lower, upper)` on the diamond distance `‖N1 - N2‖_◇` from the Choi
/// trace norm: `‖ΔJ‖₁ / d_in ≤ ‖N1 - N2‖_◇ ≤ ‖ΔJ‖₁`.
pub fn diamond_distance_bounds(a: &impl KrausMap, b: &impl KrausMap) -> Result<(f64, f64)> {
    if a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() {
        return Err(Error::dims(format!(
            "maps {}->{} and {}->{} are not comparable",
            a.dim_in(),
            a.dim_out(),
            b.dim_in(),
            b.dim_out()
        )));
    }
    let delta = &choi_matrix(a) - &choi_matrix(b);
    let upper = trace_norm(&delta);
    Ok((upper / a.dim_in() as f64, upper))
}

/// Entanglement fidelity `Σ_k |Tr(K_k σ)|²` of a map `A -> A` on a purification of `σ`.
pub fn entanglement_fidelity(map: &impl KrausMap, sigma: &ComplexMatrix) -> Result<f64> {
    if map.dim_in() != map.dim_out() || sigma.shape() != (map.dim_in(), map.dim_in()) {
        return Err(Error::dims("entanglement fidelity needs a map A -> A and a state on A"));
    }
    Ok(map
        .kraus()
        .iter()
        .map(|k| k.matmul(sigma).trace().norm_sqr())
        .sum())
}
