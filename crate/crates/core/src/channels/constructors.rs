use super::kraus::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};

const PROB_TOL: f64 = 1e-12;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::param(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

pub fn identity_channel(d: usize) -> QuantumChannel {
    QuantumChannel::new(d, d, vec![ComplexMatrix::identity(d)]).expect("identity is TP")
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    let defect = u.unitarity_defect();
    if defect > 1e-9 {
        return Err(Error::NotUnitary { defect });
    }
    QuantumChannel::from_kraus(vec![u.clone()])
}

/// Generalized Pauli shift `X|j> = |j+1 mod d>`.
pub fn shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, col| {
        if r == (col + 1) % d {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Generalized Pauli clock `Z|j> = ω^j |j>`.
pub fn clock(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / d as f64))
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// `ρ -> (1-p) ρ + p Tr(ρ) I/d`, realized with the `d²` Weyl operators.
pub fn depolarizing(d: usize, p: f64) -> Result<QuantumChannel> {
    check_prob("p", p)?;
    if d == 0 {
        return Err(Error::param("dimension must be positive"));
    }
    let x = shift(d);
    let z = clock(d);
    let dd = (d * d) as f64;
    let mut kraus = Vec::with_capacity(d * d);
    let mut xa = ComplexMatrix::identity(d);
    for a in 0..d {
        let mut zb = ComplexMatrix::identity(d);
        for b in 0..d {
            let w = if a == 0 && b == 0 {
                (1.0 - p + p / dd).sqrt()
            } else {
                (p / dd).sqrt()
            };
            kraus.push(xa.matmul(&zb).scale_real(w));
            zb = zb.matmul(&z);
        }
        xa = xa.matmul(&x);
    }
    QuantumChannel::new(d, d, kraus)
}

pub fn amplitude_damping(gamma: f64) -> Result<QuantumChannel> {
    check_prob("gamma", gamma)?;
    let k0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]);
    QuantumChannel::new(2, 2, vec![k0, k1])
}

/// Qubit phase flip with probability `p`.
pub fn dephasing(p: f64) -> Result<QuantumChannel> {
    check_prob("p", p)?;
    let k0 = ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt());
    let k1 = ComplexMatrix::from_real_diag(&[1.0, -1.0]).scale_real(p.sqrt());
    QuantumChannel::new(2, 2, vec![k0, k1])
}

/// `Tr_X` on `X ⊗ B`, with Kraus operators `<x| ⊗ I_B`.
pub fn partial_trace_channel(d_x: usize, d_b: usize) -> Result<QuantumChannel> {
    if d_x == 0 || d_b == 0 {
        return Err(Error::param("dimensions must be positive"));
    }
    let kraus = (0..d_x)
        .map(|x| {
            ComplexMatrix::from_fn(d_b, d_x * d_b, |b, col| {
                if col == x * d_b + b {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
        })
        .collect();
    QuantumChannel::new(d_x * d_b, d_b, kraus)
}

/// Checks `p[y][x]` is column-stochastic; returns `(|X|, |Y|)`.
pub fn check_stochastic(p_y_given_x: &[Vec<f64>]) -> Result<(usize, usize)> {
    let ny = p_y_given_x.len();
    let nx = p_y_given_x.first().map_or(0, |r| r.len());
    if ny == 0 || nx == 0 {
        return Err(Error::param("empty stochastic matrix"));
    }
    if p_y_given_x.iter().any(|r| r.len() != nx) {
        return Err(Error::param("ragged stochastic matrix"));
    }
    for x in 0..nx {
        let mut s = 0.0;
        for (y, row) in p_y_given_x.iter().enumerate() {
            let v = row[x];
            if !(0.0..=1.0 + PROB_TOL).contains(&v) || !v.is_finite() {
                return Err(Error::param(format!("p({y}|{x}) = {v} is not a probability")));
            }
            s += v;
        }
        if (s - 1.0).abs() > PROB_TOL {
            return Err(Error::param(format!("column {x} sums to {s}")));
        }
    }
    Ok((nx, ny))
}

/// Classical channel with one Kraus operator `√p(y|x) |y><x|` per pair with `p(y|x) > 0`.
pub fn classical_channel(p_y_given_x: &[Vec<f64>]) -> Result<QuantumChannel> {
    let (nx, ny) = check_stochastic(p_y_given_x)?;
    let mut kraus = Vec::new();
    for x in 0..nx {
        for (y, row) in p_y_given_x.iter().enumerate() {
            if row[x] > 0.0 {
                kraus.push(ComplexMatrix::unit(ny, nx, y, x).scale_real(row[x].sqrt()));
            }
        }
    }
    QuantumChannel::new(nx, ny, kraus)
}

/// Binary symmetric channel as a column-stochastic matrix.
pub fn binary_symmetric(flip: f64) -> Vec<Vec<f64>> {
    vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]]
}

/// Search-oracle channel on `N` indices: `K_i = |b_i><i|` where `b_i = 1` exactly for the
/// marked index. `marked` is a 1-based label, so `|marked>` is basis vector `marked - 1`.
pub fn search_channel(n: usize, marked: usize) -> Result<QuantumChannel> {
    if n < 2 {
        return Err(Error::param(format!("search needs N >= 2, got {n}")));
    }
    if marked == 0 || marked > n {
        return Err(Error::param(format!("marked label {marked} outside 1..={n}")));
    }
    let kraus = (0..n)
        .map(|i| {
            let b = usize::from(i == marked - 1);
            ComplexMatrix::unit(2, n, b, i)
        })
        .collect();
    QuantumChannel::new(n, 2, kraus)
}
