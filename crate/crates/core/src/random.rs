//! Seeded random instances: Haar-like unitaries, states, channels and stochastic matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> InstanceRng {
    let mut r = rng(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Orthonormalizes the columns of a Gaussian matrix (modified Gram–Schmidt, twice).
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        let g = ginibre(rows, cols, rng);
        let mut cols_v: Vec<Vec<C64>> = (0..cols).map(|j| g.col(j)).collect();
        let mut ok = true;
        for j in 0..cols {
            for _ in 0..2 {
                for i in 0..j {
                    let (head, tail) = cols_v.split_at_mut(j);
                    let p: C64 = head[i].iter().zip(&tail[0]).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                        *x -= p * y;
                    }
                }
            }
            let n = crate::linalg::vec_norm(&cols_v[j]);
            if n < 1e-8 {
                ok = false;
                break;
            }
            for x in &mut cols_v[j] {
                *x /= n;
            }
        }
        if ok {
            let mut m = ComplexMatrix::zeros(rows, cols);
            for (j, v) in cols_v.iter().enumerate() {
                m.set_col(j, v);
            }
            return m;
        }
    }
}

pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    random_isometry(d, d, rng)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// Wishart state mixed with `I/d` by weight `floor`, so every eigenvalue is at least
/// `floor / d`.
pub fn random_state(d: usize, floor: f64, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let w = g.matmul(&g.adjoint());
    let w = w.scale_real(1.0 / w.trace().re);
    let m = &w.scale_real(1.0 - floor) + &ComplexMatrix::identity(d).scale_real(floor / d as f64);
    DensityMatrix::new(m.hermitian_part()).expect("mixture of states")
}

/// State with a prescribed spectrum in a random eigenbasis.
pub fn random_state_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> DensityMatrix {
    let u = random_unitary(spectrum.len(), rng);
    let m = u.conjugate(&ComplexMatrix::from_real_diag(spectrum));
    DensityMatrix::new(m.hermitian_part()).expect("valid spectrum")
}

pub fn random_pure_state(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    random_isometry(d, 1, rng).col(0)
}

/// Channel whose Stinespring isometry is a random `(n_kraus·d_out) x d_in` isometry.
pub fn random_channel(
    d_in: usize,
    d_out: usize,
    n_kraus: usize,
    rng: &mut impl Rng,
) -> QuantumChannel {
    let v = random_isometry(n_kraus * d_out, d_in, rng);
    let kraus = (0..n_kraus)
        .map(|e| v.submatrix(e * d_out, 0, d_out, d_in))
        .collect();
    QuantumChannel::new(d_in, d_out, kraus).expect("isometry blocks form a channel")
}

/// Column-stochastic matrix `p[y][x]` with Dirichlet(1)-distributed columns.
pub fn random_stochastic(nx: usize, ny: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut p = vec![vec![0.0; nx]; ny];
    for x in 0..nx {
        let w: Vec<f64> = (0..ny)
            .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
            .collect();
        let s: f64 = w.iter().sum();
        for y in 0..ny {
            p[y][x] = w[y] / s;
        }
    }
    p
}

pub fn random_distribution(n: usize, floor: f64, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
        .collect();
    let s: f64 = w.iter().sum();
    w.iter()
        .map(|x| (1.0 - floor) * x / s + floor / n as f64)
        .collect()
}
