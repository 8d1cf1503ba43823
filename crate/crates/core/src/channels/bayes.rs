use super::constructors::check_stochastic;
use crate::error::{Error, Result};

/// Classical reversal channel `p(x|y)`, stored as `matrix[x][y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesReversal {
    pub matrix: Vec<Vec<f64>>,
    /// Output marginal `p_Y`.
    pub p_y: Vec<f64>,
    /// Outputs with `p_Y(y) = 0`; their columns are left as zeros.
    pub excluded_outputs: Vec<usize>,
}

impl BayesReversal {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.matrix[x][y]
    }
}

/// `p(x|y) = p(x) p(y|x) / Σ_x' p(x') p(y|x')` with `p_y_given_x[y][x]`.
pub fn classical_bayes_reversal(p_x: &[f64], p_y_given_x: &[Vec<f64>]) -> Result<BayesReversal> {
    let (nx, ny) = check_stochastic(p_y_given_x)?;
    if p_x.len() != nx {
        return Err(Error::dims(format!(
            "prior has {} entries, channel has {nx} inputs",
            p_x.len()
        )));
    }
    let total: f64 = p_x.iter().sum();
    if p_x.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::param("prior is not a probability distribution"));
    }
    let p_y: Vec<f64> = (0..ny)
        .map(|y| (0..nx).map(|x| p_x[x] * p_y_given_x[y][x]).sum())
        .collect();
    let mut matrix = vec![vec![0.0; ny]; nx];
    let mut excluded_outputs = Vec::new();
    for y in 0..ny {
        if p_y[y] <= 0.0 {
            excluded_outputs.push(y);
            continue;
        }
        for x in 0..nx {
            matrix[x][y] = p_x[x] * p_y_given_x[y][x] / p_y[y];
        }
    }
    Ok(BayesReversal {
        matrix,
        p_y,
        excluded_outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::binary_symmetric;

    #[test]
    fn uniform_identity_reverses_to_identity() {
        let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let r = classical_bayes_reversal(&[1.0 / 3.0; 3], &id).unwrap();
        assert_eq!(r.matrix, id);
    }

    #[test]
    fn bsc_uniform_prior() {
        let r = classical_bayes_reversal(&[0.5, 0.5], &binary_symmetric(0.1)).unwrap();
        assert!((r.get(0, 0) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn bsc_skewed_prior() {
        let r = classical_bayes_reversal(&[0.8, 0.2], &binary_symmetric(0.1)).unwrap();
        assert!((r.get(0, 0) - 0.72 / 0.74).abs() < 1e-15);
        // perfect recovery of the prior from p_Y
        for x in 0..2 {
            let back: f64 = (0..2).map(|y| r.get(x, y) * r.p_y[y]).sum();
            assert!((back - [0.8, 0.2][x]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_probability_output_is_excluded() {
        let ch = vec![vec![1.0, 1.0], vec![0.0, 0.0]];
        let r = classical_bayes_reversal(&[0.3, 0.7], &ch).unwrap();
        assert_eq!(r.excluded_outputs, vec![1]);
        assert_eq!(r.get(0, 1), 0.0);
    }
}
