use crate::linalg::{ComplexMatrix, C64, ZERO};

/// A unitary that acts as `local` on disjoint groups ("orbits") of basis indices and as the
/// identity on every index outside the orbits.
///
/// Orbit `o` lists, in local order, the global indices that `local` mixes. Every orbit has
/// length `local.rows()`.
#[derive(Clone, Debug)]
pub struct Factor {
    local: ComplexMatrix,
    orbits: Vec<Vec<usize>>,
}

/// Mixed-radix digits of `index`, most significant register first.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

impl Factor {
    pub fn from_orbits(local: ComplexMatrix, orbits: Vec<Vec<usize>>) -> Self {
        debug_assert!(orbits.iter().all(|o| o.len() == local.rows()));
        Self { local, orbits }
    }

    /// `local` on the registers `targets` (in that order) of a tensor product with register
    /// dimensions `dims`.
    pub fn on_registers(dims: &[usize], targets: &[usize], local: ComplexMatrix) -> Self {
        let total: usize = dims.iter().product();
        let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
        let local_dim: usize = tdims.iter().product();
        assert_eq!(local.rows(), local_dim, "local operator dimension");
        let mut orbits = Vec::with_capacity(total / local_dim);
        for base in 0..total {
            let d = digits(base, dims);
            if targets.iter().any(|&t| d[t] != 0) {
                continue;
            }
            let orbit = (0..local_dim)
                .map(|l| {
                    let ld = digits(l, &tdims);
                    let mut full = d.clone();
                    for (&t, &v) in targets.iter().zip(&ld) {
                        full[t] = v;
                    }
                    from_digits(&full, dims)
                })
                .collect();
            orbits.push(orbit);
        }
        Self { local, orbits }
    }

    pub fn local(&self) -> &ComplexMatrix {
        &self.local
    }

    fn apply_with(&self, x: &mut ComplexMatrix, op: &ComplexMatrix) {
        let m = op.rows();
        let k = x.cols();
        let mut buf = vec![ZERO; m * k];
        for orbit in &self.orbits {
            for v in buf.iter_mut() {
                *v = ZERO;
            }
            for (i, _) in orbit.iter().enumerate() {
                for (j, &gj) in orbit.iter().enumerate() {
                    let a = op[(i, j)];
                    if a == ZERO {
                        continue;
                    }
                    let row = x.row(gj);
                    for (b, &xv) in buf[i * k..(i + 1) * k].iter_mut().zip(row) {
                        *b += a * xv;
                    }
                }
            }
            for (i, &gi) in orbit.iter().enumerate() {
                for col in 0..k {
                    x[(gi, col)] = buf[i * k + col];
                }
            }
        }
    }

    /// `x <- F x` (rows of `x` are global basis indices).
    pub fn apply(&self, x: &mut ComplexMatrix) {
        self.apply_with(x, &self.local)
    }

    pub fn apply_adjoint(&self, x: &mut ComplexMatrix) {
        self.apply_with(x, &self.local.adjoint())
    }

    pub fn to_dense(&self, dim: usize) -> ComplexMatrix {
        let mut x = ComplexMatrix::identity(dim);
        self.apply(&mut x);
        x
    }
}

/// Product of factors, applied first-to-last: `U = F_n ⋯ F_1`.
#[derive(Clone, Debug)]
pub struct Circuit {
    dim: usize,
    factors: Vec<Factor>,
}

impl Circuit {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            factors: Vec::new(),
        }
    }

    pub fn then(mut self, f: Factor) -> Self {
        self.factors.push(f);
        self
    }

    pub fn push(&mut self, f: Factor) {
        self.factors.push(f);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.rows(), self.dim);
        let mut y = x.clone();
        for f in &self.factors {
            f.apply(&mut y);
        }
        y
    }

    pub fn apply_adjoint(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.rows(), self.dim);
        let mut y = x.clone();
        for f in self.factors.iter().rev() {
            f.apply_adjoint(&mut y);
        }
        y
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        self.apply(&ComplexMatrix::identity(self.dim))
    }
}

/// Columns `e_i` for the listed indices.
pub fn embedding(dim: usize, indices: &[usize]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, indices.len());
    for (j, &i) in indices.iter().enumerate() {
        m[(i, j)] = C64::new(1.0, 0.0);
    }
    m
}
