//! Block-encodings: unitaries whose ancilla-zero block, scaled by `alpha`, is a target
//! operator up to a carried error certificate `delta`.
//!
//! Register convention: `ancilla ⊗ system`, with the all-zeros ancilla selecting the block.
//! For square encodings the block therefore occupies the first `dim_sys` rows and columns.
//! Rectangular blocks (used by the Petz isometry) are described by explicit lists of the
//! global basis indices that form the block's columns (`in_indices`) and rows
//! (`out_indices`).

mod circuit;
mod purify;

pub use circuit::{digits, embedding, from_digits, Circuit, Factor};
pub use purify::{purifier, purifier_from_vector, purification_vector};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, sqrt_psd, ComplexMatrix};

/// Unitarity tolerance for constructed encodings.
pub const UNITARY_TOL: f64 = 1e-9;

/// Common interface of dense and structured block-encodings.
pub trait BlockOperator {
    /// Dimension of the space the unitary acts on.
    fn dim(&self) -> usize;
    fn in_indices(&self) -> Vec<usize>;
    fn out_indices(&self) -> Vec<usize>;
    fn alpha(&self) -> f64;
    fn delta(&self) -> f64;
    /// Modeled uses of the underlying primitive unitaries.
    fn query_cost(&self) -> usize;
    /// `U X` for a `dim x k` matrix `X`.
    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix;
    /// `U† X`
    fn apply_adjoint(&self, x: &ComplexMatrix) -> ComplexMatrix;

    /// Unscaled block `Π_out U Π_in`.
    fn raw_block(&self) -> ComplexMatrix {
        let cols = self.apply(&embedding(self.dim(), &self.in_indices()));
        let rows = self.out_indices();
        let all: Vec<usize> = (0..cols.cols()).collect();
        cols.select(&rows, &all)
    }

    /// `alpha · Π_out U Π_in`
    fn encoded_block(&self) -> ComplexMatrix {
        self.raw_block().scale_real(self.alpha())
    }

    fn to_dense(&self) -> ComplexMatrix {
        self.apply(&ComplexMatrix::identity(self.dim()))
    }
}

/// Dense block-encoding.
#[derive(Clone, Debug)]
pub struct BlockEncoding {
    unitary: ComplexMatrix,
    alpha: f64,
    delta: f64,
    sys_in: usize,
    sys_out: usize,
    query_cost: usize,
}

impl BlockEncoding {
    /// Square encoding of a `dim_sys x dim_sys` operator.
    pub fn new(
        unitary: ComplexMatrix,
        alpha: f64,
        delta: f64,
        dim_sys: usize,
        query_cost: usize,
    ) -> Result<Self> {
        if dim_sys == 0 || unitary.rows() % dim_sys != 0 {
            return Err(Error::dims(format!(
                "unitary of dimension {} has no ancilla ⊗ system split with dim_sys = {dim_sys}",
                unitary.rows()
            )));
        }
        Self::rectangular(unitary, alpha, delta, dim_sys, dim_sys, query_cost)
    }

    /// Encoding whose block is the top-left `sys_out x sys_in` corner.
    pub fn rectangular(
        unitary: ComplexMatrix,
        alpha: f64,
        delta: f64,
        sys_in: usize,
        sys_out: usize,
        query_cost: usize,
    ) -> Result<Self> {
        let defect = unitary.unitarity_defect();
        if defect > UNITARY_TOL * (unitary.rows() as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary { defect });
        }
        if sys_in > unitary.rows() || sys_out > unitary.rows() {
            return Err(Error::dims("block larger than the unitary"));
        }
        if !(alpha >= 0.0) || !(delta >= 0.0) {
            return Err(Error::param("alpha and delta must be non-negative"));
        }
        Ok(Self {
            unitary,
            alpha,
            delta,
            sys_in,
            sys_out,
            query_cost,
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn dim_sys(&self) -> usize {
        self.sys_in
    }

    pub fn dim_anc(&self) -> usize {
        self.unitary.rows() / self.sys_in
    }

    pub fn is_square_block(&self) -> bool {
        self.sys_in == self.sys_out
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_query_cost(mut self, q: usize) -> Self {
        self.query_cost = q;
        self
    }

    /// Identity on the system with a single trivial ancilla.
    pub fn identity(dim_sys: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim_sys), 1.0, 0.0, dim_sys, 0).expect("identity")
    }

    /// Densifies any block operator whose in/out indices are arbitrary, permuting the basis
    /// so that the block becomes the top-left corner.
    pub fn from_operator(op: &impl BlockOperator) -> Result<Self> {
        let dim = op.dim();
        let reorder = |first: Vec<usize>| {
            let mut seen = vec![false; dim];
            for &i in &first {
                seen[i] = true;
            }
            let mut order = first;
            order.extend((0..dim).filter(|&i| !seen[i]));
            order
        };
        let in_order = reorder(op.in_indices());
        let out_order = reorder(op.out_indices());
        let dense = op.to_dense();
        let u = dense.select(&out_order, &in_order);
        Self::rectangular(
            u,
            op.alpha(),
            op.delta(),
            op.in_indices().len(),
            op.out_indices().len(),
            op.query_cost(),
        )
    }
}

impl BlockOperator for BlockEncoding {
    fn dim(&self) -> usize {
        self.unitary.rows()
    }
    fn in_indices(&self) -> Vec<usize> {
        (0..self.sys_in).collect()
    }
    fn out_indices(&self) -> Vec<usize> {
        (0..self.sys_out).collect()
    }
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn delta(&self) -> f64 {
        self.delta
    }
    fn query_cost(&self) -> usize {
        self.query_cost
    }
    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.unitary.matmul(x)
    }
    fn apply_adjoint(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.unitary.adjoint_matmul(x)
    }
    fn raw_block(&self) -> ComplexMatrix {
        self.unitary.submatrix(0, 0, self.sys_out, self.sys_in)
    }
    fn to_dense(&self) -> ComplexMatrix {
        self.unitary.clone()
    }
}

/// Structured block-encoding backed by a [`Circuit`].
#[derive(Clone, Debug)]
pub struct BlockCircuit {
    pub circuit: Circuit,
    pub in_indices: Vec<usize>,
    pub out_indices: Vec<usize>,
    pub alpha: f64,
    pub delta: f64,
    pub query_cost: usize,
}

impl BlockOperator for BlockCircuit {
    fn dim(&self) -> usize {
        self.circuit.dim()
    }
    fn in_indices(&self) -> Vec<usize> {
        self.in_indices.clone()
    }
    fn out_indices(&self) -> Vec<usize> {
        self.out_indices.clone()
    }
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn delta(&self) -> f64 {
        self.delta
    }
    fn query_cost(&self) -> usize {
        self.query_cost
    }
    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.circuit.apply(x)
    }
    fn apply_adjoint(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.circuit.apply_adjoint(x)
    }
}

/// `SWAP` on `C^d ⊗ C^d`.
pub fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (a, b) = (r / d, r % d);
        if c == b * d + a {
            crate::linalg::ONE
        } else {
            crate::linalg::ZERO
        }
    })
}

/// Exact block-encoding of `σ_A` from a purification unitary `U^σ` on `R ⊗ A` (with
/// `U^σ|0>_R|0>_A` purifying `σ_A`):
/// `V^σ = (U^σ)† (I_R ⊗ SWAP_{AA'}) U^σ`, acting on `R ⊗ A ⊗ A'` with `A'` the system.
pub fn from_purification(u_sigma: &ComplexMatrix, dim_sys: usize) -> Result<BlockEncoding> {
    let n = u_sigma.rows();
    if !u_sigma.is_square() || dim_sys == 0 || n % dim_sys != 0 {
        return Err(Error::dims(format!(
            "purifier of dimension {n} is not R ⊗ A with d_A = {dim_sys}"
        )));
    }
    let defect = u_sigma.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let d_r = n / dim_sys;
    let dims = [d_r, dim_sys, dim_sys];
    let total = n * dim_sys;
    let u = Factor::on_registers(&dims, &[0, 1], u_sigma.clone());
    let s = Factor::on_registers(&dims, &[1, 2], swap(dim_sys));
    let mut m = ComplexMatrix::identity(total);
    u.apply(&mut m);
    s.apply(&mut m);
    u.apply_adjoint(&mut m);
    BlockEncoding::new(m, 1.0, 0.0, dim_sys, 2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// `‖target - encoded_block‖` in spectral norm.
    pub defect: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Audits the carried certificate: passes when the measured defect is at most
/// `max(tol, delta)`.
pub fn verify(be: &impl BlockOperator, target: &ComplexMatrix, tol: f64) -> Result<VerifyReport> {
    let block = be.encoded_block();
    if block.shape() != target.shape() {
        return Err(Error::dims(format!(
            "block is {}x{}, target is {}x{}",
            block.rows(),
            block.cols(),
            target.rows(),
            target.cols()
        )));
    }
    let defect = spectral_norm(&(&block - target));
    let threshold = tol.max(be.delta());
    Ok(VerifyReport {
        defect,
        threshold,
        passed: defect <= threshold,
    })
}

/// Unitary dilation `[[C, √(I - CC†)], [√(I - C†C), -C†]]` of a contraction.
pub fn dilate_contraction(c: &ComplexMatrix) -> Result<BlockEncoding> {
    if !c.is_square() {
        return Err(Error::dims("dilation needs a square contraction"));
    }
    let norm = spectral_norm(c);
    if norm > 1.0 + 1e-12 {
        return Err(Error::NormExceeded { norm });
    }
    let n = c.rows();
    let id = ComplexMatrix::identity(n);
    let cc = c.matmul(&c.adjoint()).hermitian_part();
    let ctc = c.adjoint_matmul(c).hermitian_part();
    let top_right = sqrt_psd(&(&id - &cc))?;
    let bottom_left = sqrt_psd(&(&id - &ctc))?;
    let minus_cdag = c.adjoint().scale_real(-1.0);
    let u = ComplexMatrix::from_fn(2 * n, 2 * n, |r, col| match (r < n, col < n) {
        (true, true) => c[(r, col)],
        (true, false) => top_right[(r, col - n)],
        (false, true) => bottom_left[(r - n, col)],
        (false, false) => minus_cdag[(r - n, col - n)],
    });
    BlockEncoding::new(u, 1.0, 0.0, n, 0)
}

/// Encoding of `A1 ⊗ A2` with ancilla order `(a1, a2)` and system order `(s1, s2)`.
pub fn tensor(a: &BlockEncoding, b: &BlockEncoding) -> Result<BlockEncoding> {
    if !a.is_square_block() || !b.is_square_block() {
        return Err(Error::dims("tensor needs square blocks"));
    }
    let (a1, s1, a2, s2) = (a.dim_anc(), a.dim_sys(), b.dim_anc(), b.dim_sys());
    // registers (a1, a2, s1, s2)
    let dims = [a1, a2, s1, s2];
    let total = a1 * a2 * s1 * s2;
    let fa = Factor::on_registers(&dims, &[0, 2], a.unitary.clone());
    let fb = Factor::on_registers(&dims, &[1, 3], b.unitary.clone());
    let mut m = ComplexMatrix::identity(total);
    fa.apply(&mut m);
    fb.apply(&mut m);
    BlockEncoding::new(
        m,
        a.alpha * b.alpha,
        a.alpha * b.delta + b.alpha * a.delta + a.delta * b.delta,
        s1 * s2,
        a.query_cost + b.query_cost,
    )
}

/// Encoding of the product `A1 A2` with ancilla order `(a1, a2)`.
pub fn compose(a: &BlockEncoding, b: &BlockEncoding) -> Result<BlockEncoding> {
    if !a.is_square_block() || !b.is_square_block() || a.dim_sys() != b.dim_sys() {
        return Err(Error::dims(format!(
            "compose needs equal system dimensions, got {} and {}",
            a.dim_sys(),
            b.dim_sys()
        )));
    }
    let (a1, a2, s) = (a.dim_anc(), b.dim_anc(), a.dim_sys());
    let dims = [a1, a2, s];
    let fa = Factor::on_registers(&dims, &[0, 2], a.unitary.clone());
    let fb = Factor::on_registers(&dims, &[1, 2], b.unitary.clone());
    let mut m = ComplexMatrix::identity(a1 * a2 * s);
    fb.apply(&mut m);
    fa.apply(&mut m);
    BlockEncoding::new(
        m,
        a.alpha * b.alpha,
        a.alpha * b.delta + b.alpha * a.delta,
        s,
        a.query_cost + b.query_cost,
    )
}

/// Encoding of an arbitrary operator by scaling it to a contraction and dilating.
pub fn encode_operator(a: &ComplexMatrix, alpha: f64) -> Result<BlockEncoding> {
    if alpha <= 0.0 {
        return Err(Error::param("alpha must be positive"));
    }
    let be = dilate_contraction(&a.scale_real(1.0 / alpha))?;
    Ok(BlockEncoding { alpha, ..be })
}
