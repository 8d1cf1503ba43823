use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Trace-preservation tolerance for [`QuantumChannel`].
pub const TP_TOL: f64 = 1e-9;

/// Anything described by a finite Kraus list `K_i : C^dim_in -> C^dim_out`.
pub trait KrausMap {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn kraus(&self) -> &[ComplexMatrix];

    /// `Σ K_i ρ K_i†`
    fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.dim_in(), self.dim_in()) {
            return Err(Error::dims(format!(
                "input is {}x{}, map expects {}x{}",
                rho.rows(),
                rho.cols(),
                self.dim_in(),
                self.dim_in()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out(), self.dim_out());
        for k in self.kraus() {
            out = &out + &k.conjugate(rho);
        }
        Ok(out)
    }

    /// Hilbert–Schmidt adjoint `Σ K_i† ω K_i`.
    fn adjoint_apply(&self, omega: &ComplexMatrix) -> Result<ComplexMatrix> {
        if omega.shape() != (self.dim_out(), self.dim_out()) {
            return Err(Error::dims(format!(
                "adjoint input is {}x{}, map output is {}x{}",
                omega.rows(),
                omega.cols(),
                self.dim_out(),
                self.dim_out()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in(), self.dim_in());
        for k in self.kraus() {
            out = &out + &k.adjoint_matmul(&omega.matmul(k));
        }
        Ok(out)
    }

    /// `Σ K_i† K_i`
    fn gram(&self) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(self.dim_in(), self.dim_in());
        for k in self.kraus() {
            g = &g + &k.adjoint_matmul(k);
        }
        g
    }

    /// Frobenius norm of `Σ K_i†K_i - I`.
    fn trace_preservation_defect(&self) -> f64 {
        (&self.gram() - &ComplexMatrix::identity(self.dim_in())).frobenius_norm()
    }

    fn kraus_count(&self) -> usize {
        self.kraus().len()
    }
}

fn check_kraus(dim_in: usize, dim_out: usize, kraus: &[ComplexMatrix]) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::param("a map needs at least one Kraus operator"));
    }
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::param("dimensions must be positive"));
    }
    for (i, k) in kraus.iter().enumerate() {
        if k.shape() != (dim_out, dim_in) {
            return Err(Error::dims(format!(
                "Kraus operator {i} is {}x{}, expected {dim_out}x{dim_in}",
                k.rows(),
                k.cols()
            )));
        }
        if k.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param(format!("Kraus operator {i} has non-finite entries")));
        }
    }
    Ok(())
}

/// Completely positive map without a trace-preservation requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CpMap {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        check_kraus(dim_in, dim_out, &kraus)?;
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (o, i) = kraus
            .first()
            .map(|k| k.shape())
            .ok_or_else(|| Error::param("empty Kraus list"))?;
        Self::new(i, o, kraus)
    }

    /// Promotes to a channel if trace preserving within `tol`.
    pub fn into_channel(self, tol: f64) -> Result<QuantumChannel> {
        let defect = self.trace_preservation_defect();
        if defect > tol {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(QuantumChannel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus,
        })
    }

    /// `self ∘ first`
    pub fn compose_after(&self, first: &impl KrausMap) -> Result<CpMap> {
        compose(first, self)
    }
}

impl KrausMap for CpMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }
    fn dim_out(&self) -> usize {
        self.dim_out
    }
    fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }
}

/// Completely positive trace-preserving map `A -> B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        CpMap::new(dim_in, dim_out, kraus)?.into_channel(TP_TOL)
    }

    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        CpMap::from_kraus(kraus)?.into_channel(TP_TOL)
    }

    pub fn as_cp_map(&self) -> CpMap {
        CpMap {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.clone(),
        }
    }

    /// Channel JSON: `{dim_in, dim_out, kraus: [[[re, im], ...], ...]}` with each Kraus
    /// operator flattened row-major.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl KrausMap for QuantumChannel {
    fn dim_in(&self) -> usize {
        self.dim_in
    }
    fn dim_out(&self) -> usize {
        self.dim_out
    }
    fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }
}

/// Kraus list of `second ∘ first`.
pub fn compose(first: &impl KrausMap, second: &impl KrausMap) -> Result<CpMap> {
    if first.dim_out() != second.dim_in() {
        return Err(Error::dims(format!(
            "cannot compose map with output {} into map with input {}",
            first.dim_out(),
            second.dim_in()
        )));
    }
    let mut kraus = Vec::with_capacity(first.kraus_count() * second.kraus_count());
    for b in second.kraus() {
        for a in first.kraus() {
            kraus.push(b.matmul(a));
        }
    }
    CpMap::new(first.dim_in(), second.dim_out(), kraus)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<ChannelFile> for QuantumChannel {
    type Error = Error;
    fn try_from(f: ChannelFile) -> Result<Self> {
        let kraus = f
            .kraus
            .into_iter()
            .map(|entries| {
                let data = entries.into_iter().map(|[re, im]| C64::new(re, im)).collect();
                ComplexMatrix::from_row_major(f.dim_out, f.dim_in, data)
            })
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(f.dim_in, f.dim_out, kraus)
    }
}

impl From<QuantumChannel> for ChannelFile {
    fn from(c: QuantumChannel) -> Self {
        ChannelFile {
            dim_in: c.dim_in,
            dim_out: c.dim_out,
            kraus: c
                .kraus
                .iter()
                .map(|k| k.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}
