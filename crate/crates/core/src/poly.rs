//! Bounded Chebyshev approximations of `x^{-1/2}` and `x^{1/2}` on `[θ, 1]`.
//!
//! Each target is an entire function built from a Gaussian-smoothed `max(x, θ/2)` and a
//! smoothed step at `3θ/4`. It is interpolated at Chebyshev nodes and truncated at the
//! smallest degree whose coefficient tail meets the requested accuracy. Certificates are
//! the tail sum plus the target's own deviation from the ideal function, measured on a
//! dense grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points in the certification grids.
pub const CERT_GRID: usize = 20_001;
const MIN_NODES: usize = 256;
const MAX_NODES: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyKind {
    InvSqrt,
    Sqrt,
    SqrtThresholded,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevPoly {
    pub kind: PolyKind,
    /// `p(x) = Σ_j coeffs[j] T_j(x)`.
    pub coeffs: Vec<f64>,
    pub degree: usize,
    pub theta: f64,
    pub delta: f64,
    /// Bound on `|p|` over `[-1, 1]`.
    pub cap: f64,
    /// Bound on `|p - f|` over `[θ, 1]` with `f` the ideal power function.
    pub sup_error_cert: f64,
    /// Bound on `|p(0)|`.
    pub zero_error_cert: f64,
    /// Bound on `|p(x) - √x|` over `[0, θ]` (square-root kinds only).
    pub low_error_cert: Option<f64>,
}

#[derive(Serialize)]
struct PolyDump<'a> {
    degree: usize,
    theta: f64,
    delta: f64,
    coeffs: &'a [f64],
    cap: f64,
    sup_error_cert: f64,
}

fn std_normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Smooth targets shared by the three constructions.
#[derive(Clone, Copy, Debug)]
struct Smoothing {
    theta: f64,
    w_max: f64,
    w_step: f64,
}

impl Smoothing {
    fn new(theta: f64, delta: f64) -> Self {
        let a = (2.0 * (1.0 / delta).ln()).sqrt().max(1.0);
        Self {
            theta,
            w_max: theta / (2.0 * a),
            w_step: theta / (4.0 * a),
        }
    }

    /// `θ/2 + SR(x - θ/2)` where `SR(t) = t Φ(t/w) + w φ(t/w)` smooths `max(t, 0)`.
    fn soft_max(&self, x: f64) -> f64 {
        let t = x - self.theta / 2.0;
        let s = t / self.w_max;
        self.theta / 2.0 + t * std_normal_cdf(s) + self.w_max * std_normal_pdf(s)
    }

    fn step(&self, x: f64) -> f64 {
        std_normal_cdf((x - 0.75 * self.theta) / self.w_step)
    }

    fn target(&self, kind: PolyKind, x: f64) -> f64 {
        match kind {
            PolyKind::InvSqrt => self.step(x) / self.soft_max(x).sqrt(),
            PolyKind::Sqrt => self.soft_max(x).sqrt(),
            PolyKind::SqrtThresholded => self.step(x) * self.soft_max(x).sqrt(),
            PolyKind::Custom => unreachable!("custom polynomials have no smooth target"),
        }
    }
}

fn ideal(kind: PolyKind, x: f64) -> f64 {
    match kind {
        PolyKind::InvSqrt => 1.0 / x.sqrt(),
        _ => x.sqrt(),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}

/// Coefficients of the degree `n-1` interpolant at the `n` first-kind Chebyshev nodes.
fn interpolate(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let cos_table: Vec<f64> = (0..4 * n).map(|m| (PI * m as f64 / (2 * n) as f64).cos()).collect();
    let values: Vec<f64> = (0..n).map(|k| f(cos_table[2 * k + 1])).collect();
    let mut coeffs = vec![0.0; n];
    for (j, cj) in coeffs.iter_mut().enumerate() {
        let mut s = 0.0;
        let mut idx = j;
        let stride = (2 * j) % (4 * n);
        for &v in &values {
            s += v * cos_table[idx];
            idx = (idx + stride) % (4 * n);
        }
        *cj = 2.0 * s / n as f64;
    }
    coeffs[0] /= 2.0;
    coeffs
}

fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Coefficients of `p'` in the Chebyshev basis.
fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * coeffs[k];
    }
    d[0] /= 2.0;
    d.truncate(n - 1);
    d
}

fn check_range(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= 0.5 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {v} must lie in (0, 1/2]")))
    }
}

fn build(kind: PolyKind, theta: f64, delta: f64, tail_target: f64) -> Result<ChebyshevPoly> {
    check_range("theta", theta)?;
    check_range("delta", delta)?;
    let sm = Smoothing::new(theta, delta);
    let f = |x: f64| sm.target(kind, x);

    let mut n = MIN_NODES;
    let (coeffs, allowance) = loop {
        let c = interpolate(f, n);
        let upper: f64 = c[n / 2..].iter().map(|x| x.abs()).sum();
        if upper <= 1e-3 * tail_target {
            break (c, upper);
        }
        if n >= MAX_NODES {
            return Err(Error::param(format!(
                "theta = {theta}, delta = {delta} needs more than {MAX_NODES} interpolation nodes"
            )));
        }
        n *= 2;
    };

    let mut degree = coeffs.len() - 1;
    let mut tail = allowance;
    while degree > 0 && tail + coeffs[degree].abs() <= tail_target {
        tail += coeffs[degree].abs();
        degree -= 1;
    }
    let truncated = coeffs[..=degree].to_vec();
    let slack = tail + allowance;

    let analytic = grid(theta, 1.0, CERT_GRID)
        .map(|x| (f(x) - ideal(kind, x)).abs())
        .fold(0.0, f64::max);
    let target_max = grid(-1.0, 1.0, CERT_GRID).map(|x| f(x).abs()).fold(0.0, f64::max);
    let poly_max = grid(-1.0, 1.0, CERT_GRID)
        .map(|x| clenshaw(&truncated, x).abs())
        .fold(0.0, f64::max);
    let low_error_cert = match kind {
        PolyKind::InvSqrt => None,
        _ => Some(
            grid(0.0, theta, CERT_GRID)
                .map(|x| (f(x) - x.sqrt()).abs())
                .fold(0.0, f64::max)
                + slack,
        ),
    };

    Ok(ChebyshevPoly {
        kind,
        coeffs: truncated,
        degree,
        theta,
        delta,
        cap: poly_max.max(target_max + slack),
        sup_error_cert: analytic + slack,
        zero_error_cert: f(0.0).abs() + slack,
        low_error_cert,
    })
}

/// `f̃₁ ≈ x^{-1/2}` on `[θ, 1]`, vanishing near 0, with `sup error ≤ δ/√θ` and `cap ≤ 2/√θ`.
pub fn approx_inv_sqrt(theta: f64, delta: f64) -> Result<ChebyshevPoly> {
    build(PolyKind::InvSqrt, theta, delta, delta / (2.0 * theta.sqrt()))
}

/// `f̃₂ ≈ x^{1/2}` on `[θ, 1]` with `sup error ≤ δ` and `cap ≤ 1 + δ`.
pub fn approx_sqrt(theta: f64, delta: f64) -> Result<ChebyshevPoly> {
    build(PolyKind::Sqrt, theta, delta, delta / 2.0)
}

/// Like [`approx_sqrt`], but also pushed to 0 below `θ/2`.
pub fn approx_sqrt_thresholded(theta: f64, delta: f64) -> Result<ChebyshevPoly> {
    build(PolyKind::SqrtThresholded, theta, delta, delta / 2.0)
}

impl ChebyshevPoly {
    /// Exact polynomial with the given Chebyshev coefficients.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("coefficients must be finite and non-empty"));
        }
        let cap = grid(-1.0, 1.0, CERT_GRID)
            .map(|x| clenshaw(&coeffs, x).abs())
            .fold(0.0, f64::max)
            .max(coeffs.iter().map(|c| c.abs()).sum::<f64>().min(f64::MAX));
        let zero = clenshaw(&coeffs, 0.0).abs();
        Ok(Self {
            kind: PolyKind::Custom,
            degree: coeffs.len() - 1,
            coeffs,
            theta: 0.0,
            delta: 0.0,
            cap,
            sup_error_cert: 0.0,
            zero_error_cert: zero,
            low_error_cert: None,
        })
    }

    /// `p(x) = x`.
    pub fn identity() -> Self {
        Self::from_coeffs(vec![0.0, 1.0]).expect("finite")
    }

    /// Clenshaw evaluation on `[-1, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::param(format!("x = {x} outside [-1, 1]")));
        }
        Ok(clenshaw(&self.coeffs, x))
    }

    /// Evaluation with `x` clamped into `[-1, 1]`.
    pub fn eval_clamped(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x.clamp(-1.0, 1.0))
    }

    /// Maximum of `|p'|` on a dense grid over `[0, 1]`.
    pub fn lipschitz(&self) -> f64 {
        let d = derivative(&self.coeffs);
        grid(0.0, 1.0, CERT_GRID)
            .map(|x| clenshaw(&d, x).abs())
            .fold(0.0, f64::max)
    }

    /// `degree / ((1/θ) ln(1/δ))`
    pub fn scaling_constant(&self) -> f64 {
        self.degree as f64 / ((1.0 / self.theta) * (1.0 / self.delta).ln())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PolyDump {
            degree: self.degree,
            theta: self.theta,
            delta: self.delta,
            coeffs: &self.coeffs,
            cap: self.cap,
            sup_error_cert: self.sup_error_cert,
        })?)
    }
}

/// Maximum deviation `|p(x) - f(x)|` over `points` equally spaced points of `[lo, hi]`
/// (endpoints included).
pub fn sup_error(
    p: &ChebyshevPoly,
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<f64> {
    if points < 2 || lo > hi {
        return Err(Error::param("need at least two grid points on a non-empty interval"));
    }
    grid(lo, hi, points).try_fold(0.0f64, |acc, x| Ok(acc.max((p.eval(x)? - f(x)).abs())))
}
