//! Ergodic wide-sense-stationary sparse source: autocorrelation, its
//! Toeplitz matrix, power spectrum, minimum-eigenvalue bounds and sampling.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{periodic_grid, Matrix, RandomStream, MAX_DIM};
use crate::spectrum::SpectrumSummary;

/// Default number of spectrum grid points.
pub const DEFAULT_SPECTRUM_GRID: usize = 4096;

/// Dimensions of the reduced decoding game in which `k − m` support
/// locations are revealed and `m` remain unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedProblem {
    pub p: usize,
    pub k: usize,
    pub m: usize,
    pub n: usize,
}

impl ReducedProblem {
    pub fn new(p: usize, k: usize, m: usize, n: usize) -> Result<Self> {
        if !(1 <= m && m <= k && k <= p) {
            return Err(Error::domain(format!("need 1 <= m <= k <= p, got p={p} k={k} m={m}")));
        }
        if n == 0 {
            return Err(Error::domain("measurement count n must be at least 1"));
        }
        Ok(Self { p, k, m, n })
    }

    /// Problem with no side information whose reduced dimension is `p_prime`.
    pub fn from_reduced(p_prime: usize, m: usize, n: usize) -> Result<Self> {
        Self::new(p_prime, m, m, n)
    }

    /// `p′ = p − k + m`.
    pub fn p_prime(&self) -> usize {
        self.p - self.k + self.m
    }

    /// `q = m / p′`, the per-index probability of a nonzero.
    pub fn q(&self) -> f64 {
        self.m as f64 / self.p_prime() as f64
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn with_m(self, m: usize) -> Result<Self> {
        Self::new(self.p, self.k, m, self.n)
    }
}

/// Worst-case signal: every nonzero has magnitude `lambda`, negative with
/// probability `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    pub lambda: f64,
    pub xi: f64,
}

impl SignalModel {
    pub fn new(lambda: f64, xi: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::domain(format!("xi must lie in [0, 1], got {xi}")));
        }
        Ok(Self { lambda, xi })
    }

    /// Unipolar (ξ = 0) model from `λ²`.
    pub fn worst_case(lambda_sq: f64) -> Result<Self> {
        if !(lambda_sq >= 0.0) {
            return Err(Error::domain(format!("lambda^2 must be >= 0, got {lambda_sq}")));
        }
        Self::new(lambda_sq.sqrt(), 0.0)
    }

    pub fn lambda_sq(&self) -> f64 {
        self.lambda * self.lambda
    }

    /// `k λ²`, the SNR of the full problem at unit noise variance.
    pub fn snr(&self, k: usize) -> f64 {
        k as f64 * self.lambda_sq()
    }

    /// `4ξ² − 4ξ + 1 = (1 − 2ξ)²`.
    pub fn sign_coherence(&self) -> f64 {
        4.0 * self.xi * self.xi - 4.0 * self.xi + 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseVector {
    pub values: Vec<f64>,
    pub support: Vec<usize>,
}

/// Ensemble autocorrelation at lag `tau`; zero for `|tau| >= p′`.
pub fn autocorrelation(rp: &ReducedProblem, sm: &SignalModel, tau: i64) -> f64 {
    let pp = rp.p_prime() as f64;
    let q = rp.q();
    let lag = tau.unsigned_abs() as f64;
    if tau == 0 {
        q * sm.lambda_sq()
    } else if lag < pp {
        (pp - lag) / pp * q * q * sm.lambda_sq() * sm.sign_coherence()
    } else {
        0.0
    }
}

/// `r(0), r(1), …, r(p′−1)`.
pub fn autocorrelation_sequence(rp: &ReducedProblem, sm: &SignalModel) -> Vec<f64> {
    (0..rp.p_prime() as i64).map(|t| autocorrelation(rp, sm, t)).collect()
}

/// Symmetric Toeplitz matrix with first row `r(0..p′)`.
pub fn toeplitz_autocorrelation(rp: &ReducedProblem, sm: &SignalModel) -> Result<Matrix> {
    let pp = rp.p_prime();
    if pp > MAX_DIM {
        return Err(Error::domain(format!("p' = {pp} exceeds dimension cap {MAX_DIM}")));
    }
    let r = autocorrelation_sequence(rp, sm);
    Ok(Matrix::from_fn(pp, pp, |i, j| r[i.abs_diff(j)]))
}

/// Finite Fourier sum `Σ_{|τ|<p′} r(τ) cos(ωτ)`.
pub fn spectrum_at(r: &[f64], omega: f64) -> f64 {
    let tail: f64 = r.iter().enumerate().skip(1).map(|(t, v)| v * (omega * t as f64).cos()).sum();
    r[0] + 2.0 * tail
}

/// Exact DTFT of the autocorrelation on a uniform grid of `grid_size`
/// points, with the infimum refined at the Fejér-kernel zeros `2πj/p′`.
pub fn power_spectrum_dtft(rp: &ReducedProblem, sm: &SignalModel, grid_size: usize) -> Result<SpectrumSummary> {
    let r = autocorrelation_sequence(rp, sm);
    let omega = periodic_grid(grid_size);
    let values = omega.iter().map(|&w| spectrum_at(&r, w)).collect();
    let mut summary = SpectrumSummary::from_samples(omega, values)?;
    let pp = rp.p_prime();
    summary.refine_infimum((1..pp).map(|j| spectrum_at(&r, TAU * j as f64 / pp as f64)));
    Ok(summary)
}

/// Closed-form spectrum with the squared Dirichlet-type kernel
/// `[sin(ω(p′+½))/sin(ω/2)]²`; the kernel's limit `(2p′+1)²` is used where
/// `sin(ω/2)` vanishes.
pub fn power_spectrum_paper(rp: &ReducedProblem, sm: &SignalModel, omega: f64) -> f64 {
    let pp = rp.p_prime() as f64;
    let half = (0.5 * omega).sin();
    let kernel =
        if half.abs() < 1e-12 { (2.0 * pp + 1.0).powi(2) } else { ((omega * (pp + 0.5)).sin() / half).powi(2) };
    let ql2 = (rp.q() * sm.lambda).powi(2) * sm.sign_coherence();
    kernel * ql2 + rp.q() * sm.lambda_sq() - ql2
}

/// Zeros of the closed-form kernel in (0, 2π): `ω = 2πj/(2p′+1)`.
pub fn paper_kernel_zeros(rp: &ReducedProblem) -> Vec<f64> {
    let d = 2 * rp.p_prime() + 1;
    (1..d).map(|j| TAU * j as f64 / d as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDiscrepancy {
    /// max over the grid of |paper − dtft|
    pub max_abs: f64,
    /// `max_abs` divided by the dtft spectrum's maximum
    pub normalized: f64,
    /// paper / dtft at ω = π
    pub ratio_at_pi: f64,
}

/// Compare the closed-form spectrum against the exact DTFT.
pub fn spectrum_discrepancy(rp: &ReducedProblem, sm: &SignalModel, grid_size: usize) -> Result<SpectrumDiscrepancy> {
    let dtft = power_spectrum_dtft(rp, sm, grid_size)?;
    let max_abs = dtft
        .omega
        .iter()
        .zip(&dtft.values)
        .map(|(&w, &s)| (power_spectrum_paper(rp, sm, w) - s).abs())
        .fold(0.0, f64::max);
    let r = autocorrelation_sequence(rp, sm);
    let at_pi = spectrum_at(&r, std::f64::consts::PI);
    Ok(SpectrumDiscrepancy {
        max_abs,
        normalized: max_abs / dtft.max().abs().max(f64::MIN_POSITIVE),
        ratio_at_pi: power_spectrum_paper(rp, sm, std::f64::consts::PI) / at_pi,
    })
}

/// `[q − q²(4ξ²−4ξ+1)] λ²`, the spectrum infimum and a lower bound on every
/// eigenvalue of the Toeplitz autocorrelation matrix.
pub fn sigma_min_bound(rp: &ReducedProblem, sm: &SignalModel) -> f64 {
    let q = rp.q();
    (q - q * q * sm.sign_coherence()) * sm.lambda_sq()
}

/// Unipolar case of [`sigma_min_bound`]: `(1 − q) q λ²`.
pub fn sigma_min_worst_case(rp: &ReducedProblem, lambda_sq: f64) -> f64 {
    let q = rp.q();
    (1.0 - q) * q * lambda_sq
}

fn signed_magnitude(sm: &SignalModel, stream: &mut RandomStream) -> f64 {
    if stream.bernoulli(sm.xi) {
        -sm.lambda
    } else {
        sm.lambda
    }
}

/// Support drawn uniformly from the `C(p′, m)` subsets of size `m`; each
/// nonzero is `−λ` with probability ξ, independently.
pub fn sample_sparse_vector(rp: &ReducedProblem, sm: &SignalModel, stream: &mut RandomStream) -> SparseVector {
    let pp = rp.p_prime();
    let mut idx: Vec<usize> = (0..pp).collect();
    for i in 0..rp.m {
        let j = i + stream.below(pp - i);
        idx.swap(i, j);
    }
    let mut support = idx[..rp.m].to_vec();
    support.sort_unstable();
    let mut values = vec![0.0; pp];
    for &i in &support {
        values[i] = signed_magnitude(sm, stream);
    }
    SparseVector { values, support }
}

/// Each of the `p′` entries is nonzero independently with probability `q`.
/// This is the i.i.d. source whose ensemble autocorrelation is
/// [`autocorrelation`]; the support size is random.
pub fn sample_bernoulli_sparse_vector(
    rp: &ReducedProblem,
    sm: &SignalModel,
    stream: &mut RandomStream,
) -> SparseVector {
    let pp = rp.p_prime();
    let q = rp.q();
    let mut values = vec![0.0; pp];
    let mut support = Vec::new();
    for (i, v) in values.iter_mut().enumerate() {
        if stream.bernoulli(q) {
            *v = signed_magnitude(sm, stream);
            support.push(i);
        }
    }
    SparseVector { values, support }
}

/// `(1/p′) Σ_i β_i β_{i+τ}` over one realization.
pub fn windowed_autocorrelation(values: &[f64], tau: usize) -> f64 {
    let len = values.len();
    if tau >= len {
        return 0.0;
    }
    values[..len - tau].iter().zip(&values[tau..]).map(|(a, b)| a * b).sum::<f64>() / len as f64
}
