//! Wishart log-determinant expectations and the mutual-information lower
//! bound built from them.
//!
//! Three forms of `a = E ln det(X̃X̃ᵀ)` coexist:
//!
//! * [`wishart_logdet_paper_harmonic`]: `−nγ + Σ_j H_{p′−j}`, i.e. `Σ_j ψ(p′−j+1)`
//!   (chi-square terms treated with the complex-Wishart digamma convention);
//! * [`wishart_logdet_paper_binomial`] and [`wishart_logdet_exact_product`]:
//!   the two lines of the asymptotic simplification `Σ_j ln(p′−j)`;
//! * [`wishart_logdet_digamma_oracle`]: the exact real-Wishart expectation
//!   `Σ_j [ψ((p′−j+1)/2) + ln 2]`, which Monte Carlo draws must reproduce.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::special::{harmonic, ln_choose, ln_gamma, psi, EULER_GAMMA};
use crate::numerics::{lu_log_abs_det, spd_log_det, Matrix, RandomStream};

const LN_2: f64 = std::f64::consts::LN_2;
const DETERMINANT_REL_TOL: f64 = 1e-8;
const SINGULAR_JITTER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AVariant {
    PaperHarmonic,
    PaperBinomial,
    ExactProduct,
    DigammaOracle,
}

/// Quantities of the information-rate chain `L = (n/2) ln(1 + e^{(a+b)/n})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoRateBound {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub variant: AVariant,
}

fn check_strict_domain(p_prime: usize, n: usize) -> Result<()> {
    if n == 0 || n >= p_prime {
        return Err(Error::domain(format!("need 1 <= n <= p'-1, got p'={p_prime} n={n}")));
    }
    Ok(())
}

/// `−nγ + Σ_{j=1}^{n} Σ_{ℓ=1}^{p′−j} 1/ℓ`.
pub fn wishart_logdet_paper_harmonic(p_prime: usize, n: usize) -> Result<f64> {
    check_strict_domain(p_prime, n)?;
    let sum: f64 = (1..=n).map(|j| harmonic((p_prime - j) as u64)).sum();
    Ok(sum - n as f64 * EULER_GAMMA)
}

/// `ln C(p′−1, n−1) + ln Γ(n)`.
pub fn wishart_logdet_paper_binomial(p_prime: usize, n: usize) -> Result<f64> {
    check_strict_domain(p_prime, n)?;
    Ok(ln_choose((p_prime - 1) as u64, (n - 1) as u64) + ln_gamma(n as f64))
}

/// `Σ_{j=1}^{n} ln(p′ − j)`.
pub fn wishart_logdet_exact_product(p_prime: usize, n: usize) -> Result<f64> {
    check_strict_domain(p_prime, n)?;
    Ok((1..=n).map(|j| ((p_prime - j) as f64).ln()).sum())
}

/// `Σ_{j=1}^{n} [ψ((p′−j+1)/2) + ln 2]`: exact `E ln det` of an `n × n` real
/// Wishart matrix with `p′` degrees of freedom.
pub fn wishart_logdet_digamma_oracle(p_prime: usize, n: usize) -> Result<f64> {
    if n == 0 || n > p_prime {
        return Err(Error::domain(format!("need 1 <= n <= p', got p'={p_prime} n={n}")));
    }
    Ok((1..=n).map(|j| psi((p_prime - j + 1) as f64 / 2.0) + LN_2).sum())
}

/// `Σ_j [ψ(d) − ψ(d/2) − ln 2]` with `d = p′−j+1`: the expected offset of
/// the harmonic form above the real-Wishart value.
pub fn harmonic_convention_gap(p_prime: usize, n: usize) -> Result<f64> {
    check_strict_domain(p_prime, n)?;
    Ok((1..=n)
        .map(|j| {
            let d = (p_prime - j + 1) as f64;
            psi(d) - psi(d / 2.0) - LN_2
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl McEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var =
            if samples.len() > 1 { samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        Self { mean, std_error: (var / n).sqrt(), trials: samples.len() }
    }
}

fn gram_log_det(x: &Matrix) -> f64 {
    let mut g = x.gram_rows();
    match spd_log_det(&g) {
        Ok(v) => v,
        Err(_) => {
            g.add_scaled_identity(SINGULAR_JITTER);
            spd_log_det(&g).unwrap_or(f64::NEG_INFINITY)
        }
    }
}

/// Monte Carlo `E ln det(X Xᵀ)` over `n × p′` standard Gaussian `X`.
/// Trial `t` uses stream `(master_seed, t)`; samples are reduced in trial
/// order so the result does not depend on thread scheduling.
pub fn mc_wishart_logdet(p_prime: usize, n: usize, trials: usize, master_seed: u64) -> Result<McEstimate> {
    if n == 0 || n > p_prime {
        return Err(Error::domain(format!("need 1 <= n <= p', got p'={p_prime} n={n}")));
    }
    if trials < 100 {
        return Err(Error::domain(format!("need at least 100 trials, got {trials}")));
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut s = RandomStream::new(master_seed, t as u64);
            gram_log_det(&Matrix::gaussian(n, p_prime, &mut s))
        })
        .collect();
    Ok(McEstimate::from_samples(&samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInformation {
    /// `½ ln det(I_n + X R Xᵀ)`
    pub mi: f64,
    /// `½ ln det(I_{p′} + XᵀX R)`
    pub mi_prime: f64,
}

impl MutualInformation {
    pub fn relative_gap(&self) -> f64 {
        (self.mi - self.mi_prime).abs() / self.mi.abs().max(self.mi_prime.abs()).max(f64::MIN_POSITIVE)
    }
}

/// `½ ln det(I_n + X R Xᵀ)`, cross-checked against the `p′`-dimensional
/// form `½ ln det(I_{p′} + XᵀX R)`; disagreement beyond 1e-8 relative is an
/// error.
pub fn exact_mutual_information(x: &Matrix, r: &Matrix) -> Result<MutualInformation> {
    let pp = x.cols();
    if r.rows() != pp || r.cols() != pp {
        return Err(Error::DimensionMismatch(format!("X is {}x{pp} but R is {}x{}", x.rows(), r.rows(), r.cols())));
    }
    let xr = x.matmul(r)?;
    let mut small = xr.matmul(&x.transpose())?;
    // symmetrize away rounding before the Cholesky factorization
    let n = small.rows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (small[(i, j)] + small[(j, i)]);
            small[(i, j)] = v;
            small[(j, i)] = v;
        }
    }
    small.add_scaled_identity(1.0);
    let mi = 0.5 * spd_log_det(&small)?;

    let mut big = x.transpose().matmul(x)?.matmul(r)?;
    big.add_scaled_identity(1.0);
    let (sign, log_abs) = lu_log_abs_det(&big)?;
    if sign <= 0.0 {
        return Err(Error::DeterminantMismatch { lhs: mi, rhs: f64::NAN });
    }
    let mi_prime = 0.5 * log_abs;
    let out = MutualInformation { mi, mi_prime };
    if (mi - mi_prime).abs() > DETERMINANT_REL_TOL * mi.abs().max(mi_prime.abs()) + 1e-12 {
        return Err(Error::DeterminantMismatch { lhs: mi, rhs: mi_prime });
    }
    Ok(out)
}

/// `ln(1 + eˣ)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `L = (n/2) ln(1 + exp((a + b)/n))`.
pub fn jensen_minkowski_bound(a: f64, b: f64, n: usize, variant: AVariant) -> Result<InfoRateBound> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let l = 0.5 * n as f64 * softplus((a + b) / n as f64);
    Ok(InfoRateBound { a, b, n, l, variant })
}
