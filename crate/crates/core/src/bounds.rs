//! Closed-form recovery conditions and minimal-measurement solvers.
//!
//! All arithmetic is in natural logarithms. The Fano additive constant
//! (`slack`) defaults to 1 and can be set to `ln 2`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::special::{ln_choose, ln_gamma};
use crate::numerics::{spd_log_det, symmetric_eigenvalues, Matrix};
use crate::signal_model::{sigma_min_worst_case, ReducedProblem, SignalModel};
use crate::spectrum::SpectrumSummary;
use crate::wishart_info::softplus;

pub const DEFAULT_SLACK: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Thm1,
    Cor1,
    WangNecessary,
    Thm3,
    Cor2,
}

impl Theorem {
    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::Thm1 => "thm1",
            Theorem::Cor1 => "cor1",
            Theorem::WangNecessary => "wang_necessary",
            Theorem::Thm3 => "thm3",
            Theorem::Cor2 => "cor2",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Theorem::Thm1),
            "cor1" => Ok(Theorem::Cor1),
            "wang" | "wang_necessary" => Ok(Theorem::WangNecessary),
            "thm3" => Ok(Theorem::Thm3),
            "cor2" => Ok(Theorem::Cor2),
            other => Err(Error::InvalidConfig(format!("unknown theorem `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Satisfied,
    UnsatisfiableInDomain,
    InfiniteRequirement,
}

/// Per-`m` detail. For the Fano forms `lhs` is `ln(C(p′,m)−1) − slack` and
/// `rhs` is `L`; for the `f_m` forms they are the numerator and denominator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerM {
    pub m: usize,
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub f: Option<f64>,
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub theorem: Theorem,
    pub p: usize,
    pub k: usize,
    pub lambda_sq: Option<f64>,
    #[serde(rename = "G")]
    pub g: Option<f64>,
    pub slack_constant: f64,
    pub n_min: Option<usize>,
    pub status: BoundStatus,
    /// `n` at which `per_m` was evaluated (Fano forms only).
    pub evaluated_n: Option<usize>,
    pub per_m: Vec<PerM>,
}

impl BoundResult {
    pub fn is_satisfied(&self) -> bool {
        self.status == BoundStatus::Satisfied
    }

    pub const CSV_HEADER: [&'static str; 7] = ["theorem", "p", "k", "lambda_sq", "G", "n_min", "per_m"];

    /// One CSV row; `per_m` is a `;`-separated list of `f_m` (or `L − lhs`
    /// for the Fano forms).
    pub fn csv_record(&self) -> [String; 7] {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let per_m = self
            .per_m
            .iter()
            .map(|e| match (e.f, e.rhs) {
                (Some(f), _) => f.to_string(),
                (None, Some(r)) if self.evaluated_n.is_some() => (r - e.lhs).to_string(),
                _ => String::from("nan"),
            })
            .collect::<Vec<_>>()
            .join(";");
        [
            self.theorem.to_string(),
            self.p.to_string(),
            self.k.to_string(),
            opt(self.lambda_sq),
            opt(self.g),
            self.n_min.map(|n| n.to_string()).unwrap_or_else(|| "unsatisfiable".into()),
            per_m,
        ]
    }
}

fn check_pk(p: usize, k: usize) -> Result<()> {
    if k == 0 || k > p {
        return Err(Error::domain(format!("need 1 <= k <= p, got p={p} k={k}")));
    }
    Ok(())
}

/// `C(p′, m) ≤ 2`: the Fano constraint for this `m` is trivially true.
fn is_vacuous(p_prime: usize, m: usize) -> bool {
    m == p_prime || (p_prime == 2 && m == 1)
}

/// `ln(C(p′, m) − 1)`.
fn ln_wrong_supports(p_prime: usize, m: usize) -> f64 {
    let lc = ln_choose(p_prime as u64, m as u64);
    lc + (-(-lc).exp()).ln_1p()
}

/// Fano left-hand side `ln(C(p′, m) − 1) − slack`.
pub fn fano_lhs(p_prime: usize, m: usize, slack: f64) -> f64 {
    ln_wrong_supports(p_prime, m) - slack
}

/// `(n/2) ln(1 + g · (Γ(n) C(p′−1, n−1))^{1/n})`, evaluated in log space.
pub fn info_rate_rhs(p_prime: usize, n: usize, g: f64) -> Result<f64> {
    if n == 0 || n >= p_prime {
        return Err(Error::domain(format!("need 1 <= n <= p'-1, got p'={p_prime} n={n}")));
    }
    if !(g >= 0.0) || !g.is_finite() {
        return Err(Error::domain(format!("G must be finite and >= 0, got {g}")));
    }
    if g == 0.0 {
        return Ok(0.0);
    }
    let root_log = (ln_gamma(n as f64) + ln_choose((p_prime - 1) as u64, (n - 1) as u64)) / n as f64;
    Ok(0.5 * n as f64 * softplus(g.ln() + root_log))
}

/// Right-hand side `L` of the strictly-sparse sufficient condition.
pub fn thm1_rhs(rp: &ReducedProblem, sm: &SignalModel) -> Result<f64> {
    info_rate_rhs(rp.p_prime(), rp.n, sigma_min_worst_case(rp, sm.lambda_sq()))
}

/// Same structure as [`thm1_rhs`] with `q(1−q)λ²` replaced by `g`.
pub fn thm3_rhs(rp: &ReducedProblem, g: f64) -> Result<f64> {
    info_rate_rhs(rp.p_prime(), rp.n, g)
}

/// Evaluate `ln(C(p′,m)−1) − slack ≤ L(m)` for every `m = 1..=k` at a fixed
/// `n`. An `m` whose `p′` leaves `n` outside `[1, p′−1]` cannot be certified
/// and counts as failing.
fn fano_form_holds(
    p: usize,
    k: usize,
    n: usize,
    slack: f64,
    g_of: &dyn Fn(&ReducedProblem) -> f64,
) -> Result<(bool, Vec<PerM>)> {
    check_pk(p, k)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let mut all = true;
    let mut per_m = Vec::with_capacity(k);
    for m in 1..=k {
        let rp = ReducedProblem::new(p, k, m, n)?;
        let pp = rp.p_prime();
        if is_vacuous(pp, m) {
            per_m.push(PerM { m, lhs: fano_lhs(pp, m, slack), rhs: None, f: None, vacuous: true });
            continue;
        }
        let lhs = fano_lhs(pp, m, slack);
        let rhs = if n < pp { Some(info_rate_rhs(pp, n, g_of(&rp))?) } else { None };
        all &= rhs.is_some_and(|r| lhs <= r);
        per_m.push(PerM { m, lhs, rhs, f: None, vacuous: false });
    }
    Ok((all, per_m))
}

fn fano_form_min_n(
    theorem: Theorem,
    p: usize,
    k: usize,
    lambda_sq: Option<f64>,
    g: Option<f64>,
    slack: f64,
    g_of: &dyn Fn(&ReducedProblem) -> f64,
) -> Result<BoundResult> {
    check_pk(p, k)?;
    let last = p.saturating_sub(1).max(1);
    let mut per_m = Vec::new();
    let mut n_min = None;
    for n in 1..=last {
        let (ok, detail) = fano_form_holds(p, k, n, slack, g_of)?;
        per_m = detail;
        if ok {
            n_min = Some(n);
            break;
        }
    }
    let status = if n_min.is_some() { BoundStatus::Satisfied } else { BoundStatus::UnsatisfiableInDomain };
    Ok(BoundResult {
        theorem,
        p,
        k,
        lambda_sq,
        g,
        slack_constant: slack,
        n_min,
        status,
        evaluated_n: Some(n_min.unwrap_or(last)),
        per_m,
    })
}

pub fn thm1_holds(p: usize, k: usize, n: usize, sm: &SignalModel, slack: f64) -> Result<(bool, Vec<PerM>)> {
    let l2 = sm.lambda_sq();
    fano_form_holds(p, k, n, slack, &|rp| sigma_min_worst_case(rp, l2))
}

/// Smallest `n` satisfying the strictly-sparse sufficient condition, by
/// ascending scan over `n = 1 … p−1`.
pub fn thm1_min_n(p: usize, k: usize, sm: &SignalModel, slack: f64) -> Result<BoundResult> {
    let l2 = sm.lambda_sq();
    fano_form_min_n(Theorem::Thm1, p, k, Some(l2), None, slack, &|rp| sigma_min_worst_case(rp, l2))
}

pub fn thm3_holds(p: usize, k: usize, n: usize, g: f64, slack: f64) -> Result<(bool, Vec<PerM>)> {
    fano_form_holds(p, k, n, slack, &|_| g)
}

pub fn thm3_min_n(p: usize, k: usize, g: f64, slack: f64) -> Result<BoundResult> {
    info_rate_rhs(2, 1, g)?;
    fano_form_min_n(Theorem::Thm3, p, k, None, Some(g), slack, &|_| g)
}

/// Theorem-3 scan with a separate spectrum constant for each `m`
/// (`g_of_m(m)`), as arises when every reduced problem has its own source.
pub fn thm3_min_n_per_m(p: usize, k: usize, g_of_m: impl Fn(usize) -> f64, slack: f64) -> Result<BoundResult> {
    fano_form_min_n(Theorem::Thm3, p, k, None, None, slack, &|rp| g_of_m(rp.m))
}

/// Log-average `(1/2π) ∫ ln S(ω) dω` of a tabulated spectrum.
pub fn cor2_g(spec: &SpectrumSummary) -> Result<f64> {
    if let Some(bad) = spec.values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::domain(format!("log-average undefined: spectrum value {bad} <= 0")));
    }
    spec.g_log.ok_or_else(|| Error::domain("log-average undefined for this spectrum"))
}

pub fn cor2_min_n(p: usize, k: usize, spec: &SpectrumSummary, slack: f64) -> Result<BoundResult> {
    let g = cor2_g(spec)?;
    let mut out = thm3_min_n(p, k, g, slack)?;
    out.theorem = Theorem::Cor2;
    Ok(out)
}

/// Theorem 3 at the spectrum infimum next to Corollary 2 at the log-average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumBoundComparison {
    pub thm3: BoundResult,
    pub cor2: BoundResult,
    pub disagree: bool,
}

pub fn compare_thm3_cor2(p: usize, k: usize, spec: &SpectrumSummary, slack: f64) -> Result<SpectrumBoundComparison> {
    let thm3 = thm3_min_n(p, k, spec.g_inf.max(0.0), slack)?;
    let cor2 = cor2_min_n(p, k, spec, slack)?;
    let disagree = thm3.n_min != cor2.n_min;
    Ok(SpectrumBoundComparison { thm3, cor2, disagree })
}

#[derive(Debug, Clone, Copy)]
enum FForm {
    Cor1,
    Wang,
}

fn f_parts(form: FForm, rp: &ReducedProblem, lambda_sq: f64, slack: f64) -> (f64, f64) {
    let pp = rp.p_prime();
    let m = rp.m as f64;
    let one_minus_q = 1.0 - rp.q();
    match form {
        FForm::Cor1 => {
            (ln_wrong_supports(pp, rp.m) - slack, 0.5 * (m / std::f64::consts::E * lambda_sq * one_minus_q).ln_1p())
        }
        FForm::Wang => (ln_choose(pp as u64, rp.m as u64) - slack, 0.5 * (m * lambda_sq * one_minus_q).ln_1p()),
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// `f_m` of the relaxed sufficient condition.
pub fn cor1_f(rp: &ReducedProblem, sm: &SignalModel, slack: f64) -> f64 {
    let (num, den) = f_parts(FForm::Cor1, rp, sm.lambda_sq(), slack);
    ratio(num, den)
}

/// `f_m` of the necessary condition.
pub fn wang_f(rp: &ReducedProblem, sm: &SignalModel, slack: f64) -> f64 {
    let (num, den) = f_parts(FForm::Wang, rp, sm.lambda_sq(), slack);
    ratio(num, den)
}

fn f_form_min_n(form: FForm, p: usize, k: usize, sm: &SignalModel, slack: f64) -> Result<BoundResult> {
    check_pk(p, k)?;
    let l2 = sm.lambda_sq();
    let mut worst = k as f64;
    let mut per_m = Vec::with_capacity(k);
    for m in 1..=k {
        let rp = ReducedProblem::new(p, k, m, 1)?;
        let (num, den) = f_parts(form, &rp, l2, slack);
        let f = ratio(num, den);
        worst = worst.max(f);
        per_m.push(PerM { m, lhs: num, rhs: Some(den), f: Some(f), vacuous: num <= 0.0 });
    }
    let (n_min, status) = if worst.is_finite() {
        (Some(worst.floor() as usize + 1), BoundStatus::Satisfied)
    } else {
        (None, BoundStatus::InfiniteRequirement)
    };
    Ok(BoundResult {
        theorem: match form {
            FForm::Cor1 => Theorem::Cor1,
            FForm::Wang => Theorem::WangNecessary,
        },
        p,
        k,
        lambda_sq: Some(l2),
        g: None,
        slack_constant: slack,
        n_min,
        status,
        evaluated_n: None,
        per_m,
    })
}

/// `n_min = ⌊max{f_1, …, f_k, k}⌋ + 1` for the relaxed sufficient condition.
pub fn cor1_min_n(p: usize, k: usize, sm: &SignalModel, slack: f64) -> Result<BoundResult> {
    f_form_min_n(FForm::Cor1, p, k, sm, slack)
}

/// `n_min = ⌊max{f_1, …, f_k, k}⌋ + 1` for the necessary condition.
pub fn wang_min_n(p: usize, k: usize, sm: &SignalModel, slack: f64) -> Result<BoundResult> {
    f_form_min_n(FForm::Wang, p, k, sm, slack)
}

/// Lower bound on the sum of the `n` smallest log-eigenvalues of `R` from
/// its determinant, next to the true value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MerikoskiReport {
    pub bound: f64,
    pub true_b: f64,
    /// `true_b − bound`; negative means the bound is violated.
    pub slack: f64,
    pub violated: bool,
}

/// `b ≥ (d − n) ln((d − n)/snr) + ln det R` for `d × d` positive-definite `R`.
pub fn merikoski_b_bound(r: &Matrix, n: usize, snr: f64) -> Result<MerikoskiReport> {
    let log_det = spd_log_det(r)?;
    let d = r.rows();
    if n == 0 || n >= d {
        return Err(Error::domain(format!("need 1 <= n < dim(R) = {d}, got n={n}")));
    }
    if !(snr > 0.0) {
        return Err(Error::domain(format!("SNR must be positive, got {snr}")));
    }
    let rest = (d - n) as f64;
    let bound = rest * (rest / snr).ln() + log_det;
    let eig = symmetric_eigenvalues(r)?;
    let true_b: f64 = eig[..n].iter().map(|e| e.ln()).sum();
    let slack = true_b - bound;
    Ok(MerikoskiReport { bound, true_b, slack, violated: slack < 0.0 })
}

/// Rows of the scaling table: linear (`k = p/4`) and sublinear
/// (`k = round(√p)`) sparsity against three SNR regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeRow {
    /// `k = Θ(p)`, `λ² = Θ(1/k)`, `n = Θ(p ln p)`
    LinearInverseK = 1,
    /// `k = Θ(p)`, `λ² = Θ(ln k / k)`, `n = Θ(p)`
    LinearLogKOverK = 2,
    /// `k = Θ(p)`, `λ² = Θ(1)`, `n = Θ(p)`
    LinearConstant = 3,
    /// `k = o(p)`, `λ² = Θ(1/k)`, `n = Θ(k ln(p−k))`
    SublinearInverseK = 4,
    /// `k = o(p)`, `λ² = Θ(ln k / k)`
    SublinearLogKOverK = 5,
    /// `k = o(p)`, `λ² = Θ(1)`
    SublinearConstant = 6,
}

impl RegimeRow {
    pub fn from_index(i: usize) -> Result<Self> {
        Ok(match i {
            1 => Self::LinearInverseK,
            2 => Self::LinearLogKOverK,
            3 => Self::LinearConstant,
            4 => Self::SublinearInverseK,
            5 => Self::SublinearLogKOverK,
            6 => Self::SublinearConstant,
            _ => return Err(Error::InvalidConfig(format!("regime row must be 1..=6, got {i}"))),
        })
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn sparsity(&self, p: usize) -> usize {
        let k = if self.index() <= 3 { p / 4 } else { (p as f64).sqrt().round() as usize };
        k.clamp(1, p)
    }

    pub fn lambda_sq(&self, p: usize) -> f64 {
        let k = self.sparsity(p) as f64;
        match self {
            Self::LinearInverseK | Self::SublinearInverseK => 1.0 / k,
            Self::LinearLogKOverK | Self::SublinearLogKOverK => k.ln() / k,
            Self::LinearConstant | Self::SublinearConstant => 1.0,
        }
    }

    /// Predicted growth of `n_min` in `p`.
    pub fn growth(&self, p: usize) -> f64 {
        let pf = p as f64;
        let k = self.sparsity(p) as f64;
        match self {
            Self::LinearInverseK => pf * pf.ln(),
            Self::LinearLogKOverK | Self::LinearConstant => pf,
            Self::SublinearInverseK => k * (pf - k).ln(),
            Self::SublinearLogKOverK => (k * (pf - k).ln() / k.ln()).max(k * (pf / k).ln() / k.ln().ln()),
            Self::SublinearConstant => (k * (pf / k).ln() / k.ln()).max(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimePoint {
    pub p: usize,
    pub k: usize,
    pub lambda_sq: f64,
    pub n_min: Option<usize>,
    pub growth: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub row: usize,
    pub points: Vec<RegimePoint>,
    /// Largest `|r_{i+1}/r_i − 1|` over the last three successive pairs.
    pub stability: Option<f64>,
    pub stable: Option<bool>,
}

pub const REGIME_TOLERANCE: f64 = 0.10;

/// Relaxed-sufficient `n_min` along a `p` sequence, normalized by the row's
/// predicted growth.
pub fn regime_scaling_check(row: RegimeRow, p_sequence: &[usize], slack: f64) -> Result<RegimeReport> {
    let mut points = Vec::with_capacity(p_sequence.len());
    for &p in p_sequence {
        let k = row.sparsity(p);
        let lambda_sq = row.lambda_sq(p);
        let res = cor1_min_n(p, k, &SignalModel::worst_case(lambda_sq)?, slack)?;
        let growth = row.growth(p);
        points.push(RegimePoint {
            p,
            k,
            lambda_sq,
            n_min: res.n_min,
            growth,
            ratio: res.n_min.map(|n| n as f64 / growth),
        });
    }
    let stability = if points.len() >= 4 {
        let tail = &points[points.len() - 4..];
        tail.windows(2)
            .map(|w| match (w[0].ratio, w[1].ratio) {
                (Some(a), Some(b)) => Some((b / a - 1.0).abs()),
                _ => None,
            })
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max))
    } else {
        None
    };
    Ok(RegimeReport { row: row.index(), points, stability, stable: stability.map(|s| s <= REGIME_TOLERANCE) })
}

/// `p_min, 2 p_min, …, p_max`.
pub fn doubling_sequence(p_min: usize, p_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = p_min;
    while p <= p_max && p > 0 {
        out.push(p);
        p *= 2;
    }
    out
}
