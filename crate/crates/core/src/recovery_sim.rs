//! Monte Carlo support-recovery experiments with an exhaustive
//! maximum-likelihood decoder.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numerics::{least_squares, Matrix, RandomStream};
use crate::signal_model::{sample_sparse_vector, ReducedProblem, SignalModel, SparseVector};

pub const DEFAULT_ENUMERATION_CAP: u64 = 200_000;

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Residuals closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Half-width of the uniform tail, relative to λ, used for approximately
/// sparse signals under the top-k metric.
pub const TAIL_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    ExactSupport,
    TopK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p: usize,
    pub k: usize,
    /// Unknown-support size; `m = k` means no side information.
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub xi: f64,
    pub noise_std: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub error_metric: ErrorMetric,
    pub enumeration_cap: u64,
}

impl ExperimentConfig {
    /// No side information, `ξ = 0`, unit noise, exact-support metric.
    pub fn new(p: usize, k: usize, n: usize, lambda: f64, trials: usize, master_seed: u64) -> Self {
        Self {
            p,
            k,
            m: k,
            n,
            lambda,
            xi: 0.0,
            noise_std: 1.0,
            trials,
            master_seed,
            error_metric: ErrorMetric::ExactSupport,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn reduced(&self) -> Result<ReducedProblem> {
        ReducedProblem::new(self.p, self.k, self.m, self.n)
    }

    pub fn signal(&self) -> Result<SignalModel> {
        SignalModel::new(self.lambda, self.xi)
    }

    /// Number of candidate supports, `C(p′, m)`.
    pub fn candidate_count(&self) -> Result<u128> {
        let rp = self.reduced()?;
        Ok(binomial_u128(rp.p_prime(), rp.m))
    }

    pub fn validate(&self) -> Result<()> {
        self.reduced()?;
        self.signal()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.noise_std > 0.0) || !self.noise_std.is_finite() {
            return Err(Error::InvalidConfig(format!("noise_std must be positive, got {}", self.noise_std)));
        }
        let required = self.candidate_count()?;
        if required > self.enumeration_cap as u128 {
            return Err(Error::EnumerationCap { required, cap: self.enumeration_cap as u128 });
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("config serializes").as_bytes())
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }
}

/// Lowercase hex SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Exact `C(a, b)`, saturating at `u128::MAX`.
pub fn binomial_u128(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut c: u128 = 1;
    for i in 0..b {
        // c · (a − i) is divisible by (i + 1) at every step
        match c.checked_mul((a - i) as u128) {
            Some(v) => c = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    c
}

/// One draw of `Y = X̃β̃ + X_K β_K + W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// `n × p′` candidate columns.
    pub x: Matrix,
    /// `n × (k − m)` columns whose support is revealed to the decoder.
    pub known: Matrix,
    pub known_values: Vec<f64>,
    /// Coefficients on the candidate columns.
    pub beta: SparseVector,
    pub y: Vec<f64>,
}

/// `β̃` with a uniform tail in `±TAIL_FRACTION·λ` off the support. Not part
/// of the strictly sparse model; used only for the top-k metric.
pub fn add_uniform_tail(beta: &mut SparseVector, lambda: f64, stream: &mut RandomStream) {
    let mut on = vec![false; beta.values.len()];
    for &i in &beta.support {
        on[i] = true;
    }
    for (v, &is_on) in beta.values.iter_mut().zip(&on) {
        if !is_on {
            *v = TAIL_FRACTION * lambda * (2.0 * stream.uniform() - 1.0);
        }
    }
}

pub fn generate_instance(cfg: &ExperimentConfig, stream: &mut RandomStream) -> Result<Instance> {
    let rp = cfg.reduced()?;
    let sm = cfg.signal()?;
    let n = cfg.n;
    let x = Matrix::gaussian(n, rp.p_prime(), stream);
    let known = Matrix::gaussian(n, cfg.k - cfg.m, stream);
    let known_values: Vec<f64> =
        (0..cfg.k - cfg.m).map(|_| if stream.bernoulli(sm.xi) { -sm.lambda } else { sm.lambda }).collect();
    let mut beta = sample_sparse_vector(&rp, &sm, stream);
    if cfg.error_metric == ErrorMetric::TopK {
        add_uniform_tail(&mut beta, sm.lambda, stream);
    }
    let mut y = x.matvec(&beta.values)?;
    for (yi, ki) in y.iter_mut().zip(known.matvec(&known_values)?) {
        *yi += ki;
    }
    for yi in y.iter_mut() {
        *yi += cfg.noise_std * stream.gaussian();
    }
    Ok(Instance { x, known, known_values, beta, y })
}

/// Advance `c` to the next size-`c.len()` subset of `0..n` in lexicographic
/// order; false once the last subset has been passed.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let m = c.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if c[i] < n - m + i {
            c[i] += 1;
            for j in i + 1..m {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Residual `‖Y − [X_K, X_S] ν̂‖²` of the least-squares fit on the known
/// columns plus candidate subset `subset`.
pub fn subset_residual(x: &Matrix, y: &[f64], subset: &[usize], known: Option<&Matrix>) -> Result<f64> {
    let cand = x.select_columns(subset);
    let design = match known {
        Some(kc) if kc.cols() > 0 => kc.hstack(&cand)?,
        _ => cand,
    };
    Ok(least_squares(&design, y)?.residual_sq)
}

/// Scan every size-`m` subset of the columns of `x` in lexicographic order
/// and return the one with the smallest residual. A later subset replaces
/// the incumbent only if it improves on it by more than [`TIE_TOLERANCE`].
pub fn exhaustive_ml_decode(x: &Matrix, y: &[f64], m: usize, known: Option<&Matrix>, cap: u64) -> Result<Vec<usize>> {
    let pp = x.cols();
    if m == 0 || m > pp {
        return Err(Error::domain(format!("need 1 <= m <= {pp}, got m={m}")));
    }
    if y.len() != x.rows() {
        return Err(Error::DimensionMismatch(format!("{} rows but |Y| = {}", x.rows(), y.len())));
    }
    let required = binomial_u128(pp, m);
    if required > cap as u128 {
        return Err(Error::EnumerationCap { required, cap: cap as u128 });
    }
    let mut subset: Vec<usize> = (0..m).collect();
    let mut best = subset.clone();
    let mut best_res = subset_residual(x, y, &subset, known)?;
    while next_combination(&mut subset, pp) {
        let res = subset_residual(x, y, &subset, known)?;
        if res < best_res - TIE_TOLERANCE {
            best_res = res;
            best.copy_from_slice(&subset);
        }
    }
    Ok(best)
}

/// Indices of the `k` largest-magnitude entries (ties toward the lower
/// index), ascending.
pub fn top_k_indices(beta: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..beta.len()).collect();
    idx.sort_by(|&a, &b| beta[b].abs().total_cmp(&beta[a].abs()).then(a.cmp(&b)));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

/// Success under the top-k metric: the decoded support is exactly the index
/// set of the `k` largest-magnitude entries of `beta`.
pub fn top_k_success(decoded: &[usize], beta: &[f64], k: usize) -> bool {
    if k > beta.len() || decoded.len() != k {
        return false;
    }
    let mut d = decoded.to_vec();
    d.sort_unstable();
    d == top_k_indices(beta, k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial_index: usize,
    pub true_support: Vec<usize>,
    pub decoded_support: Vec<usize>,
    pub success: bool,
}

/// Trial `t` draws everything from stream `(master_seed, t)`.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    let mut stream = RandomStream::new(cfg.master_seed, trial_index as u64);
    let inst = generate_instance(cfg, &mut stream)?;
    let decoded = exhaustive_ml_decode(&inst.x, &inst.y, cfg.m, Some(&inst.known), cfg.enumeration_cap)?;
    let success = match cfg.error_metric {
        ErrorMetric::ExactSupport => decoded == inst.beta.support,
        ErrorMetric::TopK => top_k_success(&decoded, &inst.beta.values, cfg.m),
    };
    Ok(TrialOutcome { trial_index, true_support: inst.beta.support, decoded_support: decoded, success })
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub master_seed: u64,
    pub trials: usize,
    pub failures: usize,
    pub p_err_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub wall_time: f64,
}

impl SimReport {
    /// Hex SHA-256 of the report with `wall_time` zeroed; equal across
    /// repeated runs of the same configuration.
    pub fn fingerprint(&self) -> String {
        let stable = SimReport { wall_time: 0.0, ..self.clone() };
        sha256_hex(serde_json::to_string(&stable).expect("report serializes").as_bytes())
    }

    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }
}

/// All trial outcomes, in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect()
}

pub fn estimate_perr(cfg: &ExperimentConfig) -> Result<SimReport> {
    let start = Instant::now();
    let outcomes = run_trials(cfg)?;
    let failures = outcomes.iter().filter(|o| !o.success).count();
    let (ci_low, ci_high) = wilson_interval(failures, cfg.trials);
    Ok(SimReport {
        config: cfg.clone(),
        config_hash: cfg.hash(),
        master_seed: cfg.master_seed,
        trials: cfg.trials,
        failures,
        p_err_hat: failures as f64 / cfg.trials as f64,
        ci_low,
        ci_high,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub curve: Vec<SimReport>,
    pub n_star: Option<usize>,
}

impl Sweep {
    pub const CSV_HEADER: [&'static str; 8] =
        ["n", "trials", "failures", "p_err", "ci_low", "ci_high", "config_hash", "master_seed"];

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        for r in &self.curve {
            w.write_record([
                r.config.n.to_string(),
                r.trials.to_string(),
                r.failures.to_string(),
                r.p_err_hat.to_string(),
                r.ci_low.to_string(),
                r.ci_high.to_string(),
                r.config_hash.clone(),
                r.master_seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// True when each successive estimate either does not increase or its
    /// interval overlaps the previous one.
    pub fn nonincreasing_up_to_ci(&self) -> bool {
        self.curve.windows(2).all(|w| w[1].p_err_hat <= w[0].p_err_hat || w[1].ci_low <= w[0].ci_high)
    }
}

/// Estimate the error probability at each `n` and report the first `n`
/// whose upper confidence limit is at most `epsilon`.
pub fn sweep_n(template: &ExperimentConfig, n_values: &[usize], epsilon: f64) -> Result<Sweep> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("n range must be non-empty and strictly ascending".into()));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidConfig(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let mut curve = Vec::with_capacity(n_values.len());
    for &n in n_values {
        curve.push(estimate_perr(&template.with_n(n))?);
    }
    let n_star = curve.iter().find(|r| r.ci_high <= epsilon).map(|r| r.config.n);
    Ok(Sweep { curve, n_star })
}

/// Parse `a:b` or `a:b:step` into the inclusive list `a, a+step, …, ≤ b`.
pub fn parse_n_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidConfig(format!("malformed n range `{s}` (expected a:b[:step])"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let a = num(parts[0])?;
    let b = num(parts[1])?;
    let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
    if a == 0 || a > b || step == 0 {
        return Err(bad());
    }
    Ok((a..=b).step_by(step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: usize, k: usize, n: usize, lambda_sq: f64, trials: usize) -> ExperimentConfig {
        ExperimentConfig::new(p, k, n, lambda_sq.sqrt(), trials, 11)
    }

    #[test]
    fn binomial_counts() {
        assert_eq!(binomial_u128(12, 2), 66);
        assert_eq!(binomial_u128(40, 10), 847_660_528);
        assert_eq!(binomial_u128(5, 0), 1);
        assert_eq!(binomial_u128(3, 4), 0);
        assert_eq!(binomial_u128(200, 100), u128::MAX);
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 5) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 10);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seen.last().unwrap(), &vec![3, 4]);
        let mut full = vec![0, 1, 2];
        assert!(!next_combination(&mut full, 3));
    }

    #[test]
    fn config_validation() {
        assert!(cfg(12, 2, 4, 1.0, 10).validate().is_ok());
        match cfg(40, 10, 4, 1.0, 10).validate() {
            Err(Error::EnumerationCap { required, cap }) => {
                assert_eq!(required, 847_660_528);
                assert_eq!(cap, 200_000);
            }
            other => panic!("{other:?}"),
        }
        assert!(cfg(12, 2, 4, 1.0, 0).validate().is_err());
        let mut c = cfg(12, 2, 4, 1.0, 5);
        c.noise_std = 0.0;
        assert!(c.validate().is_err());
        assert_ne!(cfg(12, 2, 4, 1.0, 5).hash(), cfg(12, 2, 5, 1.0, 5).hash());
        assert_eq!(cfg(12, 2, 4, 1.0, 5).hash().len(), 64);
    }

    #[test]
    fn instance_is_reproducible() {
        let c = cfg(12, 3, 5, 4.0, 1);
        let a = generate_instance(&c, &mut RandomStream::new(3, 9)).unwrap();
        let b = generate_instance(&c, &mut RandomStream::new(3, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.beta.support.len(), 3);
        assert_eq!((a.x.rows(), a.x.cols()), (5, 12));
    }

    #[test]
    fn near_noiseless_instance_tracks_signal() {
        let c = cfg(10, 2, 6, 1e6, 1);
        let inst = generate_instance(&c, &mut RandomStream::new(1, 0)).unwrap();
        let clean = inst.x.matvec(&inst.beta.values).unwrap();
        let scale = clean.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (y, s) in inst.y.iter().zip(&clean) {
            assert!((y - s).abs() < 1e-2 * scale);
        }
    }

    #[test]
    fn gaussian_design_has_unit_variance() {
        let c = ExperimentConfig::new(10, 1, 10_000, 1.0, 1, 5);
        let inst = generate_instance(&c, &mut RandomStream::new(5, 0)).unwrap();
        let xs: Vec<f64> = (0..inst.x.rows()).flat_map(|i| inst.x.row(i).to_vec()).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let se = ((m4 - var * var) / n).sqrt();
        assert!((var - 1.0).abs() < 3.0 * se, "var {var} se {se}");
    }

    /// Separate brute force: explicit normal equations per candidate and a
    /// plain nested-loop enumeration.
    fn brute_force_decode(x: &Matrix, y: &[f64], m: usize) -> Vec<usize> {
        assert_eq!(m, 2);
        let pp = x.cols();
        let mut best = (f64::INFINITY, vec![]);
        for i in 0..pp {
            for j in i + 1..pp {
                let (a, b) = (x.column(i), x.column(j));
                let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
                let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
                let (ay, by) = (dot(&a, y), dot(&b, y));
                let det = aa * bb - ab * ab;
                let c0 = (bb * ay - ab * by) / det;
                let c1 = (aa * by - ab * ay) / det;
                let res: f64 = y.iter().enumerate().map(|(t, v)| (v - c0 * a[t] - c1 * b[t]).powi(2)).sum();
                if res < best.0 - TIE_TOLERANCE {
                    best = (res, vec![i, j]);
                }
            }
        }
        best.1
    }

    #[test]
    fn decoder_matches_brute_force() {
        for seed in 0..40 {
            let c = ExperimentConfig::new(6, 2, 5, 1.0, 1, seed);
            let inst = generate_instance(&c, &mut RandomStream::new(seed, 0)).unwrap();
            let got = exhaustive_ml_decode(&inst.x, &inst.y, 2, None, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(got, brute_force_decode(&inst.x, &inst.y, 2), "seed {seed}");
        }
    }

    #[test]
    fn decoder_reaches_global_minimum() {
        for seed in 0..25 {
            for (pp, m) in [(5, 1), (7, 2), (8, 2)] {
                let c = ExperimentConfig::new(pp, m, 4, 0.8, 1, seed);
                let inst = generate_instance(&c, &mut RandomStream::new(seed, 1)).unwrap();
                let got = exhaustive_ml_decode(&inst.x, &inst.y, m, None, DEFAULT_ENUMERATION_CAP).unwrap();
                let r_got = subset_residual(&inst.x, &inst.y, &got, None).unwrap();
                let mut s: Vec<usize> = (0..m).collect();
                loop {
                    assert!(r_got <= subset_residual(&inst.x, &inst.y, &s, None).unwrap() + TIE_TOLERANCE);
                    if !next_combination(&mut s, pp) {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn decoder_edge_cases() {
        let x = Matrix::identity(3);
        assert_eq!(exhaustive_ml_decode(&x, &[1.0, 2.0, 3.0], 3, None, 10).unwrap(), vec![0, 1, 2]);
        // all-zero observations tie everywhere
        assert_eq!(exhaustive_ml_decode(&x, &[0.0; 3], 1, None, 10).unwrap(), vec![0]);
        assert!(matches!(
            exhaustive_ml_decode(&Matrix::zeros(3, 20), &[0.0; 3], 3, None, 100),
            Err(Error::EnumerationCap { required: 1140, cap: 100 })
        ));
    }

    #[test]
    fn side_information_uses_known_columns() {
        let mut c = ExperimentConfig::new(12, 4, 8, 30.0, 60, 2);
        c.m = 1;
        let rep = estimate_perr(&c).unwrap();
        assert_eq!(rep.failures, 0);
    }

    #[test]
    fn top_k_metric() {
        assert!(top_k_success(&[0, 1], &[3.0, 2.0, 0.1, 0.2], 2));
        assert!(top_k_success(&[1, 0], &[3.0, -2.0, 0.1, 0.2], 2));
        assert!(!top_k_success(&[0, 3], &[3.0, 2.0, 0.1, 0.2], 2));
        assert_eq!(top_k_indices(&[1.0, -1.0, 1.0], 2), vec![0, 1]);
        assert!(!top_k_success(&[0], &[1.0], 2));
    }

    #[test]
    fn top_k_agrees_with_sort_oracle_on_tailed_signals() {
        let rp = ReducedProblem::from_reduced(15, 4, 1).unwrap();
        let sm = SignalModel::new(2.0, 0.5).unwrap();
        for t in 0..1000u64 {
            let mut s = RandomStream::new(21, t);
            let mut beta = sample_sparse_vector(&rp, &sm, &mut s);
            add_uniform_tail(&mut beta, sm.lambda, &mut s);
            let tail_max = beta
                .values
                .iter()
                .enumerate()
                .filter(|(i, _)| !beta.support.contains(i))
                .map(|(_, v)| v.abs())
                .fold(0.0, f64::max);
            assert!(tail_max < sm.lambda / 10.0);
            // oracle: stable sort of (−|β|, index) pairs
            let mut pairs: Vec<(f64, usize)> = beta.values.iter().map(|v| -v.abs()).zip(0..).collect();
            pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut want: Vec<usize> = pairs[..4].iter().map(|p| p.1).collect();
            want.sort_unstable();
            let decoded: Vec<usize> = if t % 2 == 0 { want.clone() } else { vec![0, 1, 2, 3] };
            assert_eq!(top_k_success(&decoded, &beta.values, 4), decoded == want);
            assert_eq!(want, beta.support);
        }
    }

    #[test]
    fn wilson_brackets_estimate() {
        for (f, n) in [(0, 10), (10, 10), (3, 7), (50, 200), (1, 1)] {
            let (lo, hi) = wilson_interval(f, n);
            let p = f as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        }
        // textbook value: 0 of 10 → upper limit 0.2775
        assert!((wilson_interval(0, 10).1 - 0.277_532_799_862_889_2).abs() < 1e-12);
        let w1 = {
            let (a, b) = wilson_interval(100, 400);
            b - a
        };
        let w2 = {
            let (a, b) = wilson_interval(200, 800);
            b - a
        };
        assert!((w2 / w1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.01);
    }

    #[test]
    fn report_is_deterministic() {
        let c = cfg(10, 2, 4, 2.0, 64);
        let a = estimate_perr(&c).unwrap();
        let b = estimate_perr(&c).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(run_trials(&c).unwrap(), run_trials(&c).unwrap());
    }

    #[test]
    fn sweep_basics() {
        let c = cfg(8, 1, 1, 4.0, 40);
        let s = sweep_n(&c, &[2, 3, 4], 1.0).unwrap();
        assert_eq!(s.n_star, Some(2));
        assert!(sweep_n(&c, &[3, 2], 0.1).is_err());
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,trials,failures,p_err,ci_low,ci_high,config_hash,master_seed\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn n_range_parsing() {
        assert_eq!(parse_n_range("2:8").unwrap(), vec![2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(parse_n_range("2:9:3").unwrap(), vec![2, 5, 8]);
        for bad in ["2", "8:2", "0:3", "1:4:0", "a:b", "1:2:3:4"] {
            assert!(parse_n_range(bad).is_err(), "{bad}");
        }
    }
}
