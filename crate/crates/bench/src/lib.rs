//! Fixed inputs shared by the criterion benchmarks.

use sprecov_core::numerics::{Matrix, RandomStream};
use sprecov_core::recovery_sim::{generate_instance, ExperimentConfig, Instance};
use sprecov_core::signal_model::{toeplitz_autocorrelation, ReducedProblem, SignalModel};

pub const SEED: u64 = 0x5eed;

/// `rows × cols` standard Gaussian matrix from a fixed stream.
pub fn gaussian_matrix(rows: usize, cols: usize) -> Matrix {
    Matrix::gaussian(rows, cols, &mut RandomStream::new(SEED, (rows * 1000 + cols) as u64))
}

/// Symmetric positive-definite `n × n` matrix.
pub fn spd_matrix(n: usize) -> Matrix {
    let mut g = gaussian_matrix(n, n + 4).gram_rows();
    g.add_scaled_identity(1e-3);
    g
}

pub fn toeplitz(p_prime: usize, m: usize) -> Matrix {
    let rp = ReducedProblem::from_reduced(p_prime, m, 1).expect("valid dimensions");
    toeplitz_autocorrelation(&rp, &SignalModel::worst_case(1.0).expect("valid model")).expect("within size cap")
}

/// One decoding instance with `p = p′`, `k = m`.
pub fn decode_instance(p: usize, k: usize, n: usize) -> Instance {
    let cfg = ExperimentConfig::new(p, k, n, 2.0, 1, SEED);
    generate_instance(&cfg, &mut RandomStream::new(SEED, 0)).expect("valid config")
}
