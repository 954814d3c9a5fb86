//! Self-contained numerical kernel.

pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use linalg::{
    cholesky, least_squares, lu_log_abs_det, spd_log_det, symmetric_eigenvalues, LeastSquares, Matrix, MAX_DIM,
};
pub use quadrature::{integrate_periodic, periodic_grid};
pub use rng::RandomStream;
pub use special::{digamma, harmonic, log_binomial, log_gamma, EULER_GAMMA};
