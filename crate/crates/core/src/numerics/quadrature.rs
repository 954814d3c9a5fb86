use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 16;

/// Uniform grid `ω_j = 2πj/n`, `j = 0..n`.
pub fn periodic_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Trapezoidal value of `(1/2π) ∫₀^{2π} f(ω) dω` from samples on a uniform
/// periodic grid. Exact for trigonometric polynomials of degree below n/2.
pub fn integrate_periodic(omega: &[f64], values: &[f64]) -> Result<f64> {
    check_periodic_grid(omega)?;
    if values.len() != omega.len() {
        return Err(Error::DimensionMismatch(format!("{} grid points but {} values", omega.len(), values.len())));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn check_periodic_grid(omega: &[f64]) -> Result<()> {
    let n = omega.len();
    if n < MIN_GRID {
        return Err(Error::NonUniformGrid(format!("need at least {MIN_GRID} points, got {n}")));
    }
    let h = TAU / n as f64;
    let start = omega[0];
    if start < -1e-12 || start >= h {
        return Err(Error::NonUniformGrid(format!("grid starts at {start}")));
    }
    for (j, w) in omega.iter().enumerate() {
        let want = start + h * j as f64;
        if (w - want).abs() > 1e-9 {
            return Err(Error::NonUniformGrid(format!("point {j} is {w}, expected {want}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cosine() {
        let g = periodic_grid(64);
        let c = vec![3.25; 64];
        assert_eq!(integrate_periodic(&g, &c).unwrap(), 3.25);
        let cos: Vec<f64> = g.iter().map(|w| w.cos()).collect();
        assert!(integrate_periodic(&g, &cos).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_of_shifted_cosine_closed_form() {
        let g = periodic_grid(256);
        let f: Vec<f64> = g.iter().map(|w| (2.0 + w.cos()).ln()).collect();
        let want = ((2.0 + 3f64.sqrt()) / 2.0).ln();
        assert!((integrate_periodic(&g, &f).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn trig_polynomials_are_exact() {
        let g = periodic_grid(32);
        let f: Vec<f64> =
            g.iter().map(|w| 0.5 + (3.0 * w).cos() - 2.0 * (15.0 * w).sin() + 0.25 * (7.0 * w).cos()).collect();
        assert!((integrate_periodic(&g, &f).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        let mut g = periodic_grid(32);
        g[5] += 1e-3;
        assert!(integrate_periodic(&g, &vec![1.0; 32]).is_err());
        let short = periodic_grid(8);
        assert!(integrate_periodic(&short, &[1.0; 8]).is_err());
        let g = periodic_grid(32);
        assert!(integrate_periodic(&g, &vec![1.0; 31]).is_err());
    }
}
