//! Small dense linear algebra: a row-major matrix, cyclic Jacobi
//! eigenvalues, Cholesky log-determinants, LU log-determinants and
//! Householder least squares with a minimum-norm fallback.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;

/// Largest dimension accepted by the dense routines.
pub const MAX_DIM: usize = 512;

const SYMMETRY_TOL: f64 = 1e-10;
const JACOBI_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Matrix of i.i.d. standard normal entries, filled row by row.
    pub fn gaussian(rows: usize, cols: usize, stream: &mut RandomStream) -> Self {
        let data = (0..rows * cols).map(|_| stream.gaussian()).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} * vector of {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `A Aᵀ`, symmetric by construction.
    pub fn gram_rows(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    pub fn add_scaled_identity(&mut self, c: f64) {
        let n = self.rows.min(self.cols);
        for i in 0..n {
            self[(i, i)] += c;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row count".into()));
        }
        let c = self.cols;
        Ok(Self::from_fn(self.rows, c + other.cols, |i, j| if j < c { self[(i, j)] } else { other[(i, j - c)] }))
    }

    fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    fn check_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", self.rows, self.cols)));
        }
        let asym = self.max_asymmetry();
        if asym > SYMMETRY_TOL * self.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::domain(format!("dimension {n} exceeds cap {MAX_DIM}")));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    m.check_symmetric()?;
    let n = m.rows();
    check_cap(n)?;
    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = JACOBI_TOL * scale;

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    m.check_symmetric()?;
    let n = m.rows();
    check_cap(n)?;
    let floor = PIVOT_TOL * m.frobenius_norm();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// `ln det M` for symmetric positive-definite `M`.
pub fn spd_log_det(m: &Matrix) -> Result<f64> {
    let l = cholesky(m)?;
    Ok(2.0 * (0..l.rows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Sign and `ln |det M|` of a general square matrix via partially pivoted LU.
/// A singular matrix yields sign 0 and `-inf`.
pub fn lu_log_abs_det(m: &Matrix) -> Result<(f64, f64)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = m.rows();
    check_cap(n)?;
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for j in 0..n {
        let (piv, piv_abs) =
            (j..n).map(|i| (i, a[(i, j)].abs())).fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        if piv != j {
            for k in 0..n {
                let tmp = a[(j, k)];
                a[(j, k)] = a[(piv, k)];
                a[(piv, k)] = tmp;
            }
            sign = -sign;
        }
        let d = a[(j, j)];
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += d.abs().ln();
        for i in j + 1..n {
            let f = a[(i, j)] / d;
            if f == 0.0 {
                continue;
            }
            for k in j + 1..n {
                a[(i, k)] -= f * a[(j, k)];
            }
        }
    }
    Ok((sign, log_abs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residual_sq: f64,
    pub rank: usize,
}

/// Apply the Householder reflector stored in `v` (acting on rows `start..`)
/// to column `col` of `a`.
fn reflect_column(a: &mut Matrix, v: &[f64], start: usize, col: usize) {
    let s: f64 = v.iter().enumerate().map(|(i, vi)| vi * a[(start + i, col)]).sum();
    if s != 0.0 {
        for (i, vi) in v.iter().enumerate() {
            a[(start + i, col)] -= 2.0 * s * vi;
        }
    }
}

fn reflect_vec(y: &mut [f64], v: &[f64], start: usize) {
    let s: f64 = v.iter().zip(&y[start..]).map(|(a, b)| a * b).sum();
    if s != 0.0 {
        for (yi, vi) in y[start..].iter_mut().zip(v) {
            *yi -= 2.0 * s * vi;
        }
    }
}

/// Unit Householder vector mapping `x` onto a multiple of e₁, or `None`
/// when `x` is already zero below its first entry and nonnegative.
fn householder(x: &[f64]) -> Option<Vec<f64>> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let alpha = if x[0] > 0.0 { -norm } else { norm };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if vn == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|t| *t /= vn);
    Some(v)
}

/// `min_ν ‖y − Aν‖²` by column-pivoted Householder QR.
///
/// Rank is decided at relative tolerance 1e-10 on the pivot norms. For
/// rank-deficient `A` the residual is the distance from `y` to the column
/// space and the coefficients are the minimum-norm solution.
pub fn least_squares(a: &Matrix, y: &[f64]) -> Result<LeastSquares> {
    let (n, k) = (a.rows(), a.cols());
    if n == 0 || k == 0 {
        return Err(Error::DimensionMismatch("least squares needs n >= 1 and k >= 1".into()));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("matrix has {n} rows but y has {} entries", y.len())));
    }
    let mut r = a.clone();
    let mut qty = y.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut col_norms: Vec<f64> = (0..k).map(|j| (0..n).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>()).collect();
    let ref_norm = col_norms.iter().cloned().fold(0.0, f64::max).sqrt();

    let steps = n.min(k);
    let mut rank = 0;
    for j in 0..steps {
        let (piv, _) =
            (j..k).map(|c| (c, col_norms[c])).fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv != j {
            for i in 0..n {
                let tmp = r[(i, j)];
                r[(i, j)] = r[(i, piv)];
                r[(i, piv)] = tmp;
            }
            perm.swap(j, piv);
            col_norms.swap(j, piv);
        }
        // recompute the pivot norm exactly rather than trusting downdates
        let exact = (j..n).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>().sqrt();
        if ref_norm == 0.0 || exact <= RANK_TOL * ref_norm {
            break;
        }
        let x: Vec<f64> = (j..n).map(|i| r[(i, j)]).collect();
        if let Some(v) = householder(&x) {
            for c in j..k {
                reflect_column(&mut r, &v, j, c);
            }
            reflect_vec(&mut qty, &v, j);
        }
        for i in j + 1..n {
            r[(i, j)] = 0.0;
        }
        for c in j + 1..k {
            col_norms[c] = (j + 1..n).map(|i| r[(i, c)] * r[(i, c)]).sum();
        }
        rank = j + 1;
    }

    let residual_sq: f64 = qty[rank..].iter().map(|v| v * v).sum();
    let z = if rank == 0 {
        vec![0.0; k]
    } else if rank == k {
        back_substitute(&r, &qty[..k])
    } else {
        minimum_norm(&r, rank, &qty[..rank])
    };
    let mut coefficients = vec![0.0; k];
    for (pos, &orig) in perm.iter().enumerate() {
        coefficients[orig] = z[pos];
    }
    Ok(LeastSquares { coefficients, residual_sq, rank })
}

fn back_substitute(r: &Matrix, c: &[f64]) -> Vec<f64> {
    let k = c.len();
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| r[(i, j)] * z[j]).sum();
        z[i] = (c[i] - s) / r[(i, i)];
    }
    z
}

/// Minimum-norm `z` with `T z = c`, where `T` is the leading `rank × k`
/// upper-trapezoidal block of `r`. Factors `Tᵀ = Z S` by Householder.
fn minimum_norm(r: &Matrix, rank: usize, c: &[f64]) -> Vec<f64> {
    let k = r.cols();
    let mut tt = Matrix::from_fn(k, rank, |i, j| r[(j, i)]);
    let mut reflectors = Vec::with_capacity(rank);
    for j in 0..rank {
        let x: Vec<f64> = (j..k).map(|i| tt[(i, j)]).collect();
        let v = householder(&x);
        if let Some(v) = &v {
            for col in j..rank {
                reflect_column(&mut tt, v, j, col);
            }
        }
        reflectors.push(v);
    }
    // Sᵀ w = c, Sᵀ lower triangular
    let mut w = vec![0.0; k];
    for i in 0..rank {
        let s: f64 = (0..i).map(|j| tt[(j, i)] * w[j]).sum();
        w[i] = (c[i] - s) / tt[(i, i)];
    }
    // z = Z w = H_0 H_1 … H_{r-1} w
    for (j, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            reflect_vec(&mut w, v, j);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let mut s = RandomStream::new(seed, 0);
        let g = Matrix::gaussian(n, n, &mut s);
        Matrix::from_fn(n, n, |i, j| g[(i, j)] + g[(j, i)])
    }

    /// det(M − tI) via LU, used to bracket eigenvalues by sign changes.
    fn char_poly(m: &Matrix, t: f64) -> f64 {
        let mut a = m.clone();
        a.add_scaled_identity(-t);
        let (s, l) = lu_log_abs_det(&a).unwrap();
        s * l.exp()
    }

    #[test]
    fn eigenvalues_trivial() {
        assert_eq!(symmetric_eigenvalues(&Matrix::identity(3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = Matrix::from_diag(&[2.0, -1.0, 5.0]);
        assert_eq!(symmetric_eigenvalues(&d).unwrap(), vec![-1.0, 2.0, 5.0]);
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial_roots() {
        let m = random_symmetric(8, 11);
        let eig = symmetric_eigenvalues(&m).unwrap();
        // Gershgorin interval, scanned for sign changes of det(M − tI)
        let bound = (0..8).map(|i| (0..8).map(|j| m[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
        let steps = 200_000;
        let h = 2.0 * bound / steps as f64;
        let mut roots = Vec::new();
        let mut prev_t = -bound;
        let mut prev = char_poly(&m, prev_t);
        for s in 1..=steps {
            let t = -bound + s as f64 * h;
            let cur = char_poly(&m, t);
            if prev.signum() != cur.signum() {
                let (mut lo, mut hi, mut flo) = (prev_t, t, prev);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = char_poly(&m, mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev = cur;
            prev_t = t;
        }
        assert_eq!(roots.len(), 8, "oracle failed to isolate every root");
        for (e, r) in eig.iter().zip(&roots) {
            assert!((e - r).abs() <= 1e-8 * bound, "{e} vs {r}");
        }
        let sum: f64 = eig.iter().sum();
        assert!(close(sum, m.trace(), 1e-8));
    }

    #[test]
    fn eigenvalues_reject_nonsymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(symmetric_eigenvalues(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn log_det_cases() {
        assert_eq!(spd_log_det(&Matrix::identity(5)).unwrap(), 0.0);
        assert!(close(spd_log_det(&Matrix::from_diag(&[2.0, 3.0])).unwrap(), 6f64.ln(), 1e-15));
        // I + v vᵀ with ‖v‖² = 3 has determinant 4
        let v = [1.0, 1.0, 1.0, 0.0];
        let m = Matrix::from_fn(4, 4, |i, j| v[i] * v[j] + if i == j { 1.0 } else { 0.0 });
        assert!(close(spd_log_det(&m).unwrap(), 4f64.ln(), 1e-14));
    }

    #[test]
    fn log_det_rejects_indefinite() {
        let m = Matrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(spd_log_det(&m), Err(Error::NotPositiveDefinite { index: 1, .. })));
        let singular = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(spd_log_det(&singular).is_err());
    }

    #[test]
    fn log_det_agrees_with_eigenvalue_product() {
        for seed in 0..10 {
            let mut s = RandomStream::new(seed, 3);
            let g = Matrix::gaussian(6, 9, &mut s);
            let m = g.gram_rows();
            let eig = symmetric_eigenvalues(&m).unwrap();
            let via_eig: f64 = eig.iter().map(|e| e.ln()).sum();
            assert!(close(spd_log_det(&m).unwrap(), via_eig, 1e-9));
            let (sign, lu) = lu_log_abs_det(&m).unwrap();
            assert_eq!(sign, 1.0);
            assert!(close(lu, via_eig, 1e-9));
        }
    }

    #[test]
    fn lu_handles_sign_and_singularity() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (s, l) = lu_log_abs_det(&m).unwrap();
        assert_eq!(s, -1.0);
        assert!(l.abs() < 1e-15);
        let z = Matrix::zeros(3, 3);
        assert_eq!(lu_log_abs_det(&z).unwrap().0, 0.0);
    }

    #[test]
    fn least_squares_identity_and_mean() {
        let ls = least_squares(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        for (c, w) in ls.coefficients.iter().zip([1.0, 2.0, 3.0]) {
            assert!((c - w).abs() < 1e-14);
        }
        assert!(ls.residual_sq < 1e-28);

        let ones = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let ls = least_squares(&ones, &[1.0, 3.0]).unwrap();
        assert!((ls.coefficients[0] - 2.0).abs() < 1e-14);
        assert!((ls.residual_sq - 2.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_orthogonal_component() {
        let mut s = RandomStream::new(5, 1);
        let a = Matrix::gaussian(8, 3, &mut s);
        let coef = [0.7, -1.2, 2.5];
        let in_span = a.matvec(&coef).unwrap();
        // project a random vector off the column space by Gram–Schmidt
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for j in 0..3 {
            let mut c = a.column(j);
            for b in &basis {
                let d = dot(&c, b);
                c.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
            let nrm = dot(&c, &c).sqrt();
            c.iter_mut().for_each(|x| *x /= nrm);
            basis.push(c);
        }
        let mut w: Vec<f64> = (0..8).map(|_| s.gaussian()).collect();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let y: Vec<f64> = in_span.iter().zip(&w).map(|(a, b)| a + b).collect();
        let ls = least_squares(&a, &y).unwrap();
        assert_eq!(ls.rank, 3);
        assert!((ls.residual_sq - dot(&w, &w)).abs() <= 1e-10 * dot(&w, &w).max(1.0));
        for (c, want) in ls.coefficients.iter().zip(coef) {
            assert!((c - want).abs() < 1e-10);
        }
    }

    #[test]
    fn least_squares_rank_deficient_gives_minimum_norm() {
        // duplicated column: minimum-norm solution splits the weight evenly
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let y = [1.0, 2.0, 5.0];
        let ls = least_squares(&a, &y).unwrap();
        assert_eq!(ls.rank, 1);
        assert!((ls.coefficients[0] - 0.5).abs() < 1e-12);
        assert!((ls.coefficients[1] - 0.5).abs() < 1e-12);
        assert!((ls.residual_sq - 25.0).abs() < 1e-12);

        // wide system: exact fit, minimum-norm x = Aᵀ(AAᵀ)⁻¹y
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 2.0]]).unwrap();
        let ls = least_squares(&a, &[9.0]).unwrap();
        assert!(ls.residual_sq < 1e-24);
        for (c, w) in ls.coefficients.iter().zip([1.0, 2.0, 2.0]) {
            assert!((c - w).abs() < 1e-12);
        }
    }

    #[test]
    fn least_squares_dimension_errors() {
        let a = Matrix::identity(2);
        assert!(matches!(least_squares(&a, &[1.0]), Err(Error::DimensionMismatch(_))));
        assert!(least_squares(&Matrix::zeros(2, 0), &[1.0, 2.0]).is_err());
    }
}
