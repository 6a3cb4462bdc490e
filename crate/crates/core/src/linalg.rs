//! Small dense helpers shared by the test statistics.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Multiple least-squares fit `y = X b + e`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coef: DVector<f64>,
    pub se: DVector<f64>,
    pub ssr: f64,
    /// Centred R^2.
    pub r_squared: f64,
    pub n: usize,
    pub k: usize,
}

impl LeastSquares {
    pub fn t_stat(&self, i: usize) -> f64 {
        self.coef[i] / self.se[i]
    }

    pub fn sigma2(&self) -> f64 {
        self.ssr / (self.n - self.k) as f64
    }
}

/// Solves least squares by Householder QR. Rank deficiency (a diagonal of R
/// that is tiny relative to the largest) is reported as a singular design.
pub fn least_squares(y: &[f64], x: &DMatrix<f64>) -> Result<LeastSquares> {
    let n = x.nrows();
    let k = x.ncols();
    if y.len() != n {
        return Err(Error::Parameter(format!("y has {} rows, X has {n}", y.len())));
    }
    if n <= k {
        return Err(Error::InsufficientData { required: k + 1, actual: n });
    }
    let yv = DVector::from_column_slice(y);
    let qr = x.clone().qr();
    let r = qr.r();
    let max_diag = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if max_diag == 0.0 || (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * max_diag) {
        return Err(Error::SingularDesign(format!("{n}x{k} design is rank deficient")));
    }
    let qty = qr.q().transpose() * &yv;
    let coef = r.solve_upper_triangular(&qty).ok_or_else(|| Error::SingularDesign("triangular solve failed".into()))?;
    let resid = &yv - x * &coef;
    let ssr = resid.norm_squared();

    // (X'X)^-1 = R^-1 R^-T
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::SingularDesign("R not invertible".into()))?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let sigma2 = ssr / (n - k) as f64;
    let se = DVector::from_iterator(k, (0..k).map(|i| (sigma2 * xtx_inv[(i, i)]).sqrt()));

    let mean = yv.mean();
    let tss: f64 = yv.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if tss > 0.0 { 1.0 - ssr / tss } else { 0.0 };
    Ok(LeastSquares { coef, se, ssr, r_squared, n, k })
}
