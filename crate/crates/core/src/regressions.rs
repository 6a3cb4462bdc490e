//! Univariate regressions on the forward-spot differential.
//!
//! * fit 1: forward error on `f_t - s_t`
//! * fit 2: spot change on `f_t - s_t`
//! * fit 3: `-fe_t = s_{t+1} - f_t` on `f_t - s_t` (slope `-beta_1`)
//! * fit 4: `fe_t - (s_{t+1} - s_t) = f_t - 2 s_{t+1} + s_t` on `f_t - s_t`
//!   (slope `beta_1 - beta_2`)
//!
//! A significant `beta_3` says forwards are biased predictors; a positive
//! `beta_4` says premium variance dominates expected-depreciation variance.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::diagnostics::{adf_test, TestResult};
use crate::error::{Error, Result};
use crate::timeseries::AlignedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StdErrorKind {
    /// Homoskedastic OLS standard errors.
    #[default]
    Classical,
    /// White heteroskedasticity-consistent errors with the `n/(n-2)` scaling.
    White,
}

/// Intercept-plus-slope least-squares fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub alpha: f64,
    pub beta: f64,
    pub se_alpha: f64,
    pub se_beta: f64,
    pub t_alpha: f64,
    pub t_beta: f64,
    pub p_two_tail_alpha: f64,
    pub p_two_tail_beta: f64,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub n: usize,
    pub se_kind: StdErrorKind,
}

pub fn ols(y: &[f64], x: &[f64]) -> Result<OlsFit> {
    ols_with(y, x, StdErrorKind::Classical)
}

pub fn ols_with(y: &[f64], x: &[f64], se_kind: StdErrorKind) -> Result<OlsFit> {
    let n = y.len();
    if x.len() != n {
        return Err(Error::Parameter(format!("y has {n} values, x has {}", x.len())));
    }
    if n < 3 {
        return Err(Error::InsufficientData { required: 3, actual: n });
    }
    let nf = n as f64;
    let x_bar = x.iter().sum::<f64>() / nf;
    let y_bar = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - x_bar).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - x_bar) * (b - y_bar)).sum();
    let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if sxx <= (1e-12 * scale).powi(2) * nf {
        return Err(Error::SingularDesign("regressor is constant".into()));
    }
    let beta = sxy / sxx;
    let alpha = y_bar - beta * x_bar;
    let residuals: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - alpha - beta * a).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let syy: f64 = y.iter().map(|v| (v - y_bar).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };

    let (var_alpha, var_beta) = match se_kind {
        StdErrorKind::Classical => {
            let s2 = ssr / (nf - 2.0);
            (s2 * (1.0 / nf + x_bar * x_bar / sxx), s2 / sxx)
        }
        StdErrorKind::White => {
            // sandwich (X'X)^-1 X' diag(e^2) X (X'X)^-1 for X = [1, x]
            let (mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0);
            for (e, xi) in residuals.iter().zip(x) {
                let e2 = e * e;
                m00 += e2;
                m01 += e2 * xi;
                m11 += e2 * xi * xi;
            }
            let sx: f64 = x.iter().sum();
            let sxx_raw: f64 = x.iter().map(|v| v * v).sum();
            let det = nf * sxx_raw - sx * sx;
            let (i00, i01, i11) = (sxx_raw / det, -sx / det, nf / det);
            let adj = nf / (nf - 2.0);
            let va = i00 * (i00 * m00 + i01 * m01) + i01 * (i00 * m01 + i01 * m11);
            let vb = i01 * (i01 * m00 + i11 * m01) + i11 * (i01 * m01 + i11 * m11);
            (adj * va, adj * vb)
        }
    };
    let se_alpha = var_alpha.sqrt();
    let se_beta = var_beta.sqrt();
    let t_alpha = alpha / se_alpha;
    let t_beta = beta / se_beta;
    Ok(OlsFit {
        alpha,
        beta,
        se_alpha,
        se_beta,
        t_alpha,
        t_beta,
        p_two_tail_alpha: student_two_tail(t_alpha, nf - 2.0),
        p_two_tail_beta: student_two_tail(t_beta, nf - 2.0),
        residuals,
        r_squared,
        n,
        se_kind,
    })
}

fn student_two_tail(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// One-tail p-value for `H1: coefficient > 0` from the two-tail value.
pub fn one_tail_upper(p_two_tail: f64, t: f64) -> f64 {
    if t > 0.0 {
        p_two_tail / 2.0
    } else {
        1.0 - p_two_tail / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamaFits {
    pub fit1: OlsFit,
    pub fit2: OlsFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjustedFits {
    pub fit3: OlsFit,
    pub fit4: OlsFit,
}

pub fn run_fama(s: &AlignedSeries) -> Result<FamaFits> {
    Ok(FamaFits { fit1: ols(s.fwd_err(), s.fs_diff())?, fit2: ols(s.spot_chg(), s.fs_diff())? })
}

pub fn run_adjusted(s: &AlignedSeries) -> Result<AdjustedFits> {
    let neg_fe: Vec<f64> = s.fwd_err().iter().map(|v| -v).collect();
    let diff: Vec<f64> = s.fwd_err().iter().zip(s.spot_chg()).map(|(fe, ds)| fe - ds).collect();
    Ok(AdjustedFits { fit3: ols(&neg_fe, s.fs_diff())?, fit4: ols(&diff, s.fs_diff())? })
}

/// Joint reading of the two adjusted regressions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiaTimeVariationVerdict {
    pub beta3_fit: OlsFit,
    pub beta4_fit: OlsFit,
    pub p_beta3_two_tail: f64,
    pub p_beta4_one_tail: f64,
    pub resid_adf_beta3: TestResult,
    pub resid_adf_beta4: TestResult,
    pub reject_level: f64,
    pub premia_exist_and_vary: bool,
}

/// One hypothesis row of the report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub beta: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
    pub resid_adf_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table5 {
    /// `H1: beta_3 != 0`, two-tail p.
    pub beta3: HypothesisRow,
    /// `H1: beta_4 > 0`, one-tail p.
    pub beta4: HypothesisRow,
    pub level: f64,
    pub premia_exist_and_vary: bool,
}

impl PremiaTimeVariationVerdict {
    pub fn table(&self) -> Table5 {
        let row = |fit: &OlsFit, p: f64, adf: &TestResult| HypothesisRow {
            beta: fit.beta,
            se: fit.se_beta,
            t: fit.t_beta,
            p,
            resid_adf_p: adf.p_value,
        };
        Table5 {
            beta3: row(&self.beta3_fit, self.p_beta3_two_tail, &self.resid_adf_beta3),
            beta4: row(&self.beta4_fit, self.p_beta4_one_tail, &self.resid_adf_beta4),
            level: self.reject_level,
            premia_exist_and_vary: self.premia_exist_and_vary,
        }
    }
}

pub fn test_time_varying_premia(s: &AlignedSeries, level: f64) -> Result<PremiaTimeVariationVerdict> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Parameter(format!("significance level {level} not in (0, 1)")));
    }
    let AdjustedFits { fit3, fit4 } = run_adjusted(s)?;
    let p3 = fit3.p_two_tail_beta;
    let p4 = one_tail_upper(fit4.p_two_tail_beta, fit4.t_beta);
    let adf3 = adf_test(&fit3.residuals, None)?;
    let adf4 = adf_test(&fit4.residuals, None)?;
    let verdict = p3 < level && p4 < level && adf3.p_value < level && adf4.p_value < level;
    Ok(PremiaTimeVariationVerdict {
        beta3_fit: fit3,
        beta4_fit: fit4,
        p_beta3_two_tail: p3,
        p_beta4_one_tail: p4,
        resid_adf_beta3: adf3,
        resid_adf_beta4: adf4,
        reject_level: level,
        premia_exist_and_vary: verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Vector2};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn identity_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.3 - 1.0).collect();
        let f = ols(&x, &x).unwrap();
        assert!(f.alpha.abs() < 1e-14 && (f.beta - 1.0).abs() < 1e-14);
        assert!(f.residuals.iter().all(|e| e.abs() < 1e-14));
        assert!((f.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let f = ols(&y, &x).unwrap();
        assert!((f.alpha - 1.0).abs() < 1e-12 && (f.beta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_regressor() {
        assert!(matches!(ols(&[1.0, 2.0, 3.0], &[4.0; 3]), Err(Error::SingularDesign(_))));
    }

    #[test]
    fn matches_normal_equations() {
        let x = normals(1, 50);
        let y: Vec<f64> = normals(2, 50).iter().zip(&x).map(|(e, v)| 0.3 + 1.7 * v + e).collect();
        // X'X b = X'y with X = [1, x]
        let (n, sx, sxx) = (50.0, x.iter().sum::<f64>(), x.iter().map(|v| v * v).sum::<f64>());
        let (sy, sxy) = (y.iter().sum::<f64>(), x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>());
        let b = Matrix2::new(n, sx, sx, sxx).lu().solve(&Vector2::new(sy, sxy)).unwrap();
        let f = ols(&y, &x).unwrap();
        assert!((f.alpha - b[0]).abs() < 1e-10);
        assert!((f.beta - b[1]).abs() < 1e-10);
        let xbar = sx / n;
        let ybar = sy / n;
        let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - xbar) * (b - ybar)).sum();
        let var: f64 = x.iter().map(|a| (a - xbar).powi(2)).sum();
        assert!((f.beta - cov / var).abs() < 1e-10);
    }

    #[test]
    fn white_errors_match_classical_under_equal_leverage() {
        // symmetric design with constant |residual| makes the sandwich collapse
        // to the classical form up to the n/(n-2) scaling
        let x = [-1.0, -1.0, 1.0, 1.0];
        let y = [-1.0 + 0.5, -1.0 - 0.5, 1.0 + 0.5, 1.0 - 0.5];
        let c = ols_with(&y, &x, StdErrorKind::Classical).unwrap();
        let w = ols_with(&y, &x, StdErrorKind::White).unwrap();
        assert!((c.se_beta - w.se_beta).abs() < 1e-12, "{} {}", c.se_beta, w.se_beta);
    }

    #[test]
    fn one_tail_convention() {
        assert!((one_tail_upper(0.000270643, 3.67) - 0.000135).abs() < 5e-7);
        assert!((one_tail_upper(0.2, -1.0) - 0.9).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn residuals_centred_and_orthogonal(seed in 0u64..10_000, n in 3usize..200) {
            let x = normals(seed, n);
            let y = normals(seed + 77_777, n);
            let f = ols(&y, &x).unwrap();
            let scale: f64 = y.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
            let sum: f64 = f.residuals.iter().sum();
            let dot: f64 = f.residuals.iter().zip(&x).map(|(e, v)| e * v).sum();
            prop_assert!(sum.abs() <= 1e-10 * scale);
            prop_assert!(dot.abs() <= 1e-8 * scale);
            prop_assert!((f.t_beta - f.beta / f.se_beta).abs() <= 1e-12 * f.t_beta.abs().max(1.0));
        }
    }
}
