use nalgebra::DMatrix;

use super::{acf, chi2_sf, TestResult};
use crate::error::{Error, Result};
use crate::linalg::least_squares;

/// Ljung-Box `Q = T(T+2) sum_{k<=lags} r_k^2 / (T-k)` against chi-square with
/// `lags - fitted_params` degrees of freedom.
pub fn ljung_box(x: &[f64], lags: usize, fitted_params: usize) -> Result<TestResult> {
    if lags <= fitted_params {
        return Err(Error::Parameter(format!("lags ({lags}) must exceed fitted parameters ({fitted_params})")));
    }
    let t = x.len();
    if t <= lags {
        return Err(Error::InsufficientData { required: lags + 1, actual: t });
    }
    let r = acf(x, lags)?;
    let tf = t as f64;
    let q = tf * (tf + 2.0) * r.iter().enumerate().map(|(i, rk)| rk * rk / (tf - (i + 1) as f64)).sum::<f64>();
    let df = lags - fitted_params;
    Ok(TestResult::new("ljung_box", q, chi2_sf(q, df as f64))
        .with("lags", lags)
        .with("fitted_params", fitted_params)
        .with("df", df))
}

/// Ljung-Box at several lags. Lags not exceeding `fitted_params` are skipped.
pub fn ljung_box_at(x: &[f64], lags: &[usize], fitted_params: usize) -> Result<Vec<TestResult>> {
    lags.iter().filter(|&&l| l > fitted_params).map(|&l| ljung_box(x, l, fitted_params)).collect()
}

/// Breusch-Godfrey LM test: regress the residuals on the original regressors
/// plus `lags` lagged residuals (zero before the sample) and compare
/// `T * R^2` with chi-square(`lags`).
///
/// `regressors` must contain the intercept column if the original model had
/// one.
pub fn breusch_godfrey(residuals: &[f64], regressors: &DMatrix<f64>, lags: usize) -> Result<TestResult> {
    let t = residuals.len();
    if regressors.nrows() != t {
        return Err(Error::Parameter(format!("regressors have {} rows, residuals {t}", regressors.nrows())));
    }
    if lags == 0 {
        return Err(Error::Parameter("Breusch-Godfrey needs lags >= 1".into()));
    }
    let k = regressors.ncols();
    if t <= k + lags {
        return Err(Error::InsufficientData { required: k + lags + 1, actual: t });
    }
    let aux = DMatrix::from_fn(t, k + lags, |i, j| {
        if j < k {
            regressors[(i, j)]
        } else {
            let l = j - k + 1;
            if i >= l {
                residuals[i - l]
            } else {
                0.0
            }
        }
    });
    let fit = least_squares(residuals, &aux)
        .map_err(|e| Error::Numerical(format!("Breusch-Godfrey auxiliary regression: {e}")))?;
    let stat = (t as f64 * fit.r_squared).max(0.0);
    Ok(TestResult::new("breusch_godfrey", stat, chi2_sf(stat, lags as f64)).with("lags", lags).with("df", lags))
}
