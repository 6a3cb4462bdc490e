use nalgebra::DMatrix;

use super::{mackinnon_p_ct, TestResult};
use crate::error::{Error, Result};
use crate::linalg::least_squares;

/// Schwert's upper bound `floor(12 (T/100)^(1/4))`.
pub fn schwert_max_lag(t: usize) -> usize {
    (12.0 * (t as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Design and response for
/// `dy_t = a + b t + g y_{t-1} + sum_i d_i dy_{t-i}` using observations
/// `first..n` of `y` (`first >= lags + 1`).
fn adf_design(y: &[f64], lags: usize, first: usize) -> (Vec<f64>, DMatrix<f64>) {
    let rows = y.len() - first;
    let resp: Vec<f64> = (first..y.len()).map(|t| y[t] - y[t - 1]).collect();
    let x = DMatrix::from_fn(rows, 3 + lags, |i, j| {
        let t = first + i;
        match j {
            0 => 1.0,
            1 => t as f64,
            2 => y[t - 1],
            _ => {
                let l = j - 2;
                y[t - l] - y[t - l - 1]
            }
        }
    });
    (resp, x)
}

/// Augmented Dickey-Fuller test with intercept and linear trend.
///
/// The lag order minimises AIC over `0..=max_lag` on a common estimation
/// sample; the chosen regression is then re-estimated on every observation it
/// can use. `max_lag` defaults to [`schwert_max_lag`]. The statistic is the
/// t-ratio on the lagged level and the p-value is MacKinnon's asymptotic
/// approximation.
pub fn adf_test(x: &[f64], max_lag: Option<usize>) -> Result<TestResult> {
    let n = x.len();
    if n < 20 {
        return Err(Error::InsufficientData { required: 20, actual: n });
    }
    let span = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x.iter().cloned().fold(f64::INFINITY, f64::min);
    if span == 0.0 {
        return Err(Error::DegenerateInput("ADF on a constant series".into()));
    }
    // keep at least ~10 residual degrees of freedom
    let cap = (n.saturating_sub(14)) / 2;
    let max_lag = max_lag.unwrap_or_else(|| schwert_max_lag(n)).min(cap);

    let first = max_lag + 1;
    let mut best = (f64::INFINITY, 0usize);
    for lags in 0..=max_lag {
        let (resp, design) = adf_design(x, lags, first);
        let fit = match least_squares(&resp, &design) {
            Ok(f) => f,
            Err(Error::SingularDesign(_)) => continue,
            Err(e) => return Err(e),
        };
        let nobs = fit.n as f64;
        let aic = nobs * (fit.ssr / nobs).ln() + 2.0 * fit.k as f64;
        if aic < best.0 {
            best = (aic, lags);
        }
    }
    let lags = best.1;
    let (resp, design) = adf_design(x, lags, lags + 1);
    let fit = least_squares(&resp, &design)?;
    let stat = fit.t_stat(2);
    Ok(TestResult::new("adf", stat, mackinnon_p_ct(stat))
        .with("deterministic", "intercept_and_trend")
        .with("lags", lags)
        .with("max_lag", max_lag)
        .with("nobs", fit.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn schwert_bound() {
        assert_eq!(schwert_max_lag(100), 12);
        assert_eq!(schwert_max_lag(446), 17);
        assert_eq!(schwert_max_lag(500), 17);
    }

    #[test]
    fn too_short_or_constant() {
        assert!(matches!(adf_test(&[1.0; 10], None), Err(Error::InsufficientData { .. })));
        assert!(matches!(adf_test(&[1.0; 40], None), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn white_noise_rejects_unit_root() {
        let hits = (0..200u64).filter(|&s| adf_test(&noise(s, 500), None).unwrap().p_value < 0.01).count();
        assert!(hits >= 198, "{hits}/200 rejections");
    }

    #[test]
    fn random_walk_does_not_reject() {
        let hits = (0..200u64)
            .filter(|&s| {
                let mut level = 0.0;
                let walk: Vec<f64> = noise(1000 + s, 500)
                    .into_iter()
                    .map(|e| {
                        level += e;
                        level
                    })
                    .collect();
                adf_test(&walk, None).unwrap().p_value > 0.10
            })
            .count();
        assert!(hits >= 180, "{hits}/200 with p > 0.10");
    }

    #[test]
    fn explicit_zero_lag_is_plain_dickey_fuller() {
        let x = noise(3, 100);
        let r = adf_test(&x, Some(0)).unwrap();
        assert_eq!(r.meta_usize("lags"), Some(0));
        assert_eq!(r.meta_usize("nobs"), Some(99));
    }
}
