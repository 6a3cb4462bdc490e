use serde::{Deserialize, Serialize};

use super::{chi2_sf, mean, TestResult};
use crate::error::{Error, Result};

/// First four moments of a sample.
///
/// Skewness and excess kurtosis are the moment-ratio estimators
/// `m3 / m2^1.5` and `m4 / m2^2 - 3` with population central moments; both
/// are `None` when the sample has zero variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation, `n - 1` denominator.
    pub sd: f64,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

pub fn moments(x: &[f64]) -> Result<MomentSummary> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientData { required: 2, actual: n });
    }
    let mu = mean(x);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mu;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let nf = n as f64;
    let sd = (m2 / (nf - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    // spread at the rounding level of the mean counts as constant
    let degenerate = m2 == 0.0 || m2.sqrt() <= 1e-13 * mu.abs();
    let (skewness, excess_kurtosis) =
        if degenerate { (None, None) } else { (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2) - 3.0)) };
    Ok(MomentSummary { n, mean: mu, sd, skewness, excess_kurtosis })
}

/// Jarque-Bera statistic from already computed moments.
pub fn jarque_bera_from_moments(n: usize, skewness: f64, excess_kurtosis: f64) -> TestResult {
    let stat = n as f64 / 6.0 * (skewness.powi(2) + excess_kurtosis.powi(2) / 4.0);
    TestResult::new("jarque_bera", stat, chi2_sf(stat, 2.0)).with("df", 2).with("n", n)
}

pub fn jarque_bera(x: &[f64]) -> Result<TestResult> {
    if x.len() < 8 {
        return Err(Error::InsufficientData { required: 8, actual: x.len() });
    }
    let m = moments(x)?;
    match (m.skewness, m.excess_kurtosis) {
        (Some(s), Some(k)) => Ok(jarque_bera_from_moments(m.n, s, k)),
        _ => Err(Error::DegenerateInput("Jarque-Bera needs a non-constant series".into())),
    }
}
