//! Descriptive statistics and the hypothesis tests used on forward errors
//! and model residuals.

mod adf;
mod correlogram;
mod mackinnon;
mod moments;
mod portmanteau;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub use adf::{adf_test, schwert_max_lag};
pub use correlogram::{
    acf, correlogram, pacf_durbin_levinson, significance_threshold, write_correlogram_csv, z_critical, CorrelogramRow,
    SigLevel,
};
pub use mackinnon::mackinnon_p_ct;
pub use moments::{jarque_bera, jarque_bera_from_moments, moments, MomentSummary};
pub use portmanteau::{breusch_godfrey, ljung_box, ljung_box_at};

/// Outcome of a hypothesis test.
///
/// `meta` holds test-specific parameters such as lags used, deterministic
/// terms and degrees of freedom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl TestResult {
    pub(crate) fn new(test: &str, statistic: f64, p_value: f64) -> Self {
        Self { test: test.to_string(), statistic, p_value: p_value.clamp(0.0, 1.0), meta: BTreeMap::new() }
    }

    pub(crate) fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn meta_usize(&self, key: &str) -> Option<usize> {
        self.meta.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Upper-tail chi-square probability.
pub(crate) fn chi2_sf(stat: f64, df: f64) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    dist.sf(stat).clamp(0.0, 1.0)
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}
