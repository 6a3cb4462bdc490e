use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::mean;
use crate::error::{Error, Result};
use crate::timeseries::fmt_sig;

/// Strongest conventional significance level a correlation exceeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SigLevel {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "10%")]
    Ten,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "1%")]
    One,
}

impl SigLevel {
    pub fn label(self) -> &'static str {
        match self {
            SigLevel::None => "none",
            SigLevel::Ten => "10%",
            SigLevel::Five => "5%",
            SigLevel::One => "1%",
        }
    }

    pub fn stars(self) -> &'static str {
        match self {
            SigLevel::None => "",
            SigLevel::Ten => "*",
            SigLevel::Five => "**",
            SigLevel::One => "***",
        }
    }

    /// True when the level is at least as strict as `alpha`.
    pub fn rejects_at(self, alpha: f64) -> bool {
        match self {
            SigLevel::None => false,
            SigLevel::Ten => alpha >= 0.10,
            SigLevel::Five => alpha >= 0.05,
            SigLevel::One => alpha >= 0.01,
        }
    }

    fn classify(value: f64, t: usize) -> Self {
        let v = value.abs();
        if v > significance_threshold(0.01, t) {
            SigLevel::One
        } else if v > significance_threshold(0.05, t) {
            SigLevel::Five
        } else if v > significance_threshold(0.10, t) {
            SigLevel::Ten
        } else {
            SigLevel::None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramRow {
    pub lag: usize,
    pub pac: f64,
    pub ac: f64,
    pub pac_sig: SigLevel,
    pub ac_sig: SigLevel,
}

/// Two-sided critical value. The three tabled levels use the rounded values
/// 1.645, 1.960 and 2.576; other levels fall back to the normal quantile.
pub fn z_critical(alpha: f64) -> f64 {
    const TABLE: [(f64, f64); 3] = [(0.10, 1.645), (0.05, 1.960), (0.01, 2.576)];
    for (a, z) in TABLE {
        if (alpha - a).abs() < 1e-12 {
            return z;
        }
    }
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(1.0 - alpha / 2.0)
}

/// Band `z_{alpha/2} / sqrt(T)` for sample (partial) autocorrelations.
pub fn significance_threshold(alpha: f64, t: usize) -> f64 {
    z_critical(alpha) / (t as f64).sqrt()
}

/// Sample autocorrelations `r_1..=r_max_lag` (denominator: full-sample sum of
/// squares).
pub fn acf(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if max_lag >= n {
        return Err(Error::Parameter(format!("max_lag {max_lag} must be below length {n}")));
    }
    let mu = mean(x);
    let dev: Vec<f64> = x.iter().map(|v| v - mu).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if denom == 0.0 || denom.sqrt() <= 1e-13 * mu.abs() * (n as f64).sqrt() {
        return Err(Error::DegenerateInput("autocorrelation of a constant series".into()));
    }
    Ok((1..=max_lag).map(|k| dev[k..].iter().zip(&dev[..n - k]).map(|(a, b)| a * b).sum::<f64>() / denom).collect())
}

/// Partial autocorrelations from autocorrelations `r_1..=r_K` by the
/// Durbin-Levinson recursion.
pub fn pacf_durbin_levinson(r: &[f64]) -> Vec<f64> {
    let k_max = r.len();
    let mut pacf = Vec::with_capacity(k_max);
    let mut phi_prev: Vec<f64> = Vec::new();
    let mut v = 1.0;
    for k in 1..=k_max {
        let num = r[k - 1] - (1..k).map(|j| phi_prev[j - 1] * r[k - j - 1]).sum::<f64>();
        let phi_kk = if v > 0.0 { num / v } else { 0.0 };
        let mut phi = vec![0.0; k];
        for j in 1..k {
            phi[j - 1] = phi_prev[j - 1] - phi_kk * phi_prev[k - j - 1];
        }
        phi[k - 1] = phi_kk;
        v *= 1.0 - phi_kk * phi_kk;
        pacf.push(phi_kk);
        phi_prev = phi;
    }
    pacf
}

pub fn correlogram(x: &[f64], max_lag: usize) -> Result<Vec<CorrelogramRow>> {
    let t = x.len();
    if max_lag == 0 || 2 * max_lag >= t {
        return Err(Error::Parameter(format!("max_lag {max_lag} must be in 1..{} for length {t}", t.div_ceil(2))));
    }
    let ac = acf(x, max_lag)?;
    let pac = pacf_durbin_levinson(&ac);
    Ok(ac
        .iter()
        .zip(&pac)
        .enumerate()
        .map(|(i, (&ac, &pac))| CorrelogramRow {
            lag: i + 1,
            pac,
            ac,
            pac_sig: SigLevel::classify(pac, t),
            ac_sig: SigLevel::classify(ac, t),
        })
        .collect())
}

/// Writes `lag,pac,ac,pac_sig,ac_sig`.
pub fn write_correlogram_csv<W: Write>(rows: &[CorrelogramRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["lag", "pac", "ac", "pac_sig", "ac_sig"])?;
    for r in rows {
        w.write_record([
            r.lag.to_string(),
            fmt_sig(r.pac, 10),
            fmt_sig(r.ac, 10),
            r.pac_sig.label().to_string(),
            r.ac_sig.label().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn reported_thresholds() {
        assert!((significance_threshold(0.05, 446) - 0.09281).abs() < 5e-5);
        assert!((significance_threshold(0.01, 446) - 0.12197).abs() < 5e-5);
        assert!((significance_threshold(0.10, 446) - 0.07789).abs() < 5e-5);
        assert!((significance_threshold(0.01, 218) - 0.17446).abs() < 5e-5);
        assert!((significance_threshold(0.05, 218) - 0.13275).abs() < 5e-5);
        assert!((significance_threshold(0.10, 218) - 0.11140).abs() < 5e-5);
    }

    #[test]
    fn threshold_times_root_t_is_z() {
        for t in [10, 218, 445, 446, 10_000] {
            assert!((significance_threshold(0.05, t) * (t as f64).sqrt() - 1.96).abs() < 1e-12);
        }
    }

    #[test]
    fn durbin_levinson_ar1() {
        // AR(1) autocorrelations phi^k have PACF (phi, 0, 0, ...)
        let r: Vec<f64> = (1..=6).map(|k| 0.6f64.powi(k)).collect();
        let p = pacf_durbin_levinson(&r);
        assert!((p[0] - 0.6).abs() < 1e-14);
        assert!(p[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn durbin_levinson_matches_yule_walker_lag2() {
        // phi_22 = (r2 - r1^2) / (1 - r1^2)
        let r = [0.5, 0.1];
        let p = pacf_durbin_levinson(&r);
        assert!((p[1] - (0.1 - 0.25) / 0.75).abs() < 1e-15);
    }

    #[test]
    fn max_lag_too_large() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        assert!(matches!(correlogram(&x, 10), Err(Error::Parameter(_))));
        assert!(correlogram(&x, 9).is_ok());
    }

    #[test]
    fn constant_series_is_degenerate() {
        assert!(matches!(correlogram(&[2.0; 30], 5), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn white_noise_lag1_band_coverage() {
        let t = 300;
        let band = significance_threshold(0.05, t);
        let inside = (0..1000u64)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x: Vec<f64> = (0..t).map(|_| StandardNormal.sample(&mut rng)).collect();
                acf(&x, 1).unwrap()[0].abs() <= band
            })
            .count();
        // binomial(1000, 0.95) sd ~ 6.9; the sample ACF is also slightly biased
        // towards -1/T, which only adds coverage
        assert!((inside as f64 / 1000.0 - 0.95).abs() < 0.025, "coverage {inside}/1000");
    }

    #[test]
    fn sig_levels() {
        let t = 446;
        assert_eq!(SigLevel::classify(0.097, t), SigLevel::Five);
        assert_eq!(SigLevel::classify(-0.080, t), SigLevel::Ten);
        assert_eq!(SigLevel::classify(0.13, t), SigLevel::One);
        assert_eq!(SigLevel::classify(0.05, t), SigLevel::None);
        assert!(SigLevel::Five.rejects_at(0.05) && !SigLevel::Ten.rejects_at(0.05));
    }
}
