use std::io::Write;

use serde::Serialize;

use super::filter::{kalman_filter, stationary_init};
use super::mle::FittedModel;
use super::spec::StateSpaceSpec;
use crate::error::{Error, Result};
use crate::timeseries::{fmt_sig, YearMonth};

/// Premium path recovered from a fitted model and its residual pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiaSeries {
    /// One-step predicted premium `Z E_{t-1}(RP_t)`.
    pub rp_hat: Vec<f64>,
    /// `fe_t - rp_hat_t`
    pub re_hat: Vec<f64>,
    /// `rp_hat_t - rp_sys_t`
    pub a_hat: Vec<f64>,
    /// `sum phi_i rp_hat_{t-i} + sum theta_j a_hat_{t-j}`, pre-sample terms zero.
    pub rp_sys: Vec<f64>,
    /// `re_hat + a_hat`, equal to `fe - rp_sys`.
    pub combined: Vec<f64>,
    /// Filtered premium `Z E_t(RP_t)`.
    pub filtered_rp: Vec<f64>,
    /// Leading entries of `rp_sys` that use pre-sample zeros.
    pub burn_in: usize,
    /// ARMA order `(p, q)` of the premium model used.
    pub order: (usize, usize),
}

impl PremiaSeries {
    pub fn len(&self) -> usize {
        self.rp_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rp_hat.is_empty()
    }

    /// `combined` without the burn-in entries.
    pub fn combined_after_burn_in(&self) -> &[f64] {
        &self.combined[self.burn_in.min(self.combined.len())..]
    }

    /// Writes `date,rp_hat,re_hat,a_hat,rp_sys,combined`.
    pub fn write_csv<W: Write>(&self, dates: &[YearMonth], writer: W) -> Result<()> {
        if dates.len() != self.len() {
            return Err(Error::Parameter(format!(
                "{} dates for a premium series of length {}",
                dates.len(),
                self.len()
            )));
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "rp_hat", "re_hat", "a_hat", "rp_sys", "combined"])?;
        for (t, d) in dates.iter().enumerate() {
            w.write_record([
                d.to_string(),
                fmt_sig(self.rp_hat[t], 10),
                fmt_sig(self.re_hat[t], 10),
                fmt_sig(self.a_hat[t], 10),
                fmt_sig(self.rp_sys[t], 10),
                fmt_sig(self.combined[t], 10),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the filter at the fitted parameters and decomposes `fe`.
pub fn extract_premia(fitted: &FittedModel, fe: &[f64]) -> Result<PremiaSeries> {
    if fitted.mean != 0.0 {
        let centred: Vec<f64> = fe.iter().map(|v| v - fitted.mean).collect();
        return extract_premia_with_spec(&fitted.spec, &centred);
    }
    extract_premia_with_spec(&fitted.spec, fe)
}

pub fn extract_premia_with_spec(spec: &StateSpaceSpec, fe: &[f64]) -> Result<PremiaSeries> {
    let init = stationary_init(spec)?;
    let out = kalman_filter(spec, fe, &init)?;
    let z = spec.z();
    let rp_hat: Vec<f64> = out.pred_mean.iter().map(|m| z.dot(m)).collect();
    let filtered_rp = out.filt_mean.iter().map(|m| z.dot(m)).collect();
    let re_hat: Vec<f64> = fe.iter().zip(&rp_hat).map(|(f, r)| f - r).collect();

    let (ar, ma) = (spec.ar_coeffs(), spec.ma_coeffs());
    let n = fe.len();
    let mut rp_sys = vec![0.0; n];
    let mut a_hat = vec![0.0; n];
    for t in 0..n {
        let mut sys = 0.0;
        for (i, phi) in ar.iter().enumerate() {
            if t > i {
                sys += phi * rp_hat[t - i - 1];
            }
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j {
                sys += theta * a_hat[t - j - 1];
            }
        }
        rp_sys[t] = sys;
        a_hat[t] = rp_hat[t] - sys;
    }
    let combined = re_hat.iter().zip(&a_hat).map(|(e, a)| e + a).collect();
    Ok(PremiaSeries {
        rp_hat,
        re_hat,
        a_hat,
        rp_sys,
        combined,
        filtered_rp,
        burn_in: spec.p().max(spec.q()),
        order: (spec.p(), spec.q()),
    })
}
