//! Box-Jenkins order identification for the forward errors, candidate ARMA
//! fits and the mapping from the forward-error process to the premium process.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::diagnostics::{adf_test, breusch_godfrey, correlogram, ljung_box, CorrelogramRow, SigLevel};
use crate::error::{Error, Result};
use crate::state_space::{fit_arma, kalman_filter, stationary_init, FittedModel, MleOptions};

pub const LB_LAGS: [usize; 3] = [12, 24, 36];
pub const BG_LAGS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSuggestion {
    pub p_suggested: usize,
    pub q_suggested: usize,
    pub correlogram: Vec<CorrelogramRow>,
}

/// Suggests `p` from the partial autocorrelations and `q` from the
/// autocorrelations: the highest lag such that every lag from 1 up to it is
/// significant at `level`. Isolated spikes further out do not count.
pub fn identify_orders(fe: &[f64], max_lag: usize, level: f64) -> Result<OrderSuggestion> {
    let rows = correlogram(fe, max_lag)?;
    let contiguous =
        |sig: &dyn Fn(&CorrelogramRow) -> SigLevel| rows.iter().take_while(|r| sig(r).rejects_at(level)).count();
    let p_suggested = contiguous(&|r| r.pac_sig);
    let q_suggested = contiguous(&|r| r.ac_sig);
    Ok(OrderSuggestion { p_suggested, q_suggested, correlogram: rows })
}

/// Trial set built around the suggested orders, always including the three
/// low-order models.
pub fn default_candidates(p_suggested: usize, q_suggested: usize) -> Vec<(usize, usize)> {
    let mut set = vec![(1, 1), (1, 0), (0, 1)];
    for pq in [(p_suggested, q_suggested), (p_suggested, 0), (0, q_suggested)] {
        if pq.0 + pq.1 > 0 && pq.0 <= 4 && pq.1 <= 4 && !set.contains(&pq) {
            set.push(pq);
        }
    }
    set
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Aic,
    Sc,
    Hqc,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub p: usize,
    pub q: usize,
    pub aic: Option<f64>,
    pub sc: Option<f64>,
    pub hqc: Option<f64>,
    pub loglik: Option<f64>,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub lb_p_values: BTreeMap<usize, f64>,
    pub bg_p_value: Option<f64>,
    pub resid_adf_p: Option<f64>,
    pub selected_by: Vec<Criterion>,
    pub converged: bool,
    /// Set when estimation or a diagnostic failed.
    pub error: Option<String>,
}

impl CandidateReport {
    fn empty(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            aic: None,
            sc: None,
            hqc: None,
            loglik: None,
            phi: Vec::new(),
            theta: Vec::new(),
            lb_p_values: BTreeMap::new(),
            bg_p_value: None,
            resid_adf_p: None,
            selected_by: Vec::new(),
            converged: false,
            error: None,
        }
    }

    fn criterion(&self, c: Criterion) -> Option<f64> {
        match c {
            Criterion::Aic => self.aic,
            Criterion::Sc => self.sc,
            Criterion::Hqc => self.hqc,
        }
    }
}

/// One-step prediction errors of a classical ARMA fit.
pub fn arma_residuals(fit: &FittedModel, fe: &[f64]) -> Result<Vec<f64>> {
    let centred: Vec<f64> = fe.iter().map(|v| v - fit.mean).collect();
    let init = stationary_init(&fit.spec)?;
    Ok(kalman_filter(&fit.spec, &centred, &init)?.innovation)
}

/// Intercept plus `p` lags of the demeaned series, pre-sample lags zero.
fn bg_regressors(fe: &[f64], mean: f64, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(fe.len(), p + 1, |t, j| match j {
        0 => 1.0,
        _ if t >= j => fe[t - j] - mean,
        _ => 0.0,
    })
}

fn diagnose(fit: &FittedModel, fe: &[f64], report: &mut CandidateReport) -> Result<()> {
    let resid = arma_residuals(fit, fe)?;
    let fitted_params = fit.layout.p + fit.layout.q;
    for lags in LB_LAGS {
        if lags > fitted_params && lags < resid.len() {
            report.lb_p_values.insert(lags, ljung_box(&resid, lags, fitted_params)?.p_value);
        }
    }
    let x = bg_regressors(fe, fit.mean, fit.layout.p);
    report.bg_p_value = Some(breusch_godfrey(&resid, &x, BG_LAGS)?.p_value);
    report.resid_adf_p = Some(adf_test(&resid, None)?.p_value);
    Ok(())
}

/// Estimates every candidate as a classical ARMA and runs the residual
/// diagnostics. A candidate that fails is kept with its error recorded.
pub fn fit_candidates(fe: &[f64], candidates: &[(usize, usize)], opts: &MleOptions) -> Result<Vec<CandidateReport>> {
    if candidates.is_empty() {
        return Err(Error::Parameter("no candidate orders given".into()));
    }
    let mut reports: Vec<CandidateReport> = candidates
        .iter()
        .map(|&(p, q)| {
            let mut report = CandidateReport::empty(p, q);
            match fit_arma(p, q, fe, opts) {
                Ok(fit) => {
                    report.aic = Some(fit.aic());
                    report.sc = Some(fit.sc());
                    report.hqc = Some(fit.hqc());
                    report.loglik = Some(fit.loglik);
                    report.phi = fit.spec.ar_coeffs().to_vec();
                    report.theta = fit.spec.ma_coeffs().to_vec();
                    report.converged = fit.converged;
                    if let Err(e) = diagnose(&fit, fe, &mut report) {
                        report.error = Some(format!("diagnostics: {e}"));
                    }
                }
                Err(e) => report.error = Some(e.to_string()),
            }
            report
        })
        .collect();

    for c in [Criterion::Aic, Criterion::Sc, Criterion::Hqc] {
        let best = reports
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.criterion(c).map(|v| (i, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, _)) = best {
            reports[i].selected_by.push(c);
        }
    }
    Ok(reports)
}

/// Candidate picked by the most criteria, ties broken by AIC.
pub fn selected_candidate(reports: &[CandidateReport]) -> Option<&CandidateReport> {
    reports.iter().filter(|r| !r.selected_by.is_empty()).max_by(|a, b| {
        a.selected_by
            .len()
            .cmp(&b.selected_by.len())
            .then_with(|| b.aic.unwrap_or(f64::INFINITY).total_cmp(&a.aic.unwrap_or(f64::INFINITY)))
    })
}

/// Premium process implied by the forward-error process. A pure AR or pure MA
/// carries over; ARMA(1,1) maps to AR(1) because the MA part is the
/// rational-error noise. Other orders have no mapping.
pub fn map_fe_to_rp_process(fe_process: (usize, usize)) -> Result<(usize, usize)> {
    match fe_process {
        (p, 0) if p > 0 => Ok((p, 0)),
        (0, q) if q > 0 => Ok((0, q)),
        (1, 1) => Ok((1, 0)),
        (p, q) => Err(Error::UnsupportedProcess { p, q }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::{build_arma_spec, simulate};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn arma_path(ar: &[f64], ma: &[f64], t: usize, seed: u64) -> Vec<f64> {
        let s = build_arma_spec(ar.len(), ma.len(), ar, ma, 0.0, 1.0, 0.0).unwrap();
        simulate(&s, t, seed).unwrap().fe
    }

    #[test]
    fn process_mapping() {
        assert_eq!(map_fe_to_rp_process((1, 0)).unwrap(), (1, 0));
        assert_eq!(map_fe_to_rp_process((1, 1)).unwrap(), (1, 0));
        assert_eq!(map_fe_to_rp_process((0, 1)).unwrap(), (0, 1));
        assert!(matches!(map_fe_to_rp_process((2, 1)), Err(Error::UnsupportedProcess { p: 2, q: 1 })));
        assert!(map_fe_to_rp_process((0, 0)).is_err());
    }

    proptest! {
        #[test]
        fn mapping_idempotent_on_pure_processes(p in 1usize..6, q in 1usize..6) {
            let ar = map_fe_to_rp_process((p, 0)).unwrap();
            prop_assert_eq!(map_fe_to_rp_process(ar).unwrap(), ar);
            let ma = map_fe_to_rp_process((0, q)).unwrap();
            prop_assert_eq!(map_fe_to_rp_process(ma).unwrap(), ma);
        }
    }

    #[test]
    fn white_noise_suggests_nothing() {
        let mut hits = 0;
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
            let s = identify_orders(&x, 12, 0.05).unwrap();
            if (s.p_suggested, s.q_suggested) == (0, 0) {
                hits += 1;
            }
        }
        // lag-1 PAC equals lag-1 AC, so the rate is about 95%
        assert!(hits >= 176, "{hits}");
    }

    #[test]
    fn ar1_suggests_p_one() {
        let hits = (0..100)
            .filter(|&seed| identify_orders(&arma_path(&[0.6], &[], 500, seed), 12, 0.05).unwrap().p_suggested == 1)
            .count();
        assert!(hits >= 90, "{hits}");
    }

    #[test]
    fn criteria_and_diagnostics_present() {
        let fe = arma_path(&[0.5], &[], 400, 3);
        let reports = fit_candidates(&fe, &default_candidates(1, 1), &MleOptions::default()).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert!(r.sc.unwrap() >= r.aic.unwrap());
            assert_eq!(r.lb_p_values.len(), 3);
            assert!(r.bg_p_value.is_some() && r.resid_adf_p.is_some());
        }
        let sel = selected_candidate(&reports).unwrap();
        assert!(!sel.selected_by.is_empty());
        let ar1 = reports.iter().find(|r| (r.p, r.q) == (1, 0)).unwrap();
        assert!((ar1.phi[0] - 0.5).abs() < 0.12);
    }

    #[test]
    fn shift_leaves_criteria_differences() {
        let fe = arma_path(&[0.4], &[0.3], 300, 5);
        let shifted: Vec<f64> = fe.iter().map(|v| v + 0.37).collect();
        let opts = MleOptions::default();
        let a = fit_candidates(&fe, &[(1, 0), (0, 1)], &opts).unwrap();
        let b = fit_candidates(&shifted, &[(1, 0), (0, 1)], &opts).unwrap();
        let da = a[0].aic.unwrap() - a[1].aic.unwrap();
        let db = b[0].aic.unwrap() - b[1].aic.unwrap();
        assert!((da - db).abs() < 1e-6, "{da} {db}");
    }

    #[test]
    fn failed_candidate_is_kept() {
        let reports = fit_candidates(&[0.1; 40], &[(1, 0)], &MleOptions::default()).unwrap();
        assert!(reports[0].error.is_some());
        assert!(reports[0].aic.is_none());
    }
}
