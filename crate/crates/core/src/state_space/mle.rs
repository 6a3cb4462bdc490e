use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::filter::{kalman_loglik, stationary_init};
use super::optimize::{minimize_bfgs, numeric_gradient, numeric_hessian, BfgsOptions, Minimum};
use super::spec::{build_arma_spec, ma_root_radius, StateSpaceSpec};
use crate::diagnostics::acf;
use crate::error::{Error, Result};

/// Which noise parameters are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Premium observed with rational-error noise: `R > 0`, `Q > 0`, and `C`
    /// either pinned to zero or free.
    SignalPlusNoise { c_free: bool },
    /// Classical ARMA on a demeaned series: `R = 0`, the innovation lives in
    /// `Q`.
    PureArma,
}

/// Map between the unconstrained optimiser vector and a spec.
///
/// Order: `[log R, log Q, C, phi_1.., theta_1..]` for signal-plus-noise
/// (`C` omitted when pinned) and `[log Q, phi_1.., theta_1..]` for pure ARMA.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamLayout {
    pub p: usize,
    pub q: usize,
    pub noise: NoiseModel,
}

/// Weight of the quadratic penalty on `|C| > sqrt(RQ)`, per observation.
const COV_PENALTY: f64 = 1e3;
const MAX_LOG_VAR: f64 = 60.0;

impl ParamLayout {
    pub fn new(p: usize, q: usize, noise: NoiseModel) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::Parameter("ARMA order needs p + q >= 1".into()));
        }
        Ok(Self { p, q, noise })
    }

    fn n_noise(&self) -> usize {
        match self.noise {
            NoiseModel::SignalPlusNoise { c_free: true } => 3,
            NoiseModel::SignalPlusNoise { c_free: false } => 2,
            NoiseModel::PureArma => 1,
        }
    }

    /// Number of free parameters.
    pub fn len(&self) -> usize {
        self.n_noise() + self.p + self.q
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = match self.noise {
            NoiseModel::SignalPlusNoise { c_free: true } => vec!["log_r".into(), "log_q".into(), "c".into()],
            NoiseModel::SignalPlusNoise { c_free: false } => vec!["log_r".into(), "log_q".into()],
            NoiseModel::PureArma => vec!["log_q".into()],
        };
        names.extend((1..=self.p).map(|i| format!("phi{i}")));
        names.extend((1..=self.q).map(|j| format!("theta{j}")));
        names
    }

    fn split<'a>(&self, raw: &'a [f64]) -> (f64, f64, f64, &'a [f64], &'a [f64]) {
        let k = self.n_noise();
        let (log_r, log_q, c) = match self.noise {
            NoiseModel::SignalPlusNoise { c_free } => (Some(raw[0]), raw[1], if c_free { raw[2] } else { 0.0 }),
            NoiseModel::PureArma => (None, raw[0], 0.0),
        };
        let r = log_r.map_or(0.0, f64::exp);
        (r, log_q.exp(), c, &raw[k..k + self.p], &raw[k + self.p..])
    }

    /// Spec at `raw`, with `C` clamped into `[-sqrt(RQ), sqrt(RQ)]`. The
    /// second value is how far (relative to `sqrt(RQ)`) the raw `C` was
    /// outside that interval.
    pub fn spec(&self, raw: &[f64]) -> Result<(StateSpaceSpec, f64)> {
        if raw.len() != self.len() {
            return Err(Error::Parameter(format!("expected {} raw parameters, got {}", self.len(), raw.len())));
        }
        let logs = match self.noise {
            NoiseModel::SignalPlusNoise { .. } => &raw[..2],
            NoiseModel::PureArma => &raw[..1],
        };
        if logs.iter().any(|v| !v.is_finite() || v.abs() > MAX_LOG_VAR) {
            return Err(Error::Domain(format!("log-variance parameters {logs:?} out of range")));
        }
        let (r, q_var, c, ar, ma) = self.split(raw);
        let bound = (r * q_var).sqrt();
        let (c, excess) = if c.abs() > bound {
            (c.signum() * bound, (c.abs() - bound) / bound.max(f64::MIN_POSITIVE))
        } else {
            (c, 0.0)
        };
        let spec = build_arma_spec(self.p, self.q, ar, ma, r, q_var, c)?;
        Ok((spec, excess))
    }

    /// Magnitude of each raw parameter: one, except `C`, which lives on the
    /// scale of the sample variance of `fe`.
    pub fn typical_scale(&self, fe: &[f64]) -> Vec<f64> {
        let mut scale = vec![1.0; self.len()];
        if let NoiseModel::SignalPlusNoise { c_free: true } = self.noise {
            let n = fe.len().max(1) as f64;
            let mu = fe.iter().sum::<f64>() / n;
            let var = fe.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
            if var > 0.0 && var.is_finite() {
                scale[2] = var;
            }
        }
        scale
    }

    /// Inverse of [`ParamLayout::spec`] for a spec with matching orders.
    pub fn raw_from_spec(&self, spec: &StateSpaceSpec) -> Vec<f64> {
        let mut raw = match self.noise {
            NoiseModel::SignalPlusNoise { c_free: true } => {
                vec![spec.obs_var().ln(), spec.state_var().ln(), spec.cov()]
            }
            NoiseModel::SignalPlusNoise { c_free: false } => {
                vec![spec.obs_var().ln(), spec.state_var().ln()]
            }
            NoiseModel::PureArma => vec![spec.state_var().ln()],
        };
        raw.extend_from_slice(spec.ar_coeffs());
        raw.extend_from_slice(spec.ma_coeffs());
        raw
    }
}

/// Exact Gaussian log-likelihood at `raw` under stationary initialisation.
/// No penalty; `C` outside the admissible band is an error here.
pub fn loglik_at(layout: &ParamLayout, fe: &[f64], raw: &[f64]) -> Result<f64> {
    let (spec, excess) = layout.spec(raw)?;
    if excess > 0.0 {
        let bound = (spec.obs_var() * spec.state_var()).sqrt();
        return Err(Error::CovarianceDomain { c_sq: (bound * (1.0 + excess)).powi(2), rq: bound * bound });
    }
    let init = stationary_init(&spec)?;
    kalman_loglik(&spec, fe, &init)
}

/// Minimisation objective: `-L` plus the covariance penalty, `+inf` where
/// the spec is non-stationary, the MA part is not invertible or the filter
/// breaks down.
pub fn objective(layout: &ParamLayout, fe: &[f64], raw: &[f64]) -> f64 {
    let Ok((spec, excess)) = layout.spec(raw) else {
        return f64::INFINITY;
    };
    if !(ma_root_radius(spec.ma_coeffs()) < 1.0) {
        return f64::INFINITY;
    }
    let Ok(init) = stationary_init(&spec) else {
        return f64::INFINITY;
    };
    match kalman_loglik(&spec, fe, &init) {
        Ok(ll) if ll.is_finite() => -ll + COV_PENALTY * fe.len() as f64 * excess * excess,
        _ => f64::INFINITY,
    }
}

/// Gradient of [`objective`] with respect to the raw parameters, computed
/// the way the optimiser computes it (central differences on the scaled
/// parameters).
pub fn objective_gradient(layout: &ParamLayout, fe: &[f64], raw: &[f64]) -> Vec<f64> {
    let scale = layout.typical_scale(fe);
    let f = |y: &[f64]| {
        let x: Vec<f64> = y.iter().zip(&scale).map(|(v, s)| v * s).collect();
        objective(layout, fe, &x)
    };
    let y: Vec<f64> = raw.iter().zip(&scale).map(|(v, s)| v / s).collect();
    numeric_gradient(&f, &y, f(&y)).iter().zip(&scale).map(|(g, s)| g / s).collect()
}

/// Per-observation information criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub sc: f64,
    pub hqc: f64,
}

impl InformationCriteria {
    /// `AIC = (-2L + 2k)/T`, `SC = (-2L + k ln T)/T`,
    /// `HQC = (-2L + 2k ln ln T)/T`.
    pub fn compute(loglik: f64, k: usize, t: usize) -> Self {
        let (k, tf) = (k as f64, t as f64);
        Self {
            aic: (-2.0 * loglik + 2.0 * k) / tf,
            sc: (-2.0 * loglik + k * tf.ln()) / tf,
            hqc: (-2.0 * loglik + 2.0 * k * tf.ln().ln()) / tf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MleOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self { max_iter: 500, rel_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub spec: StateSpaceSpec,
    pub layout: ParamLayout,
    pub param_names: Vec<String>,
    pub raw_params: Vec<f64>,
    pub loglik: f64,
    pub n_obs: usize,
    /// Free-parameter count used by the criteria.
    pub k: usize,
    pub criteria: InformationCriteria,
    /// Standard errors of the raw parameters from the inverse numeric Hessian
    /// of `-L`; `None` when the Hessian is not positive definite.
    pub se: Vec<Option<f64>>,
    /// Two-tail normal p-values of the raw parameters.
    pub p_values: Vec<Option<f64>>,
    pub converged: bool,
    pub iterations: usize,
    /// Sample mean removed before fitting (pure ARMA only, otherwise 0).
    pub mean: f64,
}

impl FittedModel {
    pub fn aic(&self) -> f64 {
        self.criteria.aic
    }

    pub fn sc(&self) -> f64 {
        self.criteria.sc
    }

    pub fn hqc(&self) -> f64 {
        self.criteria.hqc
    }

    pub fn c_free(&self) -> bool {
        matches!(self.layout.noise, NoiseModel::SignalPlusNoise { c_free: true })
    }

    /// Serializable summary with both raw and natural-scale parameters.
    pub fn report(&self) -> FittedReport {
        let params = self
            .param_names
            .iter()
            .enumerate()
            .map(|(i, name)| ParamEstimate {
                name: name.clone(),
                raw: self.raw_params[i],
                se: self.se[i],
                p_value: self.p_values[i],
            })
            .collect();
        FittedReport {
            p: self.layout.p,
            q: self.layout.q,
            noise: self.layout.noise,
            phi: self.spec.ar_coeffs().to_vec(),
            theta: self.spec.ma_coeffs().to_vec(),
            r: self.spec.obs_var(),
            q_var: self.spec.state_var(),
            c: self.spec.cov(),
            params,
            loglik: self.loglik,
            n_obs: self.n_obs,
            k: self.k,
            aic: self.criteria.aic,
            sc: self.criteria.sc,
            hqc: self.criteria.hqc,
            converged: self.converged,
            iterations: self.iterations,
            mean: self.mean,
        }
    }

    /// Standard error and p-value of a named raw parameter.
    pub fn param(&self, name: &str) -> Option<(f64, Option<f64>, Option<f64>)> {
        let i = self.param_names.iter().position(|n| n == name)?;
        Some((self.raw_params[i], self.se[i], self.p_values[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamEstimate {
    pub name: String,
    pub raw: f64,
    pub se: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedReport {
    pub p: usize,
    pub q: usize,
    pub noise: NoiseModel,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub r: f64,
    pub q_var: f64,
    pub c: f64,
    pub params: Vec<ParamEstimate>,
    pub loglik: f64,
    pub n_obs: usize,
    pub k: usize,
    pub aic: f64,
    pub sc: f64,
    pub hqc: f64,
    pub converged: bool,
    pub iterations: usize,
    pub mean: f64,
}

/// Fits the risk-premium model: observed forward errors are an ARMA(p, q)
/// premium plus rational-error noise, with `C` pinned to zero or free.
pub fn mle_fit(p: usize, q: usize, fe: &[f64], constrain_c_zero: bool, opts: &MleOptions) -> Result<FittedModel> {
    let layout = ParamLayout::new(p, q, NoiseModel::SignalPlusNoise { c_free: !constrain_c_zero })?;
    fit_layout(&layout, fe, 0.0, opts)
}

/// Classical ARMA(p, q) on the demeaned series through the same likelihood
/// (`R = 0`). The series is demeaned first; `k = p + q + 1` counts the
/// coefficients and the innovation variance.
pub fn fit_arma(p: usize, q: usize, fe: &[f64], opts: &MleOptions) -> Result<FittedModel> {
    let layout = ParamLayout::new(p, q, NoiseModel::PureArma)?;
    let mean = fe.iter().sum::<f64>() / fe.len().max(1) as f64;
    let centred: Vec<f64> = fe.iter().map(|v| v - mean).collect();
    fit_layout(&layout, &centred, mean, opts)
}

fn start_points(layout: &ParamLayout, fe: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = fe.len() as f64;
    let mu = fe.iter().sum::<f64>() / n;
    let var = fe.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    if !(var > 1e-24 * mu * mu) {
        return Err(Error::DegenerateInput("cannot fit a state-space model to a constant series".into()));
    }
    let r1 = acf(fe, 1).map(|r| r[0]).unwrap_or(0.0).clamp(-0.9, 0.9);
    let (p, q) = (layout.p, layout.q);

    let mut phi_starts = vec![0.5, r1, -0.3, 0.85, 0.95];
    phi_starts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let theta_starts: &[f64] = if q > 0 { &[0.0, 0.4] } else { &[0.0] };

    let mut starts = Vec::new();
    for &phi1 in if p > 0 { &phi_starts[..] } else { &[0.0][..] } {
        for &theta1 in theta_starts {
            let ma_gain = 1.0 + theta1 * theta1;
            let ar: Vec<f64> = (0..p).map(|i| if i == 0 { phi1 } else { 0.0 }).collect();
            let ma: Vec<f64> = (0..q).map(|j| if j == 0 { theta1 } else { 0.0 }).collect();
            let shares: &[f64] = match layout.noise {
                NoiseModel::PureArma => &[1.0],
                NoiseModel::SignalPlusNoise { .. } => &[0.2, 0.6],
            };
            for &share in shares {
                let q_var = (share * var * (1.0 - phi1 * phi1) / ma_gain).max(1e-12 * var);
                let mut raw = match layout.noise {
                    NoiseModel::SignalPlusNoise { c_free } => {
                        let mut v = vec![((1.0 - share) * var).ln(), q_var.ln()];
                        if c_free {
                            v.push(0.0);
                        }
                        v
                    }
                    NoiseModel::PureArma => vec![q_var.ln()],
                };
                raw.extend(ar.iter().chain(&ma));
                starts.push(raw);
            }
        }
    }
    Ok(starts)
}

fn fit_layout(layout: &ParamLayout, fe: &[f64], mean: f64, opts: &MleOptions) -> Result<FittedModel> {
    let t = fe.len();
    if t < 30 {
        return Err(Error::InsufficientData { required: 30, actual: t });
    }
    if fe.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("observations must be finite".into()));
    }
    // the optimiser works on raw / scale so that C is of order one
    let scale = layout.typical_scale(fe);
    let unscale = |y: &[f64]| -> Vec<f64> { y.iter().zip(&scale).map(|(v, s)| v * s).collect() };
    let f = |y: &[f64]| objective(layout, fe, &unscale(y));
    let bfgs = BfgsOptions { max_iter: opts.max_iter, rel_tol: opts.rel_tol };

    let mut best: Option<Minimum> = None;
    for start in start_points(layout, fe)? {
        let y0: Vec<f64> = start.iter().zip(&scale).map(|(v, s)| v / s).collect();
        let m = minimize_bfgs(&f, &y0, &bfgs);
        if !m.value.is_finite() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => m.value < b.value - 1e-9 * b.value.abs().max(1.0) || (m.value <= b.value && m.converged),
        };
        if better {
            best = Some(m);
        }
    }
    let best = best.ok_or_else(|| Error::Numerical("no start point gave a finite likelihood".into()))?;

    let (spec, _) = layout.spec(&unscale(&best.x))?;
    // store the admissible (clamped) parameters
    let raw_params = layout.raw_from_spec(&spec);
    let init = stationary_init(&spec)?;
    let loglik = kalman_loglik(&spec, fe, &init)?;
    let k = layout.len();

    let y_hat: Vec<f64> = raw_params.iter().zip(&scale).map(|(v, s)| v / s).collect();
    let hess = numeric_hessian(&f, &y_hat);
    let cov = if hess.iter().all(|v| v.is_finite()) {
        hess.cholesky().map(|c| {
            let d = DMatrix::from_diagonal(&DVector::from_column_slice(&scale));
            &d * c.inverse() * &d
        })
    } else {
        None
    };
    let normal = Normal::new(0.0, 1.0).unwrap();
    let se: Vec<Option<f64>> =
        (0..k).map(|i| cov.as_ref().map(|c| c[(i, i)]).filter(|v| *v > 0.0 && v.is_finite()).map(f64::sqrt)).collect();
    let p_values = se.iter().zip(&raw_params).map(|(s, v)| s.map(|s| 2.0 * normal.sf((v / s).abs()))).collect();

    Ok(FittedModel {
        spec,
        layout: *layout,
        param_names: layout.names(),
        raw_params,
        loglik,
        n_obs: t,
        k,
        criteria: InformationCriteria::compute(loglik, k, t),
        se,
        p_values,
        converged: best.converged,
        iterations: best.iterations,
        mean,
    })
}
