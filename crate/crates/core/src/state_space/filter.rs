use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::spec::StateSpaceSpec;
use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Prior for the first state, `E_0(RP_1)` and `V_0(RP_1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterInit {
    pub mean0: DVector<f64>,
    pub var0: DMatrix<f64>,
}

/// Unconditional state distribution: zero mean and the covariance solving
/// `V = Phi V Phi' + Theta Q Theta'`.
pub fn stationary_init(spec: &StateSpaceSpec) -> Result<FilterInit> {
    let m = spec.m();
    let rho = spec.spectral_radius();
    if !(rho < 1.0) {
        return Err(Error::NonStationary(format!("spectral radius {rho:.6} >= 1")));
    }
    let w = spec.theta() * spec.theta().transpose() * spec.state_var();
    let var0 = if m == 1 {
        let phi = spec.phi()[(0, 0)];
        DMatrix::from_element(1, 1, w[(0, 0)] / (1.0 - phi * phi))
    } else {
        // (I - Phi kron Phi) vec(V) = vec(W)
        let phi = spec.phi();
        let lhs = DMatrix::<f64>::identity(m * m, m * m) - phi.kronecker(phi);
        let vec_w = DVector::from_column_slice(w.as_slice());
        let vec_v = lhs.lu().solve(&vec_w).ok_or_else(|| Error::Numerical("Lyapunov system is singular".into()))?;
        let v = DMatrix::from_column_slice(m, m, vec_v.as_slice());
        (&v + v.transpose()) * 0.5
    };
    Ok(FilterInit { mean0: DVector::zeros(m), var0 })
}

/// Per-period filter quantities. Index `t` refers to observation `fe_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    /// `E_{t-1}(RP_t)`
    pub pred_mean: Vec<DVector<f64>>,
    /// `V_{t-1}(RP_t)`
    pub pred_var: Vec<DMatrix<f64>>,
    /// `E_t(RP_t)`
    pub filt_mean: Vec<DVector<f64>>,
    /// `V_t(RP_t)`
    pub filt_var: Vec<DMatrix<f64>>,
    /// `K_t`
    pub gain: Vec<DVector<f64>>,
    /// `xi_t = fe_t - Z E_{t-1}(RP_t)`
    pub innovation: Vec<f64>,
    /// `Z V_{t-1}(RP_t) Z' + R`
    pub innovation_var: Vec<f64>,
    pub loglik: f64,
}

impl FilterOutput {
    pub fn len(&self) -> usize {
        self.innovation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.innovation.is_empty()
    }
}

/// Prediction-error decomposition of the Gaussian log-likelihood.
pub fn log_likelihood(out: &FilterOutput) -> f64 {
    let t = out.innovation.len() as f64;
    -0.5 * t * (2.0 * PI).ln()
        - 0.5 * out.innovation_var.iter().map(|f| f.ln()).sum::<f64>()
        - 0.5 * out.innovation.iter().zip(&out.innovation_var).map(|(x, f)| x * x / f).sum::<f64>()
}

/// Runs the filter and keeps every intermediate quantity.
pub fn kalman_filter(spec: &StateSpaceSpec, fe: &[f64], init: &FilterInit) -> Result<FilterOutput> {
    let t = fe.len();
    let mut out = FilterOutput {
        pred_mean: Vec::with_capacity(t),
        pred_var: Vec::with_capacity(t),
        filt_mean: Vec::with_capacity(t),
        filt_var: Vec::with_capacity(t),
        gain: Vec::with_capacity(t),
        innovation: Vec::with_capacity(t),
        innovation_var: Vec::with_capacity(t),
        loglik: 0.0,
    };
    out.loglik = run(spec, fe, init, Some(&mut out))?;
    Ok(out)
}

/// Log-likelihood only, without storing the path.
pub fn kalman_loglik(spec: &StateSpaceSpec, fe: &[f64], init: &FilterInit) -> Result<f64> {
    run(spec, fe, init, None)
}

/// The recursion with correlated noise:
///
/// ```text
/// F_t        = Z P Z' + R,        K_t = P Z' / F_t
/// E_t(RP_t)  = E_{t-1}(RP_t) + K_t xi_t
/// V_t(RP_t)  = P - K_t Z P
/// E_t(RP_t+1) = Phi E_t(RP_t) + Theta C xi_t / F_t
/// V_t(RP_t+1) = Phi V_t(RP_t) Phi' + Theta Q Theta' - Theta C^2 Theta' / F_t
///               - Phi K_t C Theta' - Theta C K_t' Phi'
/// ```
///
/// with `P = V_{t-1}(RP_t)`. Both cross terms enter with a minus sign; this is
/// what conditioning the joint Gaussian of `(RP_{t+1}, xi_t)` gives.
fn run(spec: &StateSpaceSpec, fe: &[f64], init: &FilterInit, mut record: Option<&mut FilterOutput>) -> Result<f64> {
    let m = spec.m();
    if init.mean0.len() != m || init.var0.nrows() != m || init.var0.ncols() != m {
        return Err(Error::Parameter(format!("initial state must have dimension {m}")));
    }
    let z = spec.z();
    let phi = spec.phi();
    let theta = spec.theta();
    let r = spec.obs_var();
    let c = spec.cov();
    let q = spec.state_var();
    let phi_t = phi.transpose();
    let theta_theta = theta * theta.transpose();

    let mut pm = init.mean0.clone();
    let mut pv = init.var0.clone();
    let mut zp = DVector::zeros(m);
    let mut gain = DVector::zeros(m);
    let mut fm = DVector::zeros(m);
    let mut fv = DMatrix::zeros(m, m);
    let mut tmp = DMatrix::zeros(m, m);
    let mut phik = DVector::zeros(m);
    let mut loglik = 0.0;

    for (t, &obs) in fe.iter().enumerate() {
        zp.gemv(1.0, &pv, z, 0.0);
        let f = z.dot(&zp) + r;
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::FilterDivergence { t, variance: f });
        }
        let xi = obs - z.dot(&pm);
        gain.copy_from(&zp);
        gain /= f;

        fm.copy_from(&pm);
        fm.axpy(xi, &gain, 1.0);
        fv.copy_from(&pv);
        fv.ger(-1.0, &gain, &zp, 1.0);
        symmetrize(&mut fv);

        loglik -= 0.5 * (LN_2PI + f.ln() + xi * xi / f);

        if let Some(out) = record.as_deref_mut() {
            out.pred_mean.push(pm.clone());
            out.pred_var.push(pv.clone());
            out.filt_mean.push(fm.clone());
            out.filt_var.push(fv.clone());
            out.gain.push(gain.clone());
            out.innovation.push(xi);
            out.innovation_var.push(f);
        }

        // prediction for t + 1
        pm.gemv(1.0, phi, &fm, 0.0);
        pm.axpy(c * xi / f, theta, 1.0);

        tmp.gemm(1.0, phi, &fv, 0.0);
        pv.gemm(1.0, &tmp, &phi_t, 0.0);
        pv += &theta_theta * (q - c * c / f);
        if c != 0.0 {
            phik.gemv(1.0, phi, &gain, 0.0);
            pv.ger(-c, &phik, theta, 1.0);
            pv.ger(-c, theta, &phik, 1.0);
        }
        symmetrize(&mut pv);
    }
    Ok(loglik)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}
