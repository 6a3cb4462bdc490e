#![allow(dead_code)]

use fxpremia::state_space::{build_arma_spec, FilterInit, StateSpaceSpec};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct OracleOutput {
    pub filt_mean: Vec<DVector<f64>>,
    pub filt_var: Vec<DMatrix<f64>>,
    pub loglik: f64,
}

/// Conditions the joint Gaussian of all states and observations, built by
/// writing each of them as a linear map of the primitive draws
/// `(RP_1, e_1, a_1, ..., e_T, a_T)`.
pub fn dense_oracle(spec: &StateSpaceSpec, fe: &[f64], init: &FilterInit) -> OracleOutput {
    let m = spec.m();
    let t_len = fe.len();
    let n = m + 2 * t_len;
    let mut s = DMatrix::zeros(n, n);
    s.view_mut((0, 0), (m, m)).copy_from(&init.var0);
    let mut mu = DVector::zeros(n);
    mu.rows_mut(0, m).copy_from(&init.mean0);
    for t in 0..t_len {
        let k = m + 2 * t;
        s[(k, k)] = spec.obs_var();
        s[(k + 1, k + 1)] = spec.state_var();
        s[(k, k + 1)] = spec.cov();
        s[(k + 1, k)] = spec.cov();
    }

    let mut state_maps = Vec::with_capacity(t_len);
    let mut a = DMatrix::zeros(m, n);
    a.view_mut((0, 0), (m, m)).fill_with_identity();
    for t in 0..t_len {
        state_maps.push(a.clone());
        let mut next = spec.phi() * &a;
        for i in 0..m {
            next[(i, m + 2 * t + 1)] += spec.theta()[i];
        }
        a = next;
    }
    let mut obs_map = DMatrix::zeros(t_len, n);
    for t in 0..t_len {
        let row = spec.z().transpose() * &state_maps[t];
        obs_map.row_mut(t).copy_from(&row);
        obs_map[(t, m + 2 * t)] += 1.0;
    }

    let y = DVector::from_column_slice(fe);
    let mut filt_mean = Vec::new();
    let mut filt_var = Vec::new();
    for t in 0..t_len {
        let ly = obs_map.rows(0, t + 1).into_owned();
        let syy = &ly * &s * ly.transpose();
        let inv = syy.clone().try_inverse().unwrap();
        let la = &state_maps[t];
        let sxy = la * &s * ly.transpose();
        let resid = y.rows(0, t + 1) - &ly * &mu;
        filt_mean.push(la * &mu + &sxy * &inv * resid);
        filt_var.push(la * &s * la.transpose() - &sxy * &inv * sxy.transpose());
    }
    let syy = &obs_map * &s * obs_map.transpose();
    let resid = &y - &obs_map * &mu;
    let chol = syy.cholesky().unwrap();
    let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let quad = resid.dot(&chol.solve(&resid));
    let loglik = -0.5 * (t_len as f64 * (2.0 * std::f64::consts::PI).ln() + logdet + quad);
    OracleOutput { filt_mean, filt_var, loglik }
}

pub struct PlainKalman {
    pub pred_mean: Vec<DVector<f64>>,
    pub pred_var: Vec<DMatrix<f64>>,
    pub filt_mean: Vec<DVector<f64>>,
    pub filt_var: Vec<DMatrix<f64>>,
    pub loglik: f64,
}

/// Textbook filter with uncorrelated noises.
pub fn plain_kalman(spec: &StateSpaceSpec, fe: &[f64], init: &FilterInit) -> PlainKalman {
    let z = spec.z();
    let (phi, theta) = (spec.phi(), spec.theta());
    let w = theta * theta.transpose() * spec.state_var();
    let mut a = init.mean0.clone();
    let mut p = init.var0.clone();
    let mut out = PlainKalman { pred_mean: vec![], pred_var: vec![], filt_mean: vec![], filt_var: vec![], loglik: 0.0 };
    for &y in fe {
        let f = (z.transpose() * &p * z)[(0, 0)] + spec.obs_var();
        let v = y - z.dot(&a);
        let pz = &p * z;
        let af = &a + &pz * (v / f);
        let pf = &p - &pz * pz.transpose() / f;
        out.loglik += -0.5 * ((2.0 * std::f64::consts::PI).ln() + f.ln() + v * v / f);
        out.pred_mean.push(a.clone());
        out.pred_var.push(p.clone());
        a = phi * &af;
        p = phi * &pf * phi.transpose() + &w;
        out.filt_mean.push(af);
        out.filt_var.push(pf);
    }
    out
}

/// Random stationary spec among AR(1), MA(1), ARMA(1,1) and two companion
/// orders, with `C` drawn inside the admissible band when requested.
pub fn random_spec(rng: &mut ChaCha8Rng, with_cov: bool) -> StateSpaceSpec {
    let orders = [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)];
    loop {
        let (p, q) = orders[rng.random_range(0..orders.len())];
        let ar: Vec<f64> = (0..p).map(|_| rng.random_range(-0.9..0.9)).collect();
        let ma: Vec<f64> = (0..q).map(|_| rng.random_range(-0.9..0.9)).collect();
        let r: f64 = rng.random_range(0.1..2.0);
        let qv = rng.random_range(0.1..2.0);
        let c = if with_cov { rng.random_range(-0.95..0.95) * (r * qv).sqrt() } else { 0.0 };
        if let Ok(s) = build_arma_spec(p, q, &ar, &ma, r, qv, c) {
            return s;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corr(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n
}

/// Four-point central difference of `f` along each coordinate, with steps
/// proportional to `max(|x_i|, scale_i)`.
pub fn richardson_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], scale: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-4 * x[i].abs().max(scale[i]);
            let mut at = |d: f64| {
                xp[i] = x[i] + d;
                let v = f(&xp);
                xp[i] = x[i];
                v
            };
            let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
            (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
        })
        .collect()
}
