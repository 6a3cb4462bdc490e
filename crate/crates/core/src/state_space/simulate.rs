use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::filter::stationary_init;
use super::spec::StateSpaceSpec;
use crate::error::{Error, Result};
use crate::timeseries::{RateObservation, YearMonth};

/// One simulated path. Index `t` holds `fe_t`, `rp_t = Z RP_t`, the rational
/// error `re_{t+1}` inside `fe_t`, and the shock `a_{t+1}` that moves the
/// state to `t + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPath {
    pub fe: Vec<f64>,
    pub rp: Vec<f64>,
    pub re: Vec<f64>,
    pub a: Vec<f64>,
}

/// Draws a path of length `t` with the initial state from the stationary
/// distribution. Reproducible for a given seed.
pub fn simulate(spec: &StateSpaceSpec, t: usize, seed: u64) -> Result<SimulatedPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = stationary_init(spec)?;
    let root = psd_sqrt(&init.var0);
    let m = spec.m();

    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let z0 = DVector::from_fn(m, |_, _| normal());
    let mut state = &root * z0;

    let (r, q, c) = (spec.obs_var(), spec.state_var(), spec.cov());
    let (load_e, load_a1, load_a2) =
        if r > 0.0 { (r.sqrt(), c / r.sqrt(), (q - c * c / r).max(0.0).sqrt()) } else { (0.0, 0.0, q.sqrt()) };

    let mut path = SimulatedPath {
        fe: Vec::with_capacity(t),
        rp: Vec::with_capacity(t),
        re: Vec::with_capacity(t),
        a: Vec::with_capacity(t),
    };
    let mut next = DVector::zeros(m);
    for _ in 0..t {
        let (z1, z2) = (normal(), normal());
        let re = load_e * z1;
        let a = load_a1 * z1 + load_a2 * z2;
        let rp = spec.z().dot(&state);
        path.fe.push(rp + re);
        path.rp.push(rp);
        path.re.push(re);
        path.a.push(a);
        next.gemv(1.0, spec.phi(), &state, 0.0);
        next.axpy(a, spec.theta(), 1.0);
        std::mem::swap(&mut state, &mut next);
    }
    Ok(path)
}

/// Symmetric square root via eigen-decomposition, negative eigenvalues from
/// rounding clipped to zero.
fn psd_sqrt(v: &DMatrix<f64>) -> DMatrix<f64> {
    if v.nrows() == 1 {
        return DMatrix::from_element(1, 1, v[(0, 0)].max(0.0).sqrt());
    }
    let eig = v.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Expected-spot-change process for [`simulate_fx_market`]:
/// `ds_e_t = kappa rp_t + eta_t`, `eta ~ N(0, eta_var)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedChange {
    pub kappa: f64,
    pub eta_var: f64,
}

/// A simulated rate history with its hidden components.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedMarket {
    /// `t + 1` monthly quotes, so the aligned series has length `t`.
    pub observations: Vec<RateObservation>,
    pub path: SimulatedPath,
    /// `E_t(s_{t+1}) - s_t`
    pub spot_chg_e: Vec<f64>,
}

/// Log rates driven by the premium model:
///
/// ```text
/// f_t     = s_t + rp_t + ds_e_t
/// s_{t+1} = s_t + ds_e_t - re_{t+1}
/// ```
///
/// so that `f_t - s_{t+1} = rp_t + re_{t+1}` is the simulated `fe_t`.
pub fn simulate_fx_market(
    spec: &StateSpaceSpec,
    t: usize,
    expected: ExpectedChange,
    start: YearMonth,
    seed: u64,
) -> Result<SimulatedMarket> {
    if !(expected.eta_var.is_finite() && expected.eta_var >= 0.0 && expected.kappa.is_finite()) {
        return Err(Error::Domain("expected-change parameters must be finite, variance >= 0".into()));
    }
    let path = simulate(spec, t + 1, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let sd = expected.eta_var.sqrt();
    let spot_chg_e: Vec<f64> = path
        .rp
        .iter()
        .map(|rp| {
            let eta: f64 = StandardNormal.sample(&mut rng);
            expected.kappa * rp + sd * eta
        })
        .collect();

    let mut log_s = 0.4;
    let mut date = start;
    let mut observations = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let log_f = log_s + path.rp[i] + spot_chg_e[i];
        observations.push(RateObservation::new(date, log_s.exp(), log_f.exp())?);
        log_s += spot_chg_e[i] - path.re[i];
        date = date.succ();
    }
    Ok(SimulatedMarket { observations, path, spot_chg_e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::build_arma_spec;
    use crate::timeseries::build_aligned;

    fn var(x: &[f64]) -> f64 {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64
    }

    #[test]
    fn no_noise_gives_zero_path() {
        let s = build_arma_spec(1, 0, &[0.5], &[], 0.0, 0.0, 0.0).unwrap();
        let p = simulate(&s, 50, 1).unwrap();
        assert!(p.fe.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn seed_reproducible() {
        let s = build_arma_spec(1, 1, &[0.5], &[0.2], 1.0, 0.5, 0.1).unwrap();
        assert_eq!(simulate(&s, 100, 7).unwrap(), simulate(&s, 100, 7).unwrap());
        assert_ne!(simulate(&s, 100, 7).unwrap().fe, simulate(&s, 100, 8).unwrap().fe);
    }

    #[test]
    fn perfect_noise_correlation() {
        let (r, q) = (2.0, 0.5);
        let s = build_arma_spec(1, 0, &[0.3], &[], r, q, (r * q).sqrt()).unwrap();
        let p = simulate(&s, 100_000, 3).unwrap();
        let (mr, ma) = (p.re.iter().sum::<f64>() / 1e5, p.a.iter().sum::<f64>() / 1e5);
        let cov = p.re.iter().zip(&p.a).map(|(x, y)| (x - mr) * (y - ma)).sum::<f64>() / 1e5;
        let corr = cov / (var(&p.re) * var(&p.a)).sqrt();
        assert!((corr - 1.0).abs() < 0.01, "{corr}");
    }

    #[test]
    fn premium_variance_matches_lyapunov() {
        let s = build_arma_spec(1, 0, &[0.55], &[], 7.27e-4, 1.12e-4, 0.0).unwrap();
        let p = simulate(&s, 100_000, 11).unwrap();
        let v0 = stationary_init(&s).unwrap().var0[(0, 0)];
        assert!((var(&p.rp) / v0 - 1.0).abs() < 0.02);

        let s2 = build_arma_spec(2, 1, &[0.5, -0.2], &[0.4], 1.0, 1.0, 0.0).unwrap();
        let p2 = simulate(&s2, 100_000, 12).unwrap();
        // Var(rp) = Z V Z' with Z = e1
        let v2 = stationary_init(&s2).unwrap().var0[(0, 0)];
        assert!((var(&p2.rp) / v2 - 1.0).abs() < 0.02);
    }

    #[test]
    fn market_rates_reproduce_forward_errors() {
        let s = build_arma_spec(1, 0, &[0.55], &[], 7.27e-4, 1.12e-4, 0.0).unwrap();
        let start = YearMonth::new(1979, 1).unwrap();
        let mkt = simulate_fx_market(&s, 120, ExpectedChange { kappa: 0.2, eta_var: 1e-5 }, start, 5).unwrap();
        assert_eq!(mkt.observations.len(), 121);
        let al = build_aligned(&mkt.observations).unwrap();
        for t in 0..120 {
            assert!((al.fwd_err()[t] - mkt.path.fe[t]).abs() < 1e-12);
            assert!((al.fs_diff()[t] - mkt.path.rp[t] - mkt.spot_chg_e[t]).abs() < 1e-12);
        }
    }
}
