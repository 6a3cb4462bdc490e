use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// How the ARMA premium process is stacked into a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateLayout {
    /// `m = 1`, the state is the premium itself.
    Ar1,
    /// MA(1) and ARMA(1,1): `sv1` is AR(order p) in the shock, `sv2` is the
    /// lag of `sv1`, and the premium is `sv1 + theta_1 sv2`.
    LaggedPair,
    /// Companion form of dimension `max(p, q + 1)` with the premium in the
    /// first state.
    Companion,
}

/// Signal-extraction model
///
/// ```text
/// fe_t     = Z RP_t + re_{t+1}
/// RP_{t+1} = Phi RP_t + Theta a_{t+1}
/// (re_{t+1}, a_{t+1}) ~ N(0, [[R, C], [C, Q]])
/// ```
///
/// The observation noise at `t` is paired with the shock that moves the state
/// from `t` to `t + 1`; `C` is their covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceSpec {
    p: usize,
    q: usize,
    layout: StateLayout,
    ar: Vec<f64>,
    ma: Vec<f64>,
    z: DVector<f64>,
    phi: DMatrix<f64>,
    theta: DVector<f64>,
    obs_var: f64,
    state_var: f64,
    cov: f64,
}

impl StateSpaceSpec {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// State dimension.
    pub fn m(&self) -> usize {
        self.phi.nrows()
    }

    pub fn layout(&self) -> StateLayout {
        self.layout
    }

    pub fn ar_coeffs(&self) -> &[f64] {
        &self.ar
    }

    pub fn ma_coeffs(&self) -> &[f64] {
        &self.ma
    }

    /// Observation loading, the `1 x m` row `Z` stored as a vector.
    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    /// `R`, variance of the rational error.
    pub fn obs_var(&self) -> f64 {
        self.obs_var
    }

    /// `Q`, variance of the premium shock.
    pub fn state_var(&self) -> f64 {
        self.state_var
    }

    /// `C`, covariance of the two noises.
    pub fn cov(&self) -> f64 {
        self.cov
    }

    /// Spectral radius of `Phi`.
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.phi)
    }

    /// Same structure with new noise parameters.
    pub fn with_noise(&self, obs_var: f64, state_var: f64, cov: f64) -> Result<Self> {
        build_arma_spec(self.p, self.q, &self.ar, &self.ma, obs_var, state_var, cov)
    }
}

pub(crate) fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].abs();
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest modulus among the roots of `x^q + theta_1 x^(q-1) + ... + theta_q`;
/// the MA part is invertible when it is below one.
pub(crate) fn ma_root_radius(ma: &[f64]) -> f64 {
    let q = ma.len();
    if q == 0 {
        return 0.0;
    }
    let mut c = DMatrix::zeros(q, q);
    for (j, t) in ma.iter().enumerate() {
        c[(0, j)] = -t;
    }
    for i in 1..q {
        c[(i, i - 1)] = 1.0;
    }
    spectral_radius(&c)
}

/// Checks that `[[R, C], [C, Q]]` is a valid covariance matrix.
pub fn check_noise(obs_var: f64, state_var: f64, cov: f64) -> Result<()> {
    if !(obs_var.is_finite() && obs_var >= 0.0) {
        return Err(Error::Domain(format!("R = {obs_var} must be a finite non-negative variance")));
    }
    if !(state_var.is_finite() && state_var >= 0.0) {
        return Err(Error::Domain(format!("Q = {state_var} must be a finite non-negative variance")));
    }
    if !cov.is_finite() {
        return Err(Error::Domain(format!("C = {cov} must be finite")));
    }
    let rq = obs_var * state_var;
    let c_sq = cov * cov;
    if c_sq > rq * (1.0 + 1e-12) {
        return Err(Error::CovarianceDomain { c_sq, rq });
    }
    Ok(())
}

/// Builds the state-space form of an ARMA(p, q) premium.
///
/// AR(1) is scalar. MA(1) and ARMA(1,1) use a two-state layout where the
/// second state is the lag of the first and the observation loads `[1,
/// theta_1]`. Every other order uses the companion form of dimension
/// `max(p, q + 1)` with `Z = [1, 0, ..., 0]` and `Theta = [1, theta_1, ...]`.
pub fn build_arma_spec(
    p: usize,
    q: usize,
    ar: &[f64],
    ma: &[f64],
    obs_var: f64,
    state_var: f64,
    cov: f64,
) -> Result<StateSpaceSpec> {
    if p + q == 0 {
        return Err(Error::Parameter("ARMA order needs p + q >= 1".into()));
    }
    if ar.len() != p || ma.len() != q {
        return Err(Error::Parameter(format!(
            "ARMA({p},{q}) needs {p} AR and {q} MA coefficients, got {} and {}",
            ar.len(),
            ma.len()
        )));
    }
    if ar.iter().chain(ma).any(|c| !c.is_finite()) {
        return Err(Error::Domain("ARMA coefficients must be finite".into()));
    }
    check_noise(obs_var, state_var, cov)?;

    let (layout, z, phi, theta) = match (p, q) {
        (1, 0) => (
            StateLayout::Ar1,
            DVector::from_element(1, 1.0),
            DMatrix::from_element(1, 1, ar[0]),
            DVector::from_element(1, 1.0),
        ),
        (0, 1) | (1, 1) => {
            let phi1 = if p == 1 { ar[0] } else { 0.0 };
            (
                StateLayout::LaggedPair,
                DVector::from_vec(vec![1.0, ma[0]]),
                DMatrix::from_row_slice(2, 2, &[phi1, 0.0, 1.0, 0.0]),
                DVector::from_vec(vec![1.0, 0.0]),
            )
        }
        _ => {
            let m = p.max(q + 1);
            let mut phi = DMatrix::zeros(m, m);
            for (i, &a) in ar.iter().enumerate() {
                phi[(i, 0)] = a;
            }
            for i in 0..m - 1 {
                phi[(i, i + 1)] = 1.0;
            }
            let mut theta = DVector::zeros(m);
            theta[0] = 1.0;
            for (j, &b) in ma.iter().enumerate() {
                theta[j + 1] = b;
            }
            let mut z = DVector::zeros(m);
            z[0] = 1.0;
            (StateLayout::Companion, z, phi, theta)
        }
    };

    let rho = spectral_radius(&phi);
    if !(rho < 1.0) {
        return Err(Error::NonStationary(format!("AR coefficients {ar:?} give spectral radius {rho:.6} >= 1")));
    }
    Ok(StateSpaceSpec { p, q, layout, ar: ar.to_vec(), ma: ma.to_vec(), z, phi, theta, obs_var, state_var, cov })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar1_is_scalar() {
        let s = build_arma_spec(1, 0, &[0.55], &[], 0.0007, 0.0001, 0.0).unwrap();
        assert_eq!(s.m(), 1);
        assert_eq!(s.phi()[(0, 0)], 0.55);
        assert_eq!(s.theta()[0], 1.0);
        assert_eq!(s.z()[0], 1.0);
    }

    #[test]
    fn ma1_second_state_is_lag() {
        let s = build_arma_spec(0, 1, &[], &[0.5], 1.0, 1.0, 0.0).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(s.layout(), StateLayout::LaggedPair);
        // sv1' = shock, sv2' = sv1
        assert_eq!(s.phi().as_slice(), &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.theta().as_slice(), &[1.0, 0.0]);
        assert_eq!(s.z().as_slice(), &[1.0, 0.5]);
    }

    #[test]
    fn companion_for_higher_orders() {
        let s = build_arma_spec(2, 2, &[0.3, 0.2], &[0.4, -0.1], 1.0, 1.0, 0.0).unwrap();
        assert_eq!(s.m(), 3);
        assert_eq!(s.layout(), StateLayout::Companion);
        assert_eq!(s.phi()[(0, 0)], 0.3);
        assert_eq!(s.phi()[(1, 0)], 0.2);
        assert_eq!(s.phi()[(0, 1)], 1.0);
        assert_eq!(s.phi()[(1, 2)], 1.0);
        assert_eq!(s.theta().as_slice(), &[1.0, 0.4, -0.1]);
        assert_eq!(s.z().as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn unit_root_rejected() {
        assert!(matches!(build_arma_spec(1, 0, &[1.0], &[], 1.0, 1.0, 0.0), Err(Error::NonStationary(_))));
        // 1 - 0.5L - 0.6L^2 has a root inside the unit circle
        assert!(matches!(build_arma_spec(2, 0, &[0.5, 0.6], &[], 1.0, 1.0, 0.0), Err(Error::NonStationary(_))));
    }

    #[test]
    fn covariance_outside_psd_region() {
        assert!(matches!(build_arma_spec(1, 0, &[0.5], &[], 1.0, 1.0, 1.01), Err(Error::CovarianceDomain { .. })));
        assert!(build_arma_spec(1, 0, &[0.5], &[], 1.0, 4.0, -2.0).is_ok());
    }

    #[test]
    fn ma_invertibility_radius() {
        assert_eq!(ma_root_radius(&[]), 0.0);
        assert!((ma_root_radius(&[0.3]) - 0.3).abs() < 1e-15);
        // 1 + 0.5L - 0.5L^2 has a root at L = 1
        assert!((ma_root_radius(&[-0.5, -0.5]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_and_count_checks() {
        assert!(matches!(build_arma_spec(0, 0, &[], &[], 1.0, 1.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(build_arma_spec(1, 0, &[], &[], 1.0, 1.0, 0.0), Err(Error::Parameter(_))));
    }
}
