//! Premium signal extraction: the ARMA state-space form, the Kalman filter
//! with correlated disturbances, maximum likelihood and premia recovery.

mod filter;
mod mle;
pub mod optimize;
mod premia;
mod simulate;
mod spec;

pub use filter::{kalman_filter, kalman_loglik, log_likelihood, stationary_init, FilterInit, FilterOutput};
pub use mle::{
    fit_arma, loglik_at, mle_fit, objective, objective_gradient, FittedModel, FittedReport, InformationCriteria,
    MleOptions, NoiseModel, ParamEstimate, ParamLayout,
};
pub use premia::{extract_premia, extract_premia_with_spec, PremiaSeries};
pub use simulate::{simulate, simulate_fx_market, ExpectedChange, SimulatedMarket, SimulatedPath};
pub use spec::{build_arma_spec, check_noise, StateLayout, StateSpaceSpec};
