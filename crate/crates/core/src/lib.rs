//! Time-varying foreign-exchange risk premia.
//!
//! The crate covers the whole path from monthly spot/forward quotes to an
//! extracted premium series:
//!
//! * [`timeseries`] ingests quotes and builds the aligned log series
//!   (forward error, spot change, forward-spot differential).
//! * [`diagnostics`] holds moments, Jarque-Bera, ADF, correlograms,
//!   Ljung-Box and Breusch-Godfrey.
//! * [`regressions`] runs the Fama regressions and the two adjusted
//!   regressions that test for the existence and time variation of premia.
//! * [`state_space`] is the ARMA signal-extraction model: a Kalman filter
//!   that allows correlated observation and state noise, exact Gaussian
//!   likelihood, maximum-likelihood fitting, simulation and premia
//!   extraction.
//! * [`identification`] does Box-Jenkins order identification and candidate
//!   ARMA comparison.
//! * [`pipeline`] chains everything into a report.

pub mod diagnostics;
pub mod error;
pub mod identification;
pub mod linalg;
pub mod pipeline;
pub mod regressions;
pub mod state_space;
pub mod timeseries;

pub use error::{Error, Result};
pub use timeseries::{AlignedSeries, QuoteFormat, RateObservation, YearMonth};
