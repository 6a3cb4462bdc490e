use thiserror::Error;

use crate::timeseries::YearMonth;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("continuity error: month {missing} is missing")]
    Continuity { missing: YearMonth },

    #[error("duplicate observation for month {0}")]
    DuplicateMonth(YearMonth),

    #[error("insufficient data: need at least {required} observations, got {actual}")]
    InsufficientData { required: usize, actual: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("non-stationary specification: {0}")]
    NonStationary(String),

    #[error("noise covariance not positive semidefinite: C^2 = {c_sq:e} > R*Q = {rq:e}")]
    CovarianceDomain { c_sq: f64, rq: f64 },

    #[error("filter divergence at t = {t}: innovation variance {variance:e}")]
    FilterDivergence { t: usize, variance: f64 },

    #[error("unsupported process ARMA({p},{q}): no fe -> rp mapping")]
    UnsupportedProcess { p: usize, q: usize },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
