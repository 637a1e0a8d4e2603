use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation is beyond what the method supports
    /// (e.g. tensor-product quadrature in too many dimensions).
    #[error("capability error: {0}")]
    Capability(String),

    /// The ODE integrator could not continue.
    #[error("solver error at t = {last_good_time}: {message}")]
    Solver {
        message: String,
        last_good_time: f64,
    },

    /// A state violated a physical invariant (b must stay positive).
    #[error("integrity error at t = {t}: scaling factor b = {b} is not positive")]
    Integrity { t: f64, b: f64 },

    #[error("invalid protocol table: {0}")]
    Table(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
