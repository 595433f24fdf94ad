use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The variants line up with the failure classes of the pipeline so the CLI
/// can map them onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("unsupported system: {0}")]
    Unsupported(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("specification failure: {0}")]
    Specification(String),
    #[error("policy error: {0}")]
    Policy(String),
    #[error("schedule error: {0}")]
    Schedule(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain_err {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain_err;
