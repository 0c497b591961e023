use thiserror::Error;
use wingtail_models::ModelError;

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("quadrature for {what} did not converge")]
    QuadratureNonConvergence { what: &'static str },

    #[error("Dupire denominator vanished at t = {t}, k = {k} (value {value:e})")]
    DenominatorVanished { t: f64, k: f64, value: f64 },

    #[error("(t = {t}, k = {k}) is not an interior node with two neighbours in each direction")]
    EdgeOfGrid { t: f64, k: f64 },

    #[error("Riccati solution exploded before t = {t}")]
    BlowUp { t: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Core(#[from] wingtail_core::Error),
}
