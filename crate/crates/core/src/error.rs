use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("price {price} violates the no-arbitrage bounds at log-strike {k}")]
    OutOfBounds { price: f64, k: f64 },

    #[error("{op} did not converge within {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    #[error("root bracketing failed: {0}")]
    Bracketing(String),
}
