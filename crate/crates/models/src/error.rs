use thiserror::Error;
use wingtail_wings::WingError;

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{quantity} = {value} is below the regime guard {guard}")]
    Regime { quantity: &'static str, value: f64, guard: f64 },

    #[error("degenerate slope: b t (1 ± rho) = {slope}")]
    DegenerateSlope { slope: f64 },

    #[error("Richardson stages disagree by {residual:e} (relative) while extracting {what}")]
    ExtrapolationUnstable { what: &'static str, residual: f64 },

    #[error(transparent)]
    Wing(#[from] WingError),

    #[error(transparent)]
    Core(#[from] wingtail_core::Error),
}

impl From<ModelError> for wingtail_core::Error {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Core(inner) => inner,
            other => wingtail_core::Error::Domain(other.to_string()),
        }
    }
}
