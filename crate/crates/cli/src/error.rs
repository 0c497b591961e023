use thiserror::Error;
use wingtail_core::Error as CoreError;
use wingtail_models::ModelError;
use wingtail_oracle::OracleError;
use wingtail_tauberian::TauberianError;
use wingtail_wings::WingError;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or a request the inputs cannot support (exit 2).
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },

    /// A numerical procedure failed to converge (exit 3).
    #[error("numerical failure in `{op}`: {message}")]
    Numerical { op: String, message: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

/// Error raised while evaluating `op` at a grid point, classified by kind:
/// convergence failures exit 3, everything else points at `field`.
pub trait Classify {
    fn classify(self, op: &str, field: &str) -> CliError;
}

fn numerical(op: &str, message: String) -> CliError {
    CliError::Numerical { op: op.to_string(), message }
}

impl Classify for CoreError {
    fn classify(self, op: &str, field: &str) -> CliError {
        match self {
            CoreError::NonConvergence { op: inner, .. } => numerical(&format!("{op}/{inner}"), self.to_string()),
            CoreError::Bracketing(_) => numerical(op, self.to_string()),
            other => CliError::config(field, format!("{op}: {other}")),
        }
    }
}

impl Classify for WingError {
    fn classify(self, op: &str, field: &str) -> CliError {
        match self {
            WingError::Core(e) => e.classify(op, field),
            other => CliError::config(field, format!("{op}: {other}")),
        }
    }
}

impl Classify for ModelError {
    fn classify(self, op: &str, field: &str) -> CliError {
        match self {
            ModelError::Core(e) => e.classify(op, field),
            ModelError::Wing(e) => e.classify(op, field),
            ModelError::ExtrapolationUnstable { .. } => numerical(op, self.to_string()),
            other => CliError::config(field, format!("{op}: {other}")),
        }
    }
}

impl Classify for OracleError {
    fn classify(self, op: &str, field: &str) -> CliError {
        match self {
            OracleError::QuadratureNonConvergence { what } => numerical(&format!("{op}/{what}"), self.to_string()),
            OracleError::Model(e) => e.classify(op, field),
            OracleError::Core(e) => e.classify(op, field),
            other => CliError::config(field, format!("{op}: {other}")),
        }
    }
}

impl Classify for TauberianError {
    fn classify(self, op: &str, field: &str) -> CliError {
        match self {
            TauberianError::Core(e) => e.classify(op, field),
            other => CliError::config(field, format!("{op}: {other}")),
        }
    }
}
