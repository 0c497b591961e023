//! Batch front end: reads a JSON scenario, runs one task and writes CSV.
//!
//! Tasks and their CSV headers:
//!
//! | task | header |
//! |------|--------|
//! | `critical_moments` | `side,mu_star,dmu_star_dt,mu_hat,alpha` |
//! | `mgf` | `mu,lambda_closed,lambda_ode,abs_error` |
//! | `tail` | `x,p_star,lambda_star,leading,correction,log_prob_tauberian,log_prob_fourier,rel_log_error` |
//! | `wing` | abscissa (`k` or `y`), value, then one column per diagnostic term |
//! | `compare` | abscissa, `wing,oracle,abs_error,rel_error` |
//!
//! Exit codes: 0 on success, 2 for configuration errors (with the offending
//! field), 3 for numerical non-convergence (with the failing operation).

pub mod config;
pub mod error;
pub mod run;

pub use config::{Grid, Guards, Model, ModelSpec, ScenarioConfig, SideArg, Task, WingKind};
pub use error::CliError;
pub use run::{run, Cell, Table};
