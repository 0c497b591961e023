//! Shared numerical primitives for moment-explosion wing asymptotics.
//!
//! Forward prices are normalised to one and rates are zero throughout this
//! crate. Log-strikes `k` are measured against the forward.

pub mod black_scholes;
pub mod conjugate;
pub mod curve;
pub mod error;
pub mod normal;
pub mod numdiff;
pub mod roots;

pub use black_scholes::{bs_call, bs_otm, bs_put, implied_total_vol, implied_total_vol_otm, TotalVol};
pub use conjugate::{legendre, ConjugatePoint};
pub use curve::{lambda_derivatives, FnCurve, LambdaDerivatives, MgfCurve, Side};
pub use error::{Error, Result};
