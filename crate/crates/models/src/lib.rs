//! Analytic model layer.
//!
//! * [`heston`]: closed-form real-tilt log-MGF with branch logic, explosion
//!   times, critical moments and the specialised wings.
//! * [`expansion`]: pole/log/constant coefficients of the log-MGF near the
//!   critical moment, extracted by Richardson extrapolation.
//! * [`svi`]: critical moments, MGF asymptote, price expansions and
//!   local-volatility wing of an SVI slice.
//! * [`stein_stein`]: adapter from density coefficients to a right-wing curve.

pub mod error;
pub mod expansion;
pub mod heston;
pub mod stein_stein;
pub mod svi;

pub use error::{ModelError, Result};
pub use expansion::{extract_expansion, heston_nu_tilde, nu_tilde, nu_tilde_prime, MgfExpansion};
pub use heston::{
    heston_critical_moment, heston_expansion_coeffs, heston_explosion_time, heston_implied_wing,
    heston_implied_wing_with, heston_local_vol_wing, heston_local_vol_wing_with, heston_log_mgf, heston_mu_hat,
    CriticalMoment, HestonCurve, HestonParams,
};
pub use stein_stein::{stein_stein_curve, SteinSteinCoeffs, SteinSteinCurve};
pub use svi::{
    svi_critical_moments, svi_local_vol_wing, svi_mgf_asymptote, svi_price_expansion, SviAsymptote,
    SviCriticalMoments, SviSlice,
};
