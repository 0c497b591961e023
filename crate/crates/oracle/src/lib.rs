//! Independent numerical references for the asymptotic formulas.
//!
//! * [`fourier`]: Heston characteristic function, Carr–Madan prices and
//!   Gil–Pelaez tails on optimally shifted contours.
//! * [`riccati`]: direct RK4 integration of the Riccati system, with blow-up
//!   detection.
//! * [`grid`]: price surfaces and Dupire local variance by finite differences.
//! * [`mc`]: Monte Carlo simulation of the terminal log-price.
//! * [`svi_density`]: tilted moments of the SVI-implied terminal law.
//! * [`quadrature`]: adaptive Gauss–Legendre panels.

pub mod error;
pub mod fourier;
pub mod grid;
pub mod mc;
pub mod quadrature;
pub mod riccati;
pub mod svi_density;

pub use error::{OracleError, Result};
pub use fourier::{
    carr_madan, fourier_call, fourier_left_tail, fourier_otm, fourier_put, fourier_tail, gil_pelaez, heston_cf, heston_log_mgf_complex,
    heston_mgf, optimal_damping, optimal_shift,
};
pub use grid::{dupire_fd, heston_dupire, stencil, svi_dupire, PriceGrid, PriceSource, DUPIRE_DK, DUPIRE_DT};
pub use mc::{mc_terminal, Estimate, McSummary};
pub use riccati::{riccati_blowup, riccati_log_mgf, riccati_log_mgf_complex, OdePath};
pub use svi_density::{svi_log_density, svi_tilted_integral};
