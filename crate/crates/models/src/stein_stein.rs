//! Stein–Stein right wing from the large-`x` density
//! `f(x) = exp(-B1 x + B2 sqrt(x) - ½ ln x + B3) (1 + O(x^-1/2))`.
//!
//! Integrating against `e^{mu x}` gives the log-MGF
//! `Lambda(mu) = (B2^2/4)/(B1 - mu) + ½ ln(1/(B1 - mu)) + B3 + ½ ln(4 pi) + O(B1 - mu)`,
//! which this module exposes as a curve with critical moment `B1`.

use std::f64::consts::PI;
use std::sync::Arc;

use wingtail_core::{numdiff, MgfCurve, Side};

use crate::error::{ModelError, Result};
use crate::expansion::MgfExpansion;

type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Maturity-dependent density coefficients `B1(t)`, `B2(t)`, `B3(t)`.
#[derive(Clone)]
pub struct SteinSteinCoeffs {
    pub b1: Coefficient,
    pub b2: Coefficient,
    pub b3: Coefficient,
}

impl std::fmt::Debug for SteinSteinCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SteinSteinCoeffs").finish_non_exhaustive()
    }
}

impl SteinSteinCoeffs {
    pub fn new<F1, F2, F3>(b1: F1, b2: F2, b3: F3) -> Self
    where
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
        F3: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { b1: Arc::new(b1), b2: Arc::new(b2), b3: Arc::new(b3) }
    }

    /// Time-independent coefficients.
    pub fn constant(b1: f64, b2: f64, b3: f64) -> Self {
        Self::new(move |_| b1, move |_| b2, move |_| b3)
    }
}

/// Right-wing curve reconstructed from the density coefficients.
#[derive(Debug, Clone)]
pub struct SteinSteinCurve {
    coeffs: SteinSteinCoeffs,
}

impl SteinSteinCurve {
    fn checked(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (b1, b2, b3) = ((self.coeffs.b1)(t), (self.coeffs.b2)(t), (self.coeffs.b3)(t));
        if !(b1 > 1.0) {
            return Err(ModelError::Domain(format!("B1({t}) = {b1} must exceed 1")));
        }
        if !(b2 > 0.0) {
            return Err(ModelError::Domain(format!("B2({t}) = {b2} must be positive")));
        }
        if !b3.is_finite() {
            return Err(ModelError::Domain(format!("B3({t}) = {b3} must be finite")));
        }
        Ok((b1, b2, b3))
    }

    /// Pole, log and constant coefficients at maturity `t`.
    pub fn expansion(&self, t: f64) -> Result<MgfExpansion> {
        let (b1, b2, b3) = self.checked(t)?;
        Ok(MgfExpansion {
            side: Side::Right,
            mu_star: b1,
            omega: 0.25 * b2 * b2,
            log_coeff: 0.5,
            m_const: b3 + 0.5 * (4.0 * PI).ln(),
            d1: 0.0,
            residual: 0.0,
        })
    }
}

/// Builds the curve and its expansion at maturity `t`.
pub fn stein_stein_curve(coeffs: SteinSteinCoeffs, t: f64) -> Result<(SteinSteinCurve, MgfExpansion)> {
    let curve = SteinSteinCurve { coeffs };
    let expansion = curve.expansion(t)?;
    Ok((curve, expansion))
}

impl MgfCurve for SteinSteinCurve {
    fn side(&self) -> Side {
        Side::Right
    }

    fn lambda(&self, t: f64, mu: f64) -> wingtail_core::Result<f64> {
        let e = self.expansion(t)?;
        if !(mu < e.mu_star) {
            return Err(wingtail_core::Error::Domain(format!("mu = {mu} is not below B1 = {}", e.mu_star)));
        }
        Ok(e.reconstruct(mu))
    }

    fn mu_star(&self, t: f64) -> wingtail_core::Result<f64> {
        Ok(self.expansion(t)?.mu_star)
    }

    fn dmu_star_dt(&self, t: f64) -> wingtail_core::Result<f64> {
        let b1 = self.coeffs.b1.clone();
        numdiff::first(|s| Ok(b1(s)), t, 1e-3 * t)
    }

    fn alpha(&self) -> f64 {
        1.0
    }
}
