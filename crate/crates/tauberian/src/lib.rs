//! Sharp tail expansion of a random variable whose moment generating
//! function explodes, and the tilted-expectation ratio correction.
//!
//! For `X` with log-MGF `Lambda` exploding at `mu*` and regularly varying
//! pole profile of index `alpha`,
//!
//! ```text
//! P(X >= x) ~ exp(-Lambda*(x)) * ( sqrt(p*'(x)) / (p*(x) sqrt(2 pi))
//!            - (2 + alpha/(alpha+1)^2) / (24 mu* sqrt(2 pi)) / (x^2 sqrt(p*'(x))) )
//! ```
//!
//! The expansion is only meaningful once the maximiser `p*(x)` is close to
//! `mu*`; [`TailConfig::guard_ratio`] sets how close.

use thiserror::Error;
use wingtail_core::{lambda_derivatives, legendre, MgfCurve};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TauberianError {
    #[error("x = {x} is outside the asymptotic regime: p*/mu* = {ratio:.4} is below the guard {guard}")]
    Regime { x: f64, ratio: f64, guard: f64 },

    #[error("the second-order term {correction} swamps the leading term {leading} at x = {x}")]
    NonPositive { x: f64, leading: f64, correction: f64 },

    #[error(transparent)]
    Core(#[from] wingtail_core::Error),
}

pub type Result<T> = std::result::Result<T, TauberianError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConfig {
    /// Minimum admissible `p*(x) / mu*`.
    pub guard_ratio: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        Self { guard_ratio: 0.9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub x: f64,
    pub p_star: f64,
    pub lambda_star: f64,
    pub leading: f64,
    pub correction: f64,
    pub log_prob: f64,
    pub prob: f64,
}

/// Two-term expansion of `P(X >= x)` with the default regime guard.
pub fn tail_expansion<C: MgfCurve + ?Sized>(curve: &C, t: f64, x: f64) -> Result<TailEstimate> {
    tail_expansion_with(curve, t, x, &TailConfig::default())
}

pub fn tail_expansion_with<C: MgfCurve + ?Sized>(
    curve: &C,
    t: f64,
    x: f64,
    config: &TailConfig,
) -> Result<TailEstimate> {
    let mu_star = curve.mu_star(t)?;
    let conj = legendre(curve, t, x)?;
    let ratio = conj.p_star / mu_star;
    if !(ratio > config.guard_ratio) {
        return Err(TauberianError::Regime { x, ratio, guard: config.guard_ratio });
    }
    let alpha = curve.alpha();
    let root = conj.p_star_prime.sqrt();
    let leading = root / (conj.p_star * SQRT_2PI);
    let correction = (2.0 + alpha / ((alpha + 1.0) * (alpha + 1.0))) / (24.0 * mu_star * SQRT_2PI) / (x * x * root);
    let bracket = leading - correction;
    if !(bracket > 0.0) {
        return Err(TauberianError::NonPositive { x, leading, correction });
    }
    let log_prob = -conj.lambda_star + bracket.ln();
    Ok(TailEstimate {
        x,
        p_star: conj.p_star,
        lambda_star: conj.lambda_star,
        leading,
        correction,
        log_prob,
        prob: log_prob.exp(),
    })
}

/// Ratio correction for tilted expectations at pole distance `x`.
///
/// Returns `(Lambda'(mu* - 1/x), factor)`; a smoothly varying `g` of index
/// `gamma` satisfies `E[g(X) e^{pX}] / E[e^{pX}] ~ g(eval_point) * factor`.
pub fn ratio_correction<C: MgfCurve + ?Sized>(curve: &C, t: f64, x: f64, gamma: f64) -> Result<(f64, f64)> {
    let mu_star = curve.mu_star(t)?;
    let d = lambda_derivatives(curve, t, mu_star - 1.0 / x)?;
    let factor = 1.0 + (gamma * gamma - gamma) * d.second / (2.0 * d.first * d.first);
    Ok((d.first, factor))
}
