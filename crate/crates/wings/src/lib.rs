//! Model-generic extreme-strike wings.
//!
//! * [`local_vol_wing`]: Dupire local variance `Sigma^2(t, ±y)` for large `y`,
//!   driven by the critical moment, its time derivative and the tilted
//!   log-MGF near the pole.
//! * [`implied_vol_wing`]: total implied variance `t sigma^2(t, ±k)` built from
//!   the Legendre transform of the log-MGF.
//! * [`lee_slope`]: the limiting slope `t sigma^2 / k`.
//!
//! The right wing (`Side::Right`) refers to large positive log-strikes and
//! uses the curve of `+X`; the left wing refers to `-k` and the curve of `-X`.

use thiserror::Error;
use wingtail_core::{lambda_derivatives, legendre, numdiff, MgfCurve, Side};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WingError {
    #[error("{quantity} = {value} is below the regime guard {guard}")]
    Regime { quantity: &'static str, value: f64, guard: f64 },

    #[error("degenerate wing: dmu*/dt vanishes at t = {t}")]
    DegenerateWing { t: f64 },

    #[error("negative discriminant {value} at k = {k}")]
    NegativeDiscriminant { k: f64, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Core(#[from] wingtail_core::Error),
}

pub type Result<T> = std::result::Result<T, WingError>;

/// Asymptotic output at one abscissa, with the contributing terms.
#[derive(Debug, Clone, PartialEq)]
pub struct WingPoint {
    pub side: Side,
    /// `y` (local wing) or `k` (implied wing), always positive.
    pub abscissa: f64,
    /// Local variance or total implied variance.
    pub value: f64,
    pub terms: Vec<(&'static str, f64)>,
    pub regime_ok: bool,
    /// Exponent `e` of the stated relative error order `abscissa^(-e)`.
    pub error_order: f64,
}

impl WingPoint {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

/// Regime guards and differencing steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WingConfig {
    /// Minimum pole distance `nu` for the local-volatility wing.
    pub min_nu: f64,
    /// Minimum log-strike for the implied-volatility wing.
    pub min_k: f64,
    /// Relative time step for central differences in `t`.
    pub time_step: f64,
}

impl Default for WingConfig {
    fn default() -> Self {
        Self { min_nu: 0.5, min_k: 3.0, time_step: 1e-3 }
    }
}

/// Error exponent `(alpha ∧ 1) / (alpha + 1)`.
pub fn error_order(alpha: f64) -> f64 {
    alpha.min(1.0) / (alpha + 1.0)
}

/// Lee's limiting slope of total implied variance for critical moment `mu*`.
pub fn lee_slope(mu_star: f64, side: Side) -> Result<f64> {
    let s = side.sign();
    let admissible = match side {
        Side::Right => mu_star >= 1.0,
        Side::Left => mu_star > 0.0,
    };
    if !admissible || !mu_star.is_finite() {
        return Err(WingError::Domain(format!("no Lee slope for mu* = {mu_star} on the {side} side")));
    }
    // -2s + 4mu - 4 sqrt(mu(mu - s)) rationalised to avoid cancellation.
    let root = (mu_star * (mu_star - s)).sqrt();
    Ok(2.0 / (2.0 * mu_star - s + 2.0 * root))
}

/// The strike-independent part `2 ln(sqrt(mu*/2) - (mu*/2) sqrt(lee))` of `c~`.
pub fn c_tilde_constant(mu_star: f64, side: Side) -> Result<f64> {
    let lee = lee_slope(mu_star, side)?;
    let inner = (0.5 * mu_star).sqrt() - 0.5 * mu_star * lee.sqrt();
    if !(inner > 0.0) {
        return Err(WingError::Domain(format!("c~ constant undefined for mu* = {mu_star}")));
    }
    Ok(2.0 * inner.ln())
}

/// Combines the conjugate, `c~` and `k` into total implied variance.
///
/// Returns `(value, discriminant)`.
pub fn assemble_implied(lambda_star: f64, c_tilde: f64, k: f64, side: Side) -> Result<(f64, f64)> {
    let s = side.sign();
    let x = lambda_star + 0.5 * c_tilde;
    let shifted = x - s * k;
    if x < 0.0 || shifted < 0.0 {
        return Err(WingError::NegativeDiscriminant { k, value: x * shifted });
    }
    let disc = x * shifted;
    Ok((4.0 * lambda_star + 2.0 * c_tilde - 2.0 * s * k - 4.0 * disc.sqrt(), disc))
}

/// Total implied variance `t sigma^2` at log-strike `±k`.
pub fn implied_vol_wing<C: MgfCurve + ?Sized>(curve: &C, t: f64, k: f64, config: &WingConfig) -> Result<WingPoint> {
    if !(k >= config.min_k) {
        return Err(WingError::Regime { quantity: "k", value: k, guard: config.min_k });
    }
    let side = curve.side();
    let mu_star = curve.mu_star(t)?;
    if side == Side::Right && !(mu_star > 1.0) {
        return Err(WingError::Domain(format!("right implied wing needs mu* > 1, got {mu_star}")));
    }
    let conj = legendre(curve, t, k)?;
    let c_tilde = -(k * conj.lambda_star_second).ln() + c_tilde_constant(mu_star, side)?;
    let (value, disc) = assemble_implied(conj.lambda_star, c_tilde, k, side)?;
    Ok(WingPoint {
        side,
        abscissa: k,
        value,
        terms: vec![
            ("lambda_star", conj.lambda_star),
            ("c_tilde", c_tilde),
            ("p_star", conj.p_star),
            ("discriminant", disc),
        ],
        regime_ok: true,
        error_order: error_order(curve.alpha()),
    })
}

/// Inputs of the local-variance assembly shared by the generic and the
/// model-specific wings.
#[derive(Debug, Clone, Copy)]
pub struct LocalVolParts {
    pub side: Side,
    pub y: f64,
    pub mu_star: f64,
    pub sigma0: f64,
    /// Pole distance solving `Lambda'(mu* - 1/nu) = y`.
    pub nu: f64,
    /// `d/dt Lambda(t, mu*(t) - 1/nu)` at fixed `nu`.
    pub dt_delta: f64,
    pub q: f64,
    pub gamma: f64,
    /// `Lambda''(mu* - 1/nu)`.
    pub lambda_second: f64,
}

/// Local variance from its parts:
///
/// ```text
/// Sigma^2 = sigma0 y + [dDelta/dt ∓ q p ∓ ½ sigma0 (1 ∓ 2mu* ± 1/nu) y/nu]
///                    / [½ (p^2 ∓ p) (1 + (gamma^2 - gamma) Lambda''/(2 y^2))]
/// ```
///
/// with `p = mu* - 1/nu`.
pub fn assemble_local(parts: &LocalVolParts) -> WingPoint {
    let s = parts.side.sign();
    let LocalVolParts { y, mu_star, sigma0, nu, dt_delta, q, gamma, lambda_second, .. } = *parts;
    let p = mu_star - 1.0 / nu;
    let leading = sigma0 * y;
    let drift = -s * 0.5 * sigma0 * (1.0 - s * 2.0 * mu_star + s / nu) * y / nu;
    let numerator = dt_delta - s * q * p + drift;
    let ratio = 1.0 + (gamma * gamma - gamma) * lambda_second / (2.0 * y * y);
    let denominator = 0.5 * (p * p - s * p) * ratio;
    WingPoint {
        side: parts.side,
        abscissa: y,
        value: leading + numerator / denominator,
        terms: vec![
            ("leading", leading),
            ("numerator", numerator),
            ("denominator", denominator),
            ("sigma0", sigma0),
            ("nu", nu),
            ("dt_delta", dt_delta),
            ("ratio_factor", ratio),
        ],
        regime_ok: true,
        error_order: 0.0,
    }
}

/// `sigma0 = -2 (dmu*/dt) / (mu*^2 ∓ mu*)`.
pub fn sigma0(mu_star: f64, dmu_star_dt: f64, side: Side) -> f64 {
    -2.0 * dmu_star_dt / (mu_star * mu_star - side.sign() * mu_star)
}

/// Local variance `Sigma^2(t, ±y)` for carry `q`.
pub fn local_vol_wing<C: MgfCurve + ?Sized>(
    curve: &C,
    t: f64,
    y: f64,
    q: f64,
    config: &WingConfig,
) -> Result<WingPoint> {
    let side = curve.side();
    let mu_star = curve.mu_star(t)?;
    let dmu = curve.dmu_star_dt(t)?;
    if dmu == 0.0 {
        return Err(WingError::DegenerateWing { t });
    }
    let conj = legendre(curve, t, y)?;
    let nu = 1.0 / (mu_star - conj.p_star);
    if !(nu >= config.min_nu) {
        return Err(WingError::Regime { quantity: "nu", value: nu, guard: config.min_nu });
    }
    let h = config.time_step * t;
    let dt_delta = numdiff::first(
        |s| {
            let m = curve.mu_star(s)?;
            curve.lambda(s, m - 1.0 / nu)
        },
        t,
        h,
    )?;
    let lambda_second = lambda_derivatives(curve, t, conj.p_star)?.second;
    let mut point = assemble_local(&LocalVolParts {
        side,
        y,
        mu_star,
        sigma0: sigma0(mu_star, dmu, side),
        nu,
        dt_delta,
        q,
        gamma: curve.gamma(),
        lambda_second,
    });
    point.error_order = curve.alpha() / (curve.alpha() + 1.0);
    Ok(point)
}
