//! Heston model: `dX = -V/2 dt + sqrt(V) dB`, `dV = (a - bV) dt + sigma sqrt(V) dW`,
//! `d<B, W> = rho dt`.
//!
//! For a real tilt `mu~` the moment `E exp(mu~ X_t)` equals
//! `exp(a phi(t) + v0 psi(t))` where `psi` solves the Riccati equation
//! `psi' = lambda - beta psi + sigma^2 psi^2 / 2` with
//! `lambda = (mu~^2 - mu~)/2` and `beta = b - rho sigma mu~`. The right wing
//! uses `mu~ = mu`, the left wing `mu~ = -mu`.

use std::f64::consts::FRAC_PI_2;

use wingtail_core::roots::bisect;
use wingtail_core::{numdiff, MgfCurve, Side};
use wingtail_wings::{
    assemble_implied, assemble_local, c_tilde_constant, error_order, sigma0, LocalVolParts, WingConfig, WingError,
    WingPoint,
};

use crate::error::{ModelError, Result};
use crate::expansion::{extract_expansion, nu_tilde, nu_tilde_prime, MgfExpansion};

/// Below this `|c1|` the closed forms switch to their analytic `c1 -> 0` limit.
const BRANCH_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HestonParams {
    /// `kappa * theta`, drift level of the variance.
    pub a: f64,
    /// Mean-reversion speed.
    pub b: f64,
    /// Volatility of variance.
    pub sigma: f64,
    pub rho: f64,
    /// Initial variance.
    pub v0: f64,
    /// Carry rate; only the local-volatility wing uses it.
    pub q: f64,
}

impl HestonParams {
    pub fn new(a: f64, b: f64, sigma: f64, rho: f64, v0: f64) -> Result<Self> {
        let p = Self { a, b, sigma, rho, v0, q: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_carry(mut self, q: f64) -> Result<Self> {
        self.q = q;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, field: &'static str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter { field, reason: reason.to_string() })
            }
        };
        check(self.a.is_finite() && self.a >= 0.0, "a", "must be finite and nonnegative")?;
        check(self.b.is_finite() && self.b >= 0.0, "b", "must be finite and nonnegative")?;
        check(self.sigma.is_finite() && self.sigma > 0.0, "sigma", "must be finite and positive")?;
        check(self.rho.is_finite() && self.rho.abs() < 1.0, "rho", "must lie in (-1, 1)")?;
        check(self.v0.is_finite() && self.v0 > 0.0, "v0", "must be finite and positive")?;
        check(self.q.is_finite(), "q", "must be finite")
    }

    fn lambda_beta_c1(&self, mu_t: f64) -> (f64, f64, f64) {
        let lambda = 0.5 * (mu_t * mu_t - mu_t);
        let beta = self.b - self.rho * self.sigma * mu_t;
        let c1 = beta * beta - 2.0 * self.sigma * self.sigma * lambda;
        (lambda, beta, c1)
    }

    /// `c1(mu~) = beta^2 - sigma^2 (mu~^2 - mu~)`.
    pub fn c1(&self, mu_t: f64) -> f64 {
        self.lambda_beta_c1(mu_t).2
    }

    /// Closed-form `(phi, psi)` at real tilt `mu~`, valid for `t < T*(mu~)`.
    pub fn phi_psi(&self, t: f64, mu_t: f64) -> (f64, f64) {
        let (lambda, beta, c1) = self.lambda_beta_c1(mu_t);
        let s2 = self.sigma * self.sigma;
        if c1.abs() < BRANCH_EPS {
            let psi = 2.0 * lambda * t / (2.0 + beta * t);
            let phi = beta * t / s2 - 2.0 / s2 * (0.5 * beta * t).ln_1p();
            (phi, psi)
        } else if c1 > 0.0 {
            let d = c1.sqrt();
            let one_minus_e = -(-d * t).exp_m1();
            let den = (beta + d) - (beta - d) * (1.0 - one_minus_e);
            let psi = 2.0 * lambda * one_minus_e / den;
            let phi = (beta - d) * t / s2 - 2.0 / s2 * ((beta - d) * one_minus_e / (2.0 * d)).ln_1p();
            (phi, psi)
        } else {
            let w = (-c1).sqrt();
            let x = 0.5 * w * t;
            let (sin, cos) = x.sin_cos();
            let g = cos + beta * sin / w;
            let psi = 2.0 * lambda * (sin / w) / g;
            let phi = beta * t / s2 - 2.0 / s2 * g.ln();
            (phi, psi)
        }
    }

    /// Blow-up time of `psi` at real tilt `mu~`; infinite when it never explodes.
    pub fn explosion_time_tilt(&self, mu_t: f64) -> f64 {
        let (lambda, beta, c1) = self.lambda_beta_c1(mu_t);
        if c1.abs() < BRANCH_EPS {
            return if beta < 0.0 && lambda > 0.0 { 2.0 / -beta } else { f64::INFINITY };
        }
        if c1 > 0.0 {
            let d = c1.sqrt();
            if beta < 0.0 && lambda > 0.0 && d < -beta {
                return ((-beta + d) / (-beta - d)).ln() / d;
            }
            return f64::INFINITY;
        }
        let w = (-c1).sqrt();
        2.0 / w * (FRAC_PI_2 + (beta / w).atan())
    }

    /// `a phi + v0 psi` at real tilt `mu~`, rejecting maturities past blow-up.
    pub fn log_mgf_tilt(&self, t: f64, mu_t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(ModelError::Domain(format!("maturity must be positive, got {t}")));
        }
        if !(t < self.explosion_time_tilt(mu_t)) {
            return Err(ModelError::Domain(format!("moment of order {mu_t} is infinite at t = {t}")));
        }
        let (phi, psi) = self.phi_psi(t, mu_t);
        Ok(self.a * phi + self.v0 * psi)
    }
}

/// `Lambda_±(t, mu)` for admissible tilts.
///
/// The right wing rejects the band `0 < mu < 1`; `mu <= 0` on the right is
/// the left tilt `Lambda_-(t, -mu)`.
pub fn heston_log_mgf(p: &HestonParams, t: f64, mu: f64, side: Side) -> Result<f64> {
    p.validate()?;
    match side {
        Side::Right if mu > 0.0 && mu < 1.0 => {
            return Err(ModelError::Domain(format!("right-side tilt {mu} lies in the excluded band (0, 1)")));
        }
        Side::Left if mu < 0.0 => {
            return Err(ModelError::Domain(format!("left-side tilt must be nonnegative, got {mu}")));
        }
        _ => {}
    }
    let mu_t = side.sign() * mu;
    let limit_side = if mu_t >= 0.0 { Side::Right } else { Side::Left };
    let cm = heston_critical_moment(p, t, limit_side)?;
    if mu_t.abs() >= cm.mu_star {
        return Err(ModelError::Domain(format!(
            "tilt {mu} is not below the critical moment {} at t = {t}",
            cm.mu_star
        )));
    }
    p.log_mgf_tilt(t, mu_t)
}

/// Smallest positive root of `c1(±mu) = 0`.
pub fn heston_mu_hat(p: &HestonParams, side: Side) -> f64 {
    let s2 = p.sigma * p.sigma;
    let q = s2 - 2.0 * p.b * p.rho * p.sigma;
    let one_minus_r2 = 1.0 - p.rho * p.rho;
    let disc = (q * q + 4.0 * p.b * p.b * s2 * one_minus_r2).sqrt();
    (side.sign() * q + disc) / (2.0 * s2 * one_minus_r2)
}

/// Explosion time `T*(mu)` of the moment of order `mu` on the given side.
pub fn heston_explosion_time(p: &HestonParams, mu: f64, side: Side) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(ModelError::Domain(format!("moment order must be positive, got {mu}")));
    }
    Ok(p.explosion_time_tilt(side.sign() * mu))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalMoment {
    pub mu_star: f64,
    pub dmu_star_dt: f64,
    /// Set when the root sits on the lower end of the search interval.
    pub degenerate: bool,
}

/// Lower end of the interval on which `T*` decreases from `+infinity`.
fn search_floor(p: &HestonParams, side: Side) -> f64 {
    let mu_hat = heston_mu_hat(p, side);
    let beta_hat = p.b - p.rho * p.sigma * side.sign() * mu_hat;
    if beta_hat >= 0.0 {
        mu_hat
    } else {
        match side {
            Side::Right => 1.0,
            Side::Left => 0.0,
        }
    }
}

/// Critical moment `mu*(t)`, the root of `T*(mu) = t`, and its time derivative.
pub fn heston_critical_moment(p: &HestonParams, t: f64, side: Side) -> Result<CriticalMoment> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ModelError::Domain(format!("maturity must be positive and finite, got {t}")));
    }
    let s = side.sign();
    let floor = search_floor(p, side);
    let f = |mu: f64| p.explosion_time_tilt(s * mu) - t;

    let mut hi = if floor > 0.0 { 2.0 * floor } else { 1.0 };
    let mut steps = 0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(wingtail_core::Error::Bracketing(format!("no explosion below mu = {hi} at t = {t}")).into());
        }
    }
    let lo = if steps == 0 { floor } else { 0.5 * hi };
    let mu_star = bisect(f, lo.max(floor), hi, 1e-15, 400)?;
    let degenerate = mu_star - floor <= 1e-12 * floor.max(1.0);

    let mut h = 1e-5 * mu_star;
    if mu_star - h <= floor {
        h = 0.5 * (mu_star - floor);
    }
    let slope = (p.explosion_time_tilt(s * (mu_star + h)) - p.explosion_time_tilt(s * (mu_star - h))) / (2.0 * h);
    Ok(CriticalMoment { mu_star, dmu_star_dt: 1.0 / slope, degenerate })
}

/// Heston log-MGF of one wing as an [`MgfCurve`].
///
/// Unlike [`heston_log_mgf`], the curve accepts every tilt below the critical
/// moment, including the band `0 < mu < 1` crossed by numerical stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HestonCurve {
    pub params: HestonParams,
    pub side: Side,
}

impl HestonCurve {
    pub fn new(params: HestonParams, side: Side) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, side })
    }
}

impl MgfCurve for HestonCurve {
    fn side(&self) -> Side {
        self.side
    }

    fn lambda(&self, t: f64, mu: f64) -> wingtail_core::Result<f64> {
        Ok(self.params.log_mgf_tilt(t, self.side.sign() * mu)?)
    }

    fn mu_star(&self, t: f64) -> wingtail_core::Result<f64> {
        Ok(heston_critical_moment(&self.params, t, self.side)?.mu_star)
    }

    fn dmu_star_dt(&self, t: f64) -> wingtail_core::Result<f64> {
        Ok(heston_critical_moment(&self.params, t, self.side)?.dmu_star_dt)
    }

    fn alpha(&self) -> f64 {
        1.0
    }
}

/// Expansion coefficients at maturity `t`; the log coefficient is `2a/sigma^2`.
pub fn heston_expansion_coeffs(p: &HestonParams, t: f64, side: Side) -> Result<MgfExpansion> {
    let cm = heston_critical_moment(p, t, side)?;
    let log_coeff = 2.0 * p.a / (p.sigma * p.sigma);
    let s = side.sign();
    extract_expansion(side, cm.mu_star, log_coeff, |e| p.log_mgf_tilt(t, s * (cm.mu_star - e)))
}

pub fn heston_local_vol_wing(p: &HestonParams, t: f64, side: Side, y: f64) -> Result<WingPoint> {
    heston_local_vol_wing_with(p, t, side, y, &WingConfig::default())
}

/// Local variance `Sigma^2(t, ±y)` from the expansion coefficients and the
/// quadratic pole distance `nu~`.
pub fn heston_local_vol_wing_with(
    p: &HestonParams,
    t: f64,
    side: Side,
    y: f64,
    config: &WingConfig,
) -> Result<WingPoint> {
    let cm = heston_critical_moment(p, t, side)?;
    if cm.dmu_star_dt == 0.0 {
        return Err(WingError::DegenerateWing { t }.into());
    }
    let e = heston_expansion_coeffs(p, t, side)?;
    let nu = nu_tilde(&e, y);
    if !(nu >= config.min_nu) {
        return Err(WingError::Regime { quantity: "nu", value: nu, guard: config.min_nu }.into());
    }
    let h = config.time_step * t;
    let d_omega = numdiff::first(|s| Ok(heston_expansion_coeffs(p, s, side)?.omega), t, h)?;
    let d_m = numdiff::first(|s| Ok(heston_expansion_coeffs(p, s, side)?.m_const), t, h)?;

    let mut point = assemble_local(&LocalVolParts {
        side,
        y,
        mu_star: cm.mu_star,
        sigma0: sigma0(cm.mu_star, cm.dmu_star_dt, side),
        nu,
        dt_delta: d_omega * nu + d_m,
        q: p.q,
        gamma: 0.5,
        lambda_second: nu * nu / nu_tilde_prime(&e, y),
    });
    point.terms.push(("omega", e.omega));
    point.terms.push(("m", e.m_const));
    point.terms.push(("d_omega_dt", d_omega));
    point.terms.push(("d_m_dt", d_m));
    point.error_order = 0.5;
    Ok(point)
}

pub fn heston_implied_wing(p: &HestonParams, t: f64, side: Side, k: f64) -> Result<WingPoint> {
    heston_implied_wing_with(p, t, side, k, &WingConfig::default())
}

/// Total implied variance from the reconstructed log-MGF
/// `omega/(mu* - mu) + L ln(1/(mu* - mu)) + m` and its conjugate at `nu~(k)`.
pub fn heston_implied_wing_with(
    p: &HestonParams,
    t: f64,
    side: Side,
    k: f64,
    config: &WingConfig,
) -> Result<WingPoint> {
    if !(k >= config.min_k) {
        return Err(WingError::Regime { quantity: "k", value: k, guard: config.min_k }.into());
    }
    let e = heston_expansion_coeffs(p, t, side)?;
    let nu = nu_tilde(&e, k);
    let p_star = e.mu_star - 1.0 / nu;
    let lambda_star = p_star * k - e.reconstruct(p_star);
    let c_tilde = -(k * nu_tilde_prime(&e, k) / (nu * nu)).ln() + c_tilde_constant(e.mu_star, side)?;
    let (value, disc) = assemble_implied(lambda_star, c_tilde, k, side)?;
    Ok(WingPoint {
        side,
        abscissa: k,
        value,
        terms: vec![
            ("lambda_star", lambda_star),
            ("c_tilde", c_tilde),
            ("p_star", p_star),
            ("nu", nu),
            ("discriminant", disc),
        ],
        regime_ok: true,
        error_order: error_order(1.0),
    })
}
