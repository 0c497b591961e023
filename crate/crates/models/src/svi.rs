//! SVI slices: `sigma^2(k) = a + b (rho (k - m) + sqrt((k - m)^2 + eta^2))`
//! with total variance `t sigma^2(k)`.
//!
//! The asymptotically linear wings of total variance force the log-MGF to
//! explode at `mu*± = ½ (1/beta± + beta±/4 ± 1)` with `beta± = b t (1 ± rho)`.

use std::f64::consts::PI;

use wingtail_core::{numdiff, Side};
use wingtail_wings::{WingError, WingPoint};

use crate::error::{ModelError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SviSlice {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub m: f64,
    pub eta: f64,
}

impl SviSlice {
    pub fn new(t: f64, a: f64, b: f64, rho: f64, m: f64, eta: f64) -> Result<Self> {
        let s = Self { t, a, b, rho, m, eta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, field: &'static str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter { field, reason: reason.to_string() })
            }
        };
        check(self.t.is_finite() && self.t > 0.0, "t", "must be finite and positive")?;
        check(self.a.is_finite(), "a", "must be finite")?;
        check(self.b.is_finite() && self.b >= 0.0, "b", "must be finite and nonnegative")?;
        check(self.rho.is_finite() && self.rho.abs() < 1.0, "rho", "must lie in (-1, 1)")?;
        check(self.m.is_finite(), "m", "must be finite")?;
        check(self.eta.is_finite() && self.eta > 0.0, "eta", "must be finite and positive")?;
        check(
            self.a + self.b * self.eta * (1.0 - self.rho * self.rho).sqrt() >= 0.0,
            "a",
            "implied variance must be nonnegative: a + b eta sqrt(1 - rho^2) >= 0",
        )
    }

    /// Implied variance `sigma^2(k)`.
    pub fn variance(&self, k: f64) -> f64 {
        let x = k - self.m;
        self.a + self.b * (self.rho * x + (x * x + self.eta * self.eta).sqrt())
    }

    /// Total implied variance `t sigma^2(k)`.
    pub fn total_variance(&self, k: f64) -> f64 {
        self.t * self.variance(k)
    }

    /// Asymptotic total-variance slope `beta± = b t (1 ± rho)`.
    pub fn wing_slope(&self, side: Side) -> f64 {
        self.b * self.t * (1.0 + side.sign() * self.rho)
    }

    fn slope_checked(&self, side: Side) -> Result<f64> {
        let beta = self.wing_slope(side);
        if !(beta > 0.0) {
            return Err(ModelError::DegenerateSlope { slope: beta });
        }
        Ok(beta)
    }

    /// `mu*± = ½ (1/beta± + beta±/4 ± 1)`.
    pub fn critical_moment(&self, side: Side) -> Result<f64> {
        let beta = self.slope_checked(side)?;
        Ok(0.5 * (1.0 / beta + 0.25 * beta + side.sign()))
    }

    /// `xi± = (2 mu*±)^(-1/2) - ½ sqrt(beta±)`.
    pub fn xi(&self, side: Side) -> Result<f64> {
        let beta = self.slope_checked(side)?;
        let mu = self.critical_moment(side)?;
        Ok((2.0 * mu).powf(-0.5) - 0.5 * beta.sqrt())
    }

    /// `d0± = ½ (-m + a/(b^2 t (1 ± rho)^2) ∓ 2m/beta± - a t/4)`.
    pub fn d0(&self, side: Side) -> Result<f64> {
        let beta = self.slope_checked(side)?;
        let s = side.sign();
        let one = 1.0 + s * self.rho;
        Ok(0.5 * (-self.m + self.a / (self.b * self.b * self.t * one * one) - s * 2.0 * self.m / beta - 0.25 * self.a * self.t))
    }

    /// Prefactor of the out-of-the-money price expansion.
    fn price_prefactor(&self, side: Side) -> Result<f64> {
        let beta = self.slope_checked(side)?;
        let mu = self.critical_moment(side)?;
        let den = match side {
            Side::Right => 2.0 * mu - (2.0 * mu * beta).sqrt(),
            Side::Left => 1.0 / beta - 0.25 * beta,
        };
        if !(den > 0.0) {
            return Err(ModelError::DegenerateSlope { slope: beta });
        }
        Ok(beta.sqrt() / den)
    }

    /// `c± = ln(prefactor / sqrt(2 pi)) + d0± ± m mu*±`, the constant in
    /// `ln(price) = c - (mu* ∓ 1) k - ½ ln k + o(1)`.
    pub fn price_constant(&self, side: Side) -> Result<f64> {
        let pref = self.price_prefactor(side)?;
        let mu = self.critical_moment(side)?;
        Ok((pref / (2.0 * PI).sqrt()).ln() + self.d0(side)? + side.sign() * self.m * mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SviCriticalMoments {
    pub mu_plus: f64,
    pub mu_minus: f64,
    /// `b t (1 - rho) = 2`, so that `mu*- = 0`.
    pub degenerate_minus: bool,
}

pub fn svi_critical_moments(s: &SviSlice) -> Result<SviCriticalMoments> {
    let mu_plus = s.critical_moment(Side::Right)?;
    let mu_minus = s.critical_moment(Side::Left)?;
    Ok(SviCriticalMoments {
        mu_plus,
        mu_minus,
        degenerate_minus: (s.wing_slope(Side::Left) - 2.0).abs() < 1e-12,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SviAsymptote {
    pub value: f64,
    /// False when `xi <= 0`, where the leading term carries no information.
    pub valid: bool,
}

/// Leading term of `E exp((mu* - 1/x)(±X))` as the pole distance `x` grows:
/// `mu* xi exp(d0 ± mu* m) sqrt(x/2)`.
pub fn svi_mgf_asymptote(s: &SviSlice, side: Side, x: f64) -> Result<SviAsymptote> {
    if !(x > 0.0) {
        return Err(ModelError::Domain(format!("pole distance must be positive, got {x}")));
    }
    let mu = s.critical_moment(side)?;
    let xi = s.xi(side)?;
    let value = mu * xi * (s.d0(side)? + side.sign() * mu * s.m).exp() * (0.5 * x).sqrt();
    Ok(SviAsymptote { value, valid: xi > 0.0 })
}

/// Large-strike price expansion: the call at strike `e^k` (right) or the put
/// at strike `e^-k` (left).
pub fn svi_price_expansion(s: &SviSlice, side: Side, k: f64) -> Result<f64> {
    let guard = s.m.abs() + 5.0 * s.eta;
    if !(k >= guard) {
        return Err(ModelError::Regime { quantity: "k", value: k, guard });
    }
    let mu = s.critical_moment(side)?;
    let c = s.price_constant(side)?;
    Ok((c - (mu - side.sign()) * k).exp() / k.sqrt())
}

/// Local variance `Sigma^2(t, ±y)` of a family of slices indexed by maturity.
pub fn svi_local_vol_wing<F>(family: F, t: f64, side: Side, y: f64) -> Result<WingPoint>
where
    F: Fn(f64) -> Result<SviSlice>,
{
    let s = side.sign();
    let slice = family(t)?;
    let mu = slice.critical_moment(side)?;
    let h = 1e-3 * t;
    let dmu = numdiff::first(|u| Ok(family(u).and_then(|sl| sl.critical_moment(side))?), t, h)?;
    if dmu.abs() <= 1e-9 * mu.abs().max(1.0) / t {
        return Err(WingError::DegenerateWing { t }.into());
    }
    let dc = numdiff::first(|u| Ok(family(u).and_then(|sl| sl.price_constant(side))?), t, h)?;
    let den = mu * mu - s * mu;
    let sigma0 = -2.0 * dmu / den;
    let shift = (2.0 * mu - s) / (2.0 * den);
    let leading = sigma0 * y;
    let c_term = 2.0 * dc / den;
    Ok(WingPoint {
        side,
        abscissa: y,
        value: leading - sigma0 * shift + c_term,
        terms: vec![
            ("leading", leading),
            ("shift", -sigma0 * shift),
            ("c_term", c_term),
            ("sigma0", sigma0),
            ("dc_dt", dc),
        ],
        regime_ok: true,
        error_order: 1.0,
    })
}
