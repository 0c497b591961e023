//! Undiscounted Black–Scholes prices with unit forward, parameterised by
//! log-strike `k` and total standard deviation `v = sigma * sqrt(t)`.
//!
//! Out-of-the-money prices are evaluated through Mills ratios, so a price of
//! `1e-200` still carries close to full relative precision.

use crate::error::{Error, Result};
use crate::normal::{cdf, mills, pdf};
use crate::roots::bisect;

/// Total standard deviation of the log-price, `sigma * sqrt(t)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TotalVol(f64);

impl TotalVol {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && v >= 0.0 {
            Ok(Self(v))
        } else {
            Err(Error::Domain(format!("total volatility must be finite and nonnegative, got {v}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Total variance `v^2 = sigma^2 t`.
    pub fn variance(self) -> f64 {
        self.0 * self.0
    }

    /// `d1 = -k/v + v/2`.
    pub fn d1(self, k: f64) -> f64 {
        -k / self.0 + 0.5 * self.0
    }

    /// `d2 = -k/v - v/2`.
    pub fn d2(self, k: f64) -> f64 {
        -k / self.0 - 0.5 * self.0
    }
}

/// Call price `N(d1) - e^k N(d2)`.
pub fn bs_call(k: f64, v: TotalVol) -> f64 {
    let intrinsic = (1.0 - k.exp()).max(0.0);
    if v.0 == 0.0 {
        return intrinsic;
    }
    let d1 = v.d1(k);
    if d1 < 0.0 {
        // e^k phi(d2) = phi(d1) turns both terms into Mills ratios.
        let a = -d1;
        let price = pdf(a) * (mills(a) - mills(a + v.0));
        return price.max(0.0);
    }
    let price = cdf(d1) - k.exp() * cdf(v.d2(k));
    price.clamp(intrinsic, 1.0)
}

/// Put price `e^k N(-d2) - N(-d1)`.
pub fn bs_put(k: f64, v: TotalVol) -> f64 {
    let intrinsic = (k.exp() - 1.0).max(0.0);
    if v.0 == 0.0 {
        return intrinsic;
    }
    let d2 = v.d2(k);
    if d2 > 0.0 {
        let d1 = d2 + v.0;
        let price = pdf(d1) * (mills(d2) - mills(d1));
        return price.max(0.0);
    }
    let price = k.exp() * cdf(-d2) - cdf(-v.d1(k));
    price.clamp(intrinsic, k.exp())
}

/// Out-of-the-money price: call for `k >= 0`, put for `k < 0`.
pub fn bs_otm(k: f64, v: TotalVol) -> f64 {
    if k >= 0.0 {
        bs_call(k, v)
    } else {
        bs_put(k, v)
    }
}

/// `d/dv` of either price (vega in total-volatility units).
fn vega(k: f64, v: f64) -> f64 {
    pdf(-k / v + 0.5 * v)
}

const MAX_ITER: usize = 200;

/// Total volatility reproducing a call price.
///
/// In-the-money inputs are converted to the equivalent put so the inversion
/// always works on the out-of-the-money side.
pub fn implied_total_vol(price: f64, k: f64) -> Result<TotalVol> {
    let intrinsic = (1.0 - k.exp()).max(0.0);
    if !(price > intrinsic && price < 1.0) {
        return Err(Error::OutOfBounds { price, k });
    }
    let otm = if k >= 0.0 { price } else { price - (1.0 - k.exp()) };
    if otm <= 0.0 {
        return Err(Error::OutOfBounds { price, k });
    }
    implied_total_vol_otm(otm, k)
}

/// Total volatility reproducing an out-of-the-money price (call for
/// `k >= 0`, put for `k < 0`).
pub fn implied_total_vol_otm(price: f64, k: f64) -> Result<TotalVol> {
    let upper = if k >= 0.0 { 1.0 } else { k.exp() };
    if !(price > 0.0 && price < upper) {
        return Err(Error::OutOfBounds { price, k });
    }
    let target = price.ln();
    let f = |v: f64| bs_otm(k, TotalVol(v)).ln() - target;

    let mut lo = 1e-3;
    let mut iterations = 0;
    while f(lo) > 0.0 {
        lo *= 0.5;
        iterations += 1;
        if iterations > MAX_ITER || lo < 1e-300 {
            return Err(Error::NonConvergence { op: "implied_total_vol", iterations });
        }
    }
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        iterations += 1;
        if iterations > MAX_ITER || !hi.is_finite() {
            return Err(Error::NonConvergence { op: "implied_total_vol", iterations });
        }
    }
    let mut v = bisect(f, lo, hi, 1e-14, MAX_ITER)
        .map_err(|_| Error::NonConvergence { op: "implied_total_vol", iterations: MAX_ITER })?;

    for _ in 0..2 {
        let p = bs_otm(k, TotalVol(v));
        let slope = vega(k, v);
        if slope <= 0.0 || !slope.is_finite() {
            break;
        }
        let step = (p - price) / slope;
        let next = v - step;
        if next > 0.0 && (next - v).abs() < 1e-8 * v.max(1e-8) {
            v = next;
        }
    }
    TotalVol::new(v)
}
