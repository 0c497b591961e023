//! Tilted moments of the terminal law implied by an SVI slice, from the
//! density obtained by differentiating Black–Scholes prices twice in strike.

use wingtail_core::normal::{ln_pdf, mills};
use wingtail_core::{bs_call, bs_put, Side, TotalVol};
use wingtail_models::SviSlice;

use crate::error::{OracleError, Result};

/// `ln` of the out-of-the-money price at log-strike `k`.
fn ln_otm_price(s: &SviSlice, k: f64) -> f64 {
    let v = s.total_variance(k).sqrt();
    let Ok(tv) = TotalVol::new(v) else { return f64::NEG_INFINITY };
    if k >= 0.0 {
        // Call with d1 < 0 equals phi(a) (M(a) - M(a + v)) with a = -d1.
        let a = -tv.d1(k);
        if a > 0.0 {
            return ln_pdf(a) + (mills(a) - mills(a + v)).ln();
        }
        bs_call(k, tv).ln()
    } else {
        let d2 = tv.d2(k);
        if d2 > 0.0 {
            let d1 = d2 + v;
            return ln_pdf(d1) + (mills(d2) - mills(d1)).ln();
        }
        bs_put(k, tv).ln()
    }
}

/// Step of the differences applied to the log-price.
const FD_STEP: f64 = 1e-3;

/// Log-density of `X_t` at `k`: `ln(e^-k (d_kk - d_k) price)`.
pub fn svi_log_density(s: &SviSlice, k: f64) -> f64 {
    let h = FD_STEP;
    let (lm, l0, lp) = (ln_otm_price(s, k - h), ln_otm_price(s, k), ln_otm_price(s, k + h));
    let l1 = (lp - lm) / (2.0 * h);
    let l2 = (lp - 2.0 * l0 + lm) / (h * h);
    let factor = l2 + l1 * l1 - l1;
    if !(factor > 0.0) {
        return f64::NEG_INFINITY;
    }
    -k + l0 + factor.ln()
}

/// `E exp((mu* - 1/x) (±X_t))` for the SVI-implied law, by midpoint sums in
/// log space (step 0.005 for `|k| <= 20`, 0.05 beyond) over `[-40, 60x]` on
/// the right and `[-60x, 40]` on the left.
pub fn svi_tilted_integral(s: &SviSlice, side: Side, x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(OracleError::InvalidInput(format!("pole distance must exceed 1, got {x}")));
    }
    let sign = side.sign();
    let tilt = sign * (s.critical_moment(side)? - 1.0 / x);
    let (lo, hi) = if sign > 0.0 { (-40.0, 60.0 * x) } else { (-60.0 * x, 40.0) };
    let (mut max, mut sum) = (f64::NEG_INFINITY, 0.0f64);
    let mut k = lo;
    while k < hi {
        let h = if k.abs() < 20.0 { 0.005 } else { 0.05 };
        let mid = k + 0.5 * h;
        let term = svi_log_density(s, mid) + tilt * mid + h.ln();
        if term > max {
            sum = sum * (max - term).exp() + 1.0;
            max = term;
        } else if term.is_finite() {
            sum += (term - max).exp();
        }
        k += h;
    }
    Ok(max.exp() * sum)
}
