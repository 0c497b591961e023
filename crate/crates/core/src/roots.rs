//! Deterministic scalar root finding and minimisation.

use crate::error::{Error, Result};

/// Bisection on a bracket `[lo, hi]` whose endpoints have opposite signs.
///
/// Stops when the bracket width falls below `xtol * max(1, |mid|)`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracketing(format!("no sign change on [{a}, {b}] (f = {fa}, {fb})")));
    }
    let a_negative = fa < 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if b - a <= xtol * mid.abs().max(1.0) || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_nan() {
            return Err(Error::Domain(format!("function is NaN at {mid}")));
        }
        if (fm < 0.0) == a_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::NonConvergence { op: "bisect", iterations: max_iter })
}

/// Fallible variant of [`bisect`] for functions that may fail to evaluate.
pub fn try_bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let root = bisect(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        xtol,
        max_iter,
    );
    match failure {
        Some(e) => Err(e),
        None => root,
    }
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
///
/// Returns the abscissa and the function value there.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (b - a).abs() <= xtol * (1.0 + c.abs()) {
            break;
        }
        if fc.is_nan() || fc > fd {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
