//! Fenchel–Legendre conjugation `Lambda*(x) = sup_p (p x - Lambda(p))`.

use crate::curve::{lambda_derivatives, MgfCurve};
use crate::error::{Error, Result};
use crate::roots::try_bisect;

/// Maximiser and derived quantities of the conjugate at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatePoint {
    pub x: f64,
    /// Solution of `Lambda'(p) = x`.
    pub p_star: f64,
    /// `p* x - Lambda(p*)`.
    pub lambda_star: f64,
    /// `dp*/dx = 1 / Lambda''(p*)`.
    pub p_star_prime: f64,
    /// `d^2 Lambda* / dx^2`, equal to `p_star_prime`.
    pub lambda_star_second: f64,
}

const BRACKET_STEPS: usize = 45;
const ZERO_TOLERANCE: f64 = 1e-8;

/// Solves `Lambda'(t, p) = x` on `[0, mu*)` and assembles the conjugate.
///
/// The upper end of the bracket approaches the pole geometrically, the root
/// is bisected to width `1e-13` and then refined by two guarded Newton steps.
pub fn legendre<C: MgfCurve + ?Sized>(curve: &C, t: f64, x: f64) -> Result<ConjugatePoint> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("conjugate abscissa must be finite, got {x}")));
    }
    let slope = |p: f64| lambda_derivatives(curve, t, p).map(|d| d.first - x);
    let mu_star = curve.mu_star(t)?;

    let lo = 0.0;
    let f_lo = slope(lo)?;
    let p_star = if f_lo.abs() <= ZERO_TOLERANCE * x.abs().max(1.0) {
        0.0
    } else if f_lo > 0.0 {
        return Err(Error::Bracketing(format!("x = {x} lies below Lambda'(0) = {}", f_lo + x)));
    } else {
        let mut hi = if mu_star.is_finite() { 0.5 * mu_star } else { 1.0 };
        let mut lo = lo;
        let mut found = false;
        for _ in 0..BRACKET_STEPS {
            if slope(hi)? > 0.0 {
                found = true;
                break;
            }
            lo = hi;
            hi = if mu_star.is_finite() { mu_star - 0.5 * (mu_star - hi) } else { 2.0 * hi };
        }
        if !found {
            return Err(Error::Bracketing(format!("Lambda' stays below x = {x} up to p = {hi}")));
        }
        let mut p = try_bisect(slope, lo, hi, 1e-13, 400)?;
        for _ in 0..2 {
            let d = lambda_derivatives(curve, t, p)?;
            if !(d.second > 0.0) {
                break;
            }
            let next = p - (d.first - x) / d.second;
            if next > lo && next < hi && (next - p).abs() < 1e-10 * p.abs().max(1.0) {
                p = next;
            }
        }
        p
    };

    let d = lambda_derivatives(curve, t, p_star)?;
    if !(d.second > 0.0) {
        return Err(Error::Domain(format!("Lambda'' = {} is not positive at p* = {p_star}", d.second)));
    }
    let p_star_prime = 1.0 / d.second;
    Ok(ConjugatePoint {
        x,
        p_star,
        lambda_star: p_star * x - d.value,
        p_star_prime,
        lambda_star_second: p_star_prime,
    })
}
