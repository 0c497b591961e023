//! Adaptive Gauss–Legendre quadrature on finite intervals and half-lines.

use std::sync::OnceLock;

use crate::error::{OracleError, Result};

const ORDER: usize = 16;
const MAX_DEPTH: u32 = 40;
const MAX_PANELS: usize = 400;

/// Nodes and weights of the 16-point rule on `[-1, 1]`.
fn rule() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER as f64;
        let mut out = [(0.0, 0.0); ORDER];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and its derivative.
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=ORDER {
                    let j = j as f64;
                    let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Accuracy request: a refinement is accepted when it moves the estimate by
/// less than `abs` or by less than `rel` times the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-13, rel: 1e-11 }
    }
}

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64, tol: Tolerance, depth: u32) -> Option<f64> {
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid);
    let right = panel(f, mid, b);
    let refined = left + right;
    if !refined.is_finite() {
        return None;
    }
    if (refined - whole).abs() <= tol.abs.max(tol.rel * refined.abs()) {
        return Some(refined);
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    let half = Tolerance { abs: 0.5 * tol.abs, rel: tol.rel };
    Some(adapt(f, a, mid, left, half, depth + 1)? + adapt(f, mid, b, right, half, depth + 1)?)
}

/// `int_a^b f` by recursive bisection of 16-point panels.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance, what: &'static str) -> Result<f64> {
    let whole = panel(&mut f, a, b);
    adapt(&mut f, a, b, whole, tol, 0).ok_or(OracleError::QuadratureNonConvergence { what })
}

/// `int_a^inf f` over panels of doubling width starting at `width`, stopping
/// once two consecutive panels contribute less than the absolute tolerance.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    width: f64,
    tol: Tolerance,
    what: &'static str,
) -> Result<f64> {
    let mut total = 0.0;
    let (mut lo, mut w) = (a, width);
    let mut quiet = 0;
    for _ in 0..MAX_PANELS {
        let hi = lo + w;
        let whole = panel(&mut f, lo, hi);
        let part = adapt(&mut f, lo, hi, whole, tol, 0).ok_or(OracleError::QuadratureNonConvergence { what })?;
        total += part;
        let edge = f(hi).abs() * w;
        if part.abs() <= tol.abs && edge <= tol.abs {
            quiet += 1;
            if quiet == 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        w *= 2.0;
    }
    Err(OracleError::QuadratureNonConvergence { what })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let sum: f64 = rule().iter().map(|&(_, w)| w).sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let x30: f64 = rule().iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert!((x30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn half_line_gaussian() {
        let v = integrate_half_line(|x| (-x * x).exp(), 0.0, 1.0, Tolerance::default(), "test").unwrap();
        assert!((v - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
