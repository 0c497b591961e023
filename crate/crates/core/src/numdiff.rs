//! Central finite differences with one Richardson stage.

use crate::error::Result;

/// Value, first and second derivative of a scalar function at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Central differences at steps `h` and `h/2` combined by Richardson
/// extrapolation, giving fourth-order accurate first and second derivatives.
pub fn central<F>(mut f: F, x: f64, h: f64) -> Result<Derivatives>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f0 = f(x)?;
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    let hh = 0.5 * h;
    let fph = f(x + hh)?;
    let fmh = f(x - hh)?;

    let d1_h = (fp - fm) / (2.0 * h);
    let d1_hh = (fph - fmh) / (2.0 * hh);
    let d2_h = (fp - 2.0 * f0 + fm) / (h * h);
    let d2_hh = (fph - 2.0 * f0 + fmh) / (hh * hh);

    Ok(Derivatives {
        value: f0,
        first: (4.0 * d1_hh - d1_h) / 3.0,
        second: (4.0 * d2_hh - d2_h) / 3.0,
    })
}

/// First derivative only, by a Richardson-combined central difference.
pub fn first<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d_h = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d_hh = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
    Ok((4.0 * d_hh - d_h) / 3.0)
}
