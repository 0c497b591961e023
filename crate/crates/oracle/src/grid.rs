//! Price surfaces over `(t, k)` and Dupire local variance by finite differences.

use std::fmt::Write as _;

use rayon::prelude::*;
use wingtail_core::{bs_call, bs_put, TotalVol};
use wingtail_models::{HestonParams, SviSlice};

use crate::error::{OracleError, Result};
use crate::fourier::fourier_otm;

/// Log-strike spacing of the Dupire stencil.
pub const DUPIRE_DK: f64 = 0.005;
/// Maturity spacing of the Dupire stencil.
pub const DUPIRE_DT: f64 = 5e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceSource {
    Fourier,
    SviBlackScholes,
}

/// Forward-normalised call and put prices on a rectangular `(t, k)` grid.
///
/// Puts are stored alongside calls so that finite differences on the left
/// wing keep relative precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceGrid {
    pub maturities: Vec<f64>,
    pub log_strikes: Vec<f64>,
    /// `calls[i][j]` at `(maturities[i], log_strikes[j])`.
    pub calls: Vec<Vec<f64>>,
    pub puts: Vec<Vec<f64>>,
    pub source: PriceSource,
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() || axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OracleError::InvalidInput(format!("{name} must be finite and strictly ascending")));
    }
    Ok(())
}

impl PriceGrid {
    /// Fills the grid from `(t, k) -> (call, put)`, evaluating nodes in parallel.
    pub fn from_fn<F>(maturities: Vec<f64>, log_strikes: Vec<f64>, source: PriceSource, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<(f64, f64)> + Sync,
    {
        check_axis("maturities", &maturities)?;
        check_axis("log_strikes", &log_strikes)?;
        if maturities[0] <= 0.0 {
            return Err(OracleError::InvalidInput("maturities must be positive".into()));
        }
        let nk = log_strikes.len();
        let nodes: Vec<(f64, f64)> = maturities.iter().flat_map(|&t| log_strikes.iter().map(move |&k| (t, k))).collect();
        let values = nodes.par_iter().map(|&(t, k)| f(t, k)).collect::<Result<Vec<_>>>()?;
        let calls = values.chunks(nk).map(|row| row.iter().map(|v| v.0).collect()).collect();
        let puts = values.chunks(nk).map(|row| row.iter().map(|v| v.1).collect()).collect();
        Ok(Self { maturities, log_strikes, calls, puts, source })
    }

    /// Heston prices by Fourier inversion; each node inverts its out-of-the-money
    /// side and completes the other by parity.
    pub fn heston(p: &HestonParams, maturities: Vec<f64>, log_strikes: Vec<f64>) -> Result<Self> {
        Self::from_fn(maturities, log_strikes, PriceSource::Fourier, |t, k| {
            let otm = fourier_otm(p, t, k)?;
            let parity = 1.0 - k.exp();
            Ok(if k >= 0.0 { (otm, otm - parity) } else { (otm + parity, otm) })
        })
    }

    /// Black–Scholes prices under the total variance of an SVI slice family.
    pub fn svi<F>(family: F, maturities: Vec<f64>, log_strikes: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> wingtail_models::Result<SviSlice> + Sync,
    {
        Self::from_fn(maturities, log_strikes, PriceSource::SviBlackScholes, |t, k| {
            let v = TotalVol::new(family(t)?.total_variance(k).sqrt())?;
            Ok((bs_call(k, v), bs_put(k, v)))
        })
    }

    /// Row-wise checks: calls within `[max(1 - e^k, 0), 1]`, decreasing in `k`
    /// and convex in the strike `K = e^k`, each up to `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let fail = |t: f64, k: f64, what: &str| Err(OracleError::InvalidInput(format!("{what} at t = {t}, k = {k}")));
        for (row, &t) in self.calls.iter().zip(&self.maturities) {
            for (j, (&c, &k)) in row.iter().zip(&self.log_strikes).enumerate() {
                if !(c >= (1.0 - k.exp()).max(0.0) - tol && c <= 1.0 + tol) {
                    return fail(t, k, "call outside no-arbitrage bounds");
                }
                if j > 0 && c > row[j - 1] + tol {
                    return fail(t, k, "call increasing in strike");
                }
                if j > 0 && j + 1 < row.len() {
                    let (k0, k2) = (self.log_strikes[j - 1].exp(), self.log_strikes[j + 1].exp());
                    let k1 = k.exp();
                    let left = (c - row[j - 1]) / (k1 - k0);
                    let right = (row[j + 1] - c) / (k2 - k1);
                    if right - left < -tol {
                        return fail(t, k, "call not convex in strike");
                    }
                }
            }
        }
        Ok(())
    }

    /// CSV with header `t,k,call`, row-major, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,k,call\n");
        for (row, &t) in self.calls.iter().zip(&self.maturities) {
            for (&c, &k) in row.iter().zip(&self.log_strikes) {
                let _ = writeln!(out, "{t:.16e},{k:.16e},{c:.16e}");
            }
        }
        out
    }

    fn node(axis: &[f64], x: f64) -> Option<usize> {
        let scale = if axis.len() > 1 { (axis[1] - axis[0]).abs() } else { 1.0 };
        axis.iter().position(|&a| (a - x).abs() <= 1e-9 * scale)
    }
}

/// Central first and second differences at spacing `h` and `2h`, combined by
/// one Richardson stage.
fn differences(v: [f64; 5], h: f64) -> (f64, f64) {
    let d1 = (v[3] - v[1]) / (2.0 * h);
    let d1_wide = (v[4] - v[0]) / (4.0 * h);
    let d2 = (v[3] - 2.0 * v[2] + v[1]) / (h * h);
    let d2_wide = (v[4] - 2.0 * v[2] + v[0]) / (4.0 * h * h);
    ((4.0 * d1 - d1_wide) / 3.0, (4.0 * d2 - d2_wide) / 3.0)
}

/// Dupire local variance `2 dC/dt / ((d_kk - d_k) C)` at the grid node `(t, k)`.
///
/// Puts are used for `k < 0`; the operator annihilates the parity term
/// `1 - e^k`, so the same formula applies.
pub fn dupire_fd(grid: &PriceGrid, t: f64, k: f64) -> Result<f64> {
    let edge = || OracleError::EdgeOfGrid { t, k };
    let i = PriceGrid::node(&grid.maturities, t).ok_or_else(edge)?;
    let j = PriceGrid::node(&grid.log_strikes, k).ok_or_else(edge)?;
    if i < 2 || i + 2 >= grid.maturities.len() || j < 2 || j + 2 >= grid.log_strikes.len() {
        return Err(edge());
    }
    let values = if k >= 0.0 { &grid.calls } else { &grid.puts };
    let dt = grid.maturities[i + 1] - grid.maturities[i];
    let dk = grid.log_strikes[j + 1] - grid.log_strikes[j];
    let in_t = [0, 1, 2, 3, 4].map(|o| values[i + o - 2][j]);
    let in_k = [0, 1, 2, 3, 4].map(|o| values[i][j + o - 2]);
    let (d_t, _) = differences(in_t, dt);
    let (d_k, d_kk) = differences(in_k, dk);
    let den = d_kk - d_k;
    if !(den.abs() > 1e-300) {
        return Err(OracleError::DenominatorVanished { t, k, value: den });
    }
    Ok(2.0 * d_t / den)
}

/// Five nodes centred on `x` with spacing `h`.
pub fn stencil(x: f64, h: f64) -> Vec<f64> {
    (-2..=2).map(|o| x + o as f64 * h).collect()
}

/// Dupire local variance of the Heston model from a Fourier stencil around `(t, k)`.
pub fn heston_dupire(p: &HestonParams, t: f64, k: f64) -> Result<f64> {
    let grid = PriceGrid::heston(p, stencil(t, DUPIRE_DT * t), stencil(k, DUPIRE_DK))?;
    dupire_fd(&grid, t, k)
}

/// Dupire local variance of an SVI family from a Black–Scholes stencil around `(t, k)`.
pub fn svi_dupire<F>(family: F, t: f64, k: f64) -> Result<f64>
where
    F: Fn(f64) -> wingtail_models::Result<SviSlice> + Sync,
{
    let grid = PriceGrid::svi(family, stencil(t, DUPIRE_DT * t), stencil(k, DUPIRE_DK))?;
    dupire_fd(&grid, t, k)
}

