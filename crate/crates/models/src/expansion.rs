//! Singular expansion `Lambda(mu) = omega/(mu* - mu) + L ln(1/(mu* - mu)) + m + d1 (mu* - mu) + ...`
//! near the critical moment.

use wingtail_core::Side;

use crate::error::{ModelError, Result};

/// Pole, log and constant coefficients of the log-MGF at one maturity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfExpansion {
    pub side: Side,
    pub mu_star: f64,
    /// Pole coefficient `omega`.
    pub omega: f64,
    /// Coefficient `L` of `ln(1/(mu* - mu))`.
    pub log_coeff: f64,
    /// Constant `m`.
    pub m_const: f64,
    /// First regular coefficient.
    pub d1: f64,
    /// Relative disagreement of the last two Richardson stages for `omega`.
    pub residual: f64,
}

impl MgfExpansion {
    /// `omega/e + L ln(1/e) + m` with `e = mu* - mu`.
    pub fn reconstruct(&self, mu: f64) -> f64 {
        let e = self.mu_star - mu;
        self.omega / e - self.log_coeff * e.ln() + self.m_const
    }
}

const EPS0: f64 = 1e-2;
const LEVELS: usize = 9;
const STAGES: usize = 5;
const MAX_RESIDUAL: f64 = 1e-4;

/// Richardson tableau over samples at `eps_j = eps0 2^-j`, assuming an
/// expansion in integer powers of `eps`. Returns the final estimate and the
/// relative gap to the previous stage.
fn richardson(samples: &[f64]) -> (f64, f64) {
    let mut row = samples.to_vec();
    let mut previous = *row.last().unwrap_or(&f64::NAN);
    for stage in 1..=STAGES {
        let factor = f64::powi(2.0, stage as i32);
        row = row.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        if stage < STAGES {
            previous = *row.last().unwrap_or(&f64::NAN);
        }
    }
    let last = *row.last().unwrap_or(&f64::NAN);
    let scale = last.abs().max(1e-300);
    (last, (last - previous).abs() / scale)
}

/// Extracts `omega`, `m` and `d1` given `lambda(eps) = Lambda(mu* - eps)` and
/// the known log coefficient.
///
/// `lambda` receives the offset actually realised in floating point, so the
/// caller should evaluate at exactly `mu* - eps`.
pub fn extract_expansion<F>(side: Side, mu_star: f64, log_coeff: f64, mut lambda: F) -> Result<MgfExpansion>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut eps = Vec::with_capacity(LEVELS);
    let mut values = Vec::with_capacity(LEVELS);
    for j in 0..LEVELS {
        let nominal = EPS0 * f64::powi(2.0, -(j as i32));
        // Use the offset that is exactly representable from mu*.
        let e = mu_star - (mu_star - nominal);
        eps.push(e);
        values.push(lambda(e)?);
    }

    let g: Vec<f64> = eps.iter().zip(&values).map(|(&e, &l)| e * (l + log_coeff * e.ln())).collect();
    let (omega, residual) = richardson(&g);
    if !(residual <= MAX_RESIDUAL) || !(omega > 0.0) {
        return Err(ModelError::ExtrapolationUnstable { what: "omega", residual });
    }

    let h: Vec<f64> = eps.iter().zip(&values).map(|(&e, &l)| l - omega / e + log_coeff * e.ln()).collect();
    let (m_const, _) = richardson(&h);

    let r: Vec<f64> = eps.iter().zip(&h).map(|(&e, &v)| (v - m_const) / e).collect();
    let (d1, _) = richardson(&r);

    Ok(MgfExpansion { side, mu_star, omega, log_coeff, m_const, d1, residual })
}

/// Positive root `nu~` of `omega x^2 + L x = y`.
pub fn nu_tilde(e: &MgfExpansion, y: f64) -> f64 {
    let (w, l) = (e.omega, e.log_coeff);
    (y + l * l / (4.0 * w)).sqrt() / w.sqrt() - l / (2.0 * w)
}

/// Heston name for [`nu_tilde`].
pub fn heston_nu_tilde(e: &MgfExpansion, y: f64) -> f64 {
    nu_tilde(e, y)
}

/// `d nu~ / dy`.
pub fn nu_tilde_prime(e: &MgfExpansion, y: f64) -> f64 {
    let (w, l) = (e.omega, e.log_coeff);
    1.0 / (2.0 * w.sqrt() * (y + l * l / (4.0 * w)).sqrt())
}
