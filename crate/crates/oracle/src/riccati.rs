//! Direct integration of the Heston Riccati system
//! `psi' = (mu~^2 - mu~)/2 + (rho sigma mu~ - b) psi + sigma^2 psi^2 / 2`, `phi' = psi`.

use num_complex::Complex64;
use wingtail_core::Side;
use wingtail_models::HestonParams;

use crate::error::{OracleError, Result};

/// Threshold on `psi` that defines the blow-up time.
pub const OVERFLOW: f64 = 1e12;
/// Step of the fixed-step integrators.
pub const FIXED_STEP: f64 = 1e-4;

/// Trajectory of `psi` and `phi` on the accepted adaptive steps.
#[derive(Debug, Clone, PartialEq)]
pub struct OdePath {
    pub mu: f64,
    pub side: Side,
    pub grid: Vec<f64>,
    pub psi_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    /// First time `psi` reaches [`OVERFLOW`], if before `t_max`.
    pub blow_up_time: Option<f64>,
}

#[derive(Clone, Copy)]
struct System<T> {
    lambda: T,
    beta: T,
    half_s2: f64,
}

impl<T> System<T>
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    fn rhs(&self, psi: T) -> T {
        self.lambda - self.beta * psi + psi * psi * self.half_s2
    }

    /// One RK4 step of the pair `(psi, phi)`.
    fn step(&self, psi: T, phi: T, h: f64) -> (T, T) {
        let k1 = self.rhs(psi);
        let q2 = psi + k1 * (0.5 * h);
        let k2 = self.rhs(q2);
        let q3 = psi + k2 * (0.5 * h);
        let k3 = self.rhs(q3);
        let q4 = psi + k3 * h;
        let k4 = self.rhs(q4);
        let psi_next = psi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let phi_next = phi + (psi + q2 * 2.0 + q3 * 2.0 + q4) * (h / 6.0);
        (psi_next, phi_next)
    }
}

fn real_system(p: &HestonParams, mu: f64, side: Side) -> System<f64> {
    let mu_t = side.sign() * mu;
    System { lambda: 0.5 * (mu_t * mu_t - mu_t), beta: p.b - p.rho * p.sigma * mu_t, half_s2: 0.5 * p.sigma * p.sigma }
}

const LOCAL_TOL: f64 = 1e-12;

/// Adaptive RK4 with step-doubling error control up to `t_max` or blow-up.
///
/// The blow-up time is located by bisection on the length of the step that
/// carries `psi` across [`OVERFLOW`].
pub fn riccati_blowup(p: &HestonParams, mu: f64, side: Side, t_max: f64) -> OdePath {
    let sys = real_system(p, mu, side);
    let mut path = OdePath {
        mu,
        side,
        grid: vec![0.0],
        psi_values: vec![0.0],
        phi_values: vec![0.0],
        blow_up_time: None,
    };
    let (mut t, mut psi, mut phi) = (0.0f64, 0.0f64, 0.0f64);
    let mut h = 1e-3 * t_max.min(1.0);
    while t < t_max {
        h = h.min(t_max - t);
        let (full_psi, _) = sys.step(psi, phi, h);
        let (half_psi, half_phi) = sys.step(psi, phi, 0.5 * h);
        let (two_psi, two_phi) = sys.step(half_psi, half_phi, 0.5 * h);
        let err = (two_psi - full_psi).abs();
        let scale = LOCAL_TOL * two_psi.abs().max(1.0);
        if !two_psi.is_finite() || err > scale {
            h *= 0.5;
            if h <= 1e-16 * t.max(1.0) {
                path.blow_up_time = Some(t);
                break;
            }
            continue;
        }
        if two_psi >= OVERFLOW {
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let (reached, _) = sys.step(psi, phi, mid);
                if reached.is_finite() && reached < OVERFLOW {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-16 * (t + hi) {
                    break;
                }
            }
            path.blow_up_time = Some(t + 0.5 * (lo + hi));
            break;
        }
        t += h;
        psi = two_psi;
        phi = two_phi;
        path.grid.push(t);
        path.psi_values.push(psi);
        path.phi_values.push(phi);
        if err < 0.01 * scale {
            h *= 2.0;
        }
    }
    path
}

/// `a phi(t) + v0 psi(t)` by fixed-step RK4 with step [`FIXED_STEP`].
pub fn riccati_log_mgf(p: &HestonParams, t: f64, mu: f64, side: Side) -> Result<f64> {
    if !(t > 0.0) {
        return Err(OracleError::InvalidInput(format!("maturity must be positive, got {t}")));
    }
    let sys = real_system(p, mu, side);
    let n = (t / FIXED_STEP).ceil() as usize;
    let h = t / n as f64;
    let (mut psi, mut phi) = (0.0, 0.0);
    for _ in 0..n {
        (psi, phi) = sys.step(psi, phi, h);
    }
    if !psi.is_finite() || psi >= OVERFLOW {
        return Err(OracleError::BlowUp { t });
    }
    Ok(p.a * phi + p.v0 * psi)
}

/// `ln E exp(z X_t)` for complex `z` by fixed-step RK4 of the complex system.
pub fn riccati_log_mgf_complex(p: &HestonParams, t: f64, z: Complex64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(OracleError::InvalidInput(format!("maturity must be positive, got {t}")));
    }
    let sys = System { lambda: 0.5 * (z * z - z), beta: p.b - p.rho * p.sigma * z, half_s2: 0.5 * p.sigma * p.sigma };
    let n = (t / FIXED_STEP).ceil() as usize;
    let h = t / n as f64;
    let zero = Complex64::new(0.0, 0.0);
    let (mut psi, mut phi) = (zero, zero);
    for _ in 0..n {
        (psi, phi) = sys.step(psi, phi, h);
    }
    if !psi.is_finite() {
        return Err(OracleError::BlowUp { t });
    }
    Ok(phi * p.a + psi * p.v0)
}
