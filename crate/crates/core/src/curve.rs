//! The tilted-moment interface shared by every model.
//!
//! A curve describes `Lambda(t, mu) = ln E exp(mu * X)` for `X` the log-price
//! (right wing) or its negative (left wing), together with the critical
//! moment `mu*(t)` where the expectation first becomes infinite.

use crate::error::Result;
use crate::numdiff;

/// Which wing a curve describes: `Right` tilts `+X`, `Left` tilts `-X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    /// `+1` for the right wing, `-1` for the left wing.
    pub fn sign(self) -> f64 {
        match self {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Log-moment generating function with a (possibly infinite) explosion point.
pub trait MgfCurve: Send + Sync {
    fn side(&self) -> Side;

    /// `Lambda(t, mu)`; may be called for any `mu` below `mu_star(t)`.
    fn lambda(&self, t: f64, mu: f64) -> Result<f64>;

    /// Critical moment; `f64::INFINITY` for curves without explosion.
    fn mu_star(&self, t: f64) -> Result<f64>;

    fn dmu_star_dt(&self, t: f64) -> Result<f64>;

    /// Regular-variation index of `x -> Lambda(t, mu* - 1/x)`.
    fn alpha(&self) -> f64;

    /// `gamma = alpha / (alpha + 1)`.
    fn gamma(&self) -> f64 {
        let a = self.alpha();
        a / (a + 1.0)
    }
}

impl<C: MgfCurve + ?Sized> MgfCurve for &C {
    fn side(&self) -> Side {
        (**self).side()
    }
    fn lambda(&self, t: f64, mu: f64) -> Result<f64> {
        (**self).lambda(t, mu)
    }
    fn mu_star(&self, t: f64) -> Result<f64> {
        (**self).mu_star(t)
    }
    fn dmu_star_dt(&self, t: f64) -> Result<f64> {
        (**self).dmu_star_dt(t)
    }
    fn alpha(&self) -> f64 {
        (**self).alpha()
    }
}

/// `Lambda`, `Lambda'` and `Lambda''` in the tilt variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaDerivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

const RELATIVE_STEP: f64 = 5e-3;

/// Derivatives of `mu -> Lambda(t, mu)` at `p`.
///
/// With a finite critical moment the function is differentiated in the pole
/// distance `x = 1/(mu* - p)`, where it behaves like `omega x + L ln x` and a
/// relative step stays accurate arbitrarily close to the singularity.
pub fn lambda_derivatives<C: MgfCurve + ?Sized>(curve: &C, t: f64, p: f64) -> Result<LambdaDerivatives> {
    let mu_star = curve.mu_star(t)?;
    if mu_star.is_finite() {
        let x = 1.0 / (mu_star - p);
        let g = numdiff::central(|z| curve.lambda(t, mu_star - 1.0 / z), x, RELATIVE_STEP * x)?;
        let x2 = x * x;
        Ok(LambdaDerivatives {
            value: g.value,
            first: x2 * g.first,
            second: 2.0 * x2 * x * g.first + x2 * x2 * g.second,
        })
    } else {
        let h = RELATIVE_STEP * p.abs().max(1.0);
        let d = numdiff::central(|z| curve.lambda(t, z), p, h)?;
        Ok(LambdaDerivatives { value: d.value, first: d.first, second: d.second })
    }
}

type LambdaFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Time-homogeneous curve built from a closure; mainly for synthetic fixtures.
pub struct FnCurve {
    side: Side,
    mu_star: f64,
    alpha: f64,
    lambda: Box<LambdaFn>,
}

impl FnCurve {
    pub fn new<F>(side: Side, mu_star: f64, alpha: f64, lambda: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { side, mu_star, alpha, lambda: Box::new(lambda) }
    }

    /// Pure pole `omega / (mu* - mu)` with index one.
    pub fn pure_pole(side: Side, omega: f64, mu_star: f64) -> Self {
        Self::new(side, mu_star, 1.0, move |mu| omega / (mu_star - mu))
    }
}

impl MgfCurve for FnCurve {
    fn side(&self) -> Side {
        self.side
    }

    fn lambda(&self, _t: f64, mu: f64) -> Result<f64> {
        if mu >= self.mu_star {
            return Err(crate::Error::Domain(format!("mu = {mu} is not below the critical moment {}", self.mu_star)));
        }
        Ok((self.lambda)(mu))
    }

    fn mu_star(&self, _t: f64) -> Result<f64> {
        Ok(self.mu_star)
    }

    fn dmu_star_dt(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_derivatives_are_exact_to_high_order() {
        let c = FnCurve::pure_pole(Side::Right, 1.0, 2.0);
        for &p in &[0.0, 1.5, 1.99, 1.9999] {
            let d = lambda_derivatives(&c, 1.0, p).unwrap();
            let e = 2.0 - p;
            assert!((d.first * e * e - 1.0).abs() < 1e-9, "p={p}");
            assert!((d.second * e * e * e / 2.0 - 1.0).abs() < 1e-6, "p={p}");
        }
    }

    #[test]
    fn gamma_from_alpha() {
        let c = FnCurve::pure_pole(Side::Left, 1.0, 2.0);
        assert_eq!(c.gamma(), 0.5);
        assert_eq!(Side::Left.sign(), -1.0);
    }
}
