//! Monte Carlo simulation of the Heston terminal log-price.
//!
//! Full-truncation Euler for the variance and log-Euler for the price, 500
//! steps per unit time. Paths are grouped in blocks of [`BLOCK`]; block `b`
//! draws from its own ChaCha8 stream `b` of the seed, and block sums are
//! reduced in block order. The result is therefore independent of the number
//! of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use wingtail_models::HestonParams;

use crate::error::{OracleError, Result};

pub const BLOCK: usize = 4096;
pub const STEPS_PER_YEAR: f64 = 500.0;
pub const MIN_PATHS: usize = 10_000;

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub n_paths: usize,
    /// `E exp(X_t)`, equal to 1 for the exact model.
    pub forward: Estimate,
    /// Call payoff `(e^X - e^k)^+` per requested log-strike.
    pub calls: Vec<(f64, Estimate)>,
    /// Frequency of `X_t >= x` per requested level.
    pub tail_frequencies: Vec<(f64, Estimate)>,
}

#[derive(Clone)]
struct Sums {
    values: Vec<(f64, f64)>,
}

impl Sums {
    fn new(n: usize) -> Self {
        Self { values: vec![(0.0, 0.0); n] }
    }

    fn add(&mut self, i: usize, x: f64) {
        self.values[i].0 += x;
        self.values[i].1 += x * x;
    }
}

fn estimate(sum: f64, sum_sq: f64, n: usize) -> Estimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Estimate { mean, std_error: (var / nf).sqrt() }
}

/// Simulates `n_paths` terminal log-prices and summarises payoffs.
pub fn mc_terminal(
    p: &HestonParams,
    t: f64,
    log_strikes: &[f64],
    tail_levels: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<McSummary> {
    if n_paths < MIN_PATHS {
        return Err(OracleError::InvalidInput(format!("need at least {MIN_PATHS} paths, got {n_paths}")));
    }
    if !(t > 0.0) {
        return Err(OracleError::InvalidInput(format!("maturity must be positive, got {t}")));
    }
    let steps = (STEPS_PER_YEAR * t).ceil() as usize;
    let dt = t / steps as f64;
    let rho_perp = (1.0 - p.rho * p.rho).sqrt();
    let strikes: Vec<f64> = log_strikes.iter().map(|k| k.exp()).collect();
    let slots = 1 + strikes.len() + tail_levels.len();
    let blocks = n_paths.div_ceil(BLOCK);

    let per_block: Vec<Sums> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let paths = BLOCK.min(n_paths - b * BLOCK);
            let mut sums = Sums::new(slots);
            for _ in 0..paths {
                let (mut x, mut v) = (0.0f64, p.v0);
                for _ in 0..steps {
                    let z1: f64 = StandardNormal.sample(&mut rng);
                    let z2: f64 = StandardNormal.sample(&mut rng);
                    let vp = v.max(0.0);
                    let root = (vp * dt).sqrt();
                    x += -0.5 * vp * dt + root * (p.rho * z1 + rho_perp * z2);
                    v += (p.a - p.b * vp) * dt + p.sigma * root * z1;
                }
                let s = x.exp();
                sums.add(0, s);
                for (i, &strike) in strikes.iter().enumerate() {
                    sums.add(1 + i, (s - strike).max(0.0));
                }
                for (i, &level) in tail_levels.iter().enumerate() {
                    sums.add(1 + strikes.len() + i, if x >= level { 1.0 } else { 0.0 });
                }
            }
            sums
        })
        .collect();

    let mut total = Sums::new(slots);
    for block in &per_block {
        for (acc, part) in total.values.iter_mut().zip(&block.values) {
            acc.0 += part.0;
            acc.1 += part.1;
        }
    }
    let est = |i: usize| estimate(total.values[i].0, total.values[i].1, n_paths);
    Ok(McSummary {
        n_paths,
        forward: est(0),
        calls: log_strikes.iter().enumerate().map(|(i, &k)| (k, est(1 + i))).collect(),
        tail_frequencies: tail_levels
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, est(1 + strikes.len() + i)))
            .collect(),
    })
}
