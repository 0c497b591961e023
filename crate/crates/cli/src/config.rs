//! JSON scenario configuration and its validation into model objects.

use std::sync::Arc;

use serde::Deserialize;
use wingtail_core::Side;
use wingtail_models::{HestonParams, ModelError, SteinSteinCoeffs, SviSlice};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    CriticalMoments,
    Mgf,
    Tail,
    Wing,
    Compare,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::CriticalMoments => "critical_moments",
            Task::Mgf => "mgf",
            Task::Tail => "tail",
            Task::Wing => "wing",
            Task::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

/// Which wing formula `wing` and `compare` evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WingKind {
    #[default]
    Implied,
    Local,
    /// SVI out-of-the-money price expansion.
    Price,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    /// Points `start + i step` up to `stop` inclusive (with a relative slack
    /// of `1e-9` steps).
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guards {
    pub min_nu: Option<f64>,
    pub min_k: Option<f64>,
    pub tail_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HestonSpec {
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub rho: f64,
    pub v0: f64,
    #[serde(default)]
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SviSpec {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub m: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteinSteinSpec {
    #[serde(rename = "B1")]
    pub b1: Vec<[f64; 2]>,
    #[serde(rename = "B2")]
    pub b2: Vec<[f64; 2]>,
    #[serde(rename = "B3")]
    pub b3: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSpec {
    Heston(HestonSpec),
    Svi { slices: Vec<SviSpec> },
    SteinStein(SteinSteinSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelSpec,
    pub task: Task,
    #[serde(default = "default_side")]
    pub side: SideArg,
    pub t: f64,
    pub grid: Option<Grid>,
    #[serde(default)]
    pub wing_kind: WingKind,
    #[serde(default)]
    pub guards: Guards,
    pub output: Option<String>,
    #[serde(default = "default_seed")]
    pub mc_seed: u64,
}

fn default_side() -> SideArg {
    SideArg::Right
}

fn default_seed() -> u64 {
    42
}

/// SVI slices interpolated linearly in `t`, parameter by parameter, and held
/// flat outside the tabulated maturities.
#[derive(Debug, Clone)]
pub struct SviFamily {
    slices: Arc<Vec<SviSpec>>,
}

impl SviFamily {
    pub fn at(&self, t: f64) -> wingtail_models::Result<SviSlice> {
        let s = &self.slices;
        let pick = |f: fn(&SviSpec) -> f64| -> f64 {
            interpolate(s.iter().map(|x| [x.t, f(x)]), t)
        };
        SviSlice::new(t, pick(|x| x.a), pick(|x| x.b), pick(|x| x.rho), pick(|x| x.m), pick(|x| x.eta))
    }
}

fn interpolate(table: impl Iterator<Item = [f64; 2]> + Clone, t: f64) -> f64 {
    let points: Vec<[f64; 2]> = table.collect();
    let (first, last) = (points[0], points[points.len() - 1]);
    if t <= first[0] {
        return first[1];
    }
    if t >= last[0] {
        return last[1];
    }
    for w in points.windows(2) {
        if t <= w[1][0] {
            let u = (t - w[0][0]) / (w[1][0] - w[0][0]);
            return w[0][1] + u * (w[1][1] - w[0][1]);
        }
    }
    last[1]
}

/// Validated model ready for computation.
#[derive(Debug, Clone)]
pub enum Model {
    Heston(HestonParams),
    Svi(SviFamily),
    SteinStein(SteinSteinCoeffs),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Heston(_) => "heston",
            Model::Svi(_) => "svi",
            Model::SteinStein(_) => "stein_stein",
        }
    }
}

fn field_error(path: String, e: ModelError) -> CliError {
    match e {
        ModelError::InvalidParameter { reason, .. } => CliError::Config { field: path, message: reason },
        other => CliError::Config { field: path, message: other.to_string() },
    }
}

fn check_table(name: &str, table: &[[f64; 2]], positive: bool, floor: Option<f64>) -> Result<(), CliError> {
    if table.is_empty() {
        return Err(CliError::config(format!("model.{name}"), "table must not be empty"));
    }
    for (i, row) in table.iter().enumerate() {
        let path = format!("model.{name}[{i}]");
        if !(row[0] > 0.0 && row[0].is_finite()) || (i > 0 && row[0] <= table[i - 1][0]) {
            return Err(CliError::config(path, "maturities must be positive and strictly ascending"));
        }
        if !row[1].is_finite() || (positive && row[1] <= 0.0) || floor.is_some_and(|f| row[1] <= f) {
            let what = match floor {
                Some(f) => format!("value must exceed {f}"),
                None if positive => "value must be positive".to_string(),
                None => "value must be finite".to_string(),
            };
            return Err(CliError::config(path, what));
        }
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            field: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Checks the scalar fields and builds the model.
    pub fn validate(&self) -> Result<Model, CliError> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(CliError::config("t", "maturity must be positive and finite"));
        }
        if let Some(g) = &self.grid {
            if !(g.start.is_finite() && g.stop.is_finite() && g.start < g.stop) {
                return Err(CliError::config("grid.stop", "grid.start must be below grid.stop"));
            }
            if !(g.step > 0.0 && g.step.is_finite()) {
                return Err(CliError::config("grid.step", "step must be positive"));
            }
            if g.points().len() > 100_000 {
                return Err(CliError::config("grid.step", "grid has more than 100000 points"));
            }
        }
        let guard = |v: Option<f64>, name: &str| match v {
            Some(x) if !(x >= 0.0 && x.is_finite()) => Err(CliError::config(format!("guards.{name}"), "must be nonnegative")),
            _ => Ok(()),
        };
        guard(self.guards.min_nu, "min_nu")?;
        guard(self.guards.min_k, "min_k")?;
        guard(self.guards.tail_ratio, "tail_ratio")?;

        match &self.model {
            ModelSpec::Heston(h) => {
                let p = HestonParams { a: h.a, b: h.b, sigma: h.sigma, rho: h.rho, v0: h.v0, q: h.q };
                p.validate().map_err(|e| match &e {
                    ModelError::InvalidParameter { field, .. } => field_error(format!("model.{field}"), e.clone()),
                    _ => field_error("model".into(), e.clone()),
                })?;
                Ok(Model::Heston(p))
            }
            ModelSpec::Svi { slices } => {
                if slices.is_empty() {
                    return Err(CliError::config("model.slices", "at least one slice is required"));
                }
                for (i, s) in slices.iter().enumerate() {
                    if i > 0 && s.t <= slices[i - 1].t {
                        return Err(CliError::config(format!("model.slices[{i}].t"), "maturities must be strictly ascending"));
                    }
                    SviSlice::new(s.t, s.a, s.b, s.rho, s.m, s.eta).map_err(|e| match &e {
                        ModelError::InvalidParameter { field, .. } => {
                            field_error(format!("model.slices[{i}].{field}"), e.clone())
                        }
                        _ => field_error(format!("model.slices[{i}]"), e.clone()),
                    })?;
                }
                Ok(Model::Svi(SviFamily { slices: Arc::new(slices.clone()) }))
            }
            ModelSpec::SteinStein(s) => {
                check_table("B1", &s.b1, true, Some(1.0))?;
                check_table("B2", &s.b2, true, None)?;
                check_table("B3", &s.b3, false, None)?;
                let (b1, b2, b3) = (s.b1.clone(), s.b2.clone(), s.b3.clone());
                Ok(Model::SteinStein(SteinSteinCoeffs::new(
                    move |t| interpolate(b1.iter().copied(), t),
                    move |t| interpolate(b2.iter().copied(), t),
                    move |t| interpolate(b3.iter().copied(), t),
                )))
            }
        }
    }
}
