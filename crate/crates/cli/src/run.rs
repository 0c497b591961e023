//! Task dispatch and CSV rendering.
//!
//! Grid points are evaluated in parallel and collected in grid order, so the
//! output, and the first reported error, do not depend on scheduling.

use std::fmt::Write as _;

use rayon::prelude::*;
use wingtail_core::{bs_otm, implied_total_vol_otm, numdiff, Side, TotalVol};
use wingtail_models::{
    heston_critical_moment, heston_implied_wing_with, heston_local_vol_wing_with, heston_log_mgf, heston_mu_hat,
    stein_stein_curve, svi_local_vol_wing, svi_price_expansion, HestonCurve, HestonParams, SteinSteinCoeffs,
};
use wingtail_oracle::{fourier_left_tail, fourier_otm, fourier_tail, heston_dupire, riccati_log_mgf, svi_dupire};
use wingtail_tauberian::{tail_expansion_with, TailConfig};
use wingtail_wings::{implied_vol_wing, local_vol_wing, WingConfig, WingPoint};

use crate::config::{Model, ScenarioConfig, SviFamily, Task, WingKind};
use crate::error::{Classify, CliError};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(&'static str),
    Num(f64),
}

/// A rendered table: header names and rows of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// CSV with numbers at 17 significant digits; non-finite cells abort.
    pub fn to_csv(&self, op: &str) -> Result<String, CliError> {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells = row
                .iter()
                .map(|c| match c {
                    Cell::Text(s) => Ok(s.to_string()),
                    Cell::Num(v) if v.is_finite() => Ok(format!("{v:.16e}")),
                    Cell::Num(v) => Err(CliError::Numerical {
                        op: op.to_string(),
                        message: format!("non-finite value {v} in the output"),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let _ = writeln!(out, "{}", cells.join(","));
        }
        Ok(out)
    }
}

fn unsupported(cfg: &ScenarioConfig, model: &Model) -> CliError {
    let kind = match cfg.task {
        Task::Wing | Task::Compare => format!(" with wing_kind {:?}", cfg.wing_kind).to_lowercase(),
        _ => String::new(),
    };
    CliError::config("task", format!("task {}{kind} is not available for model {}", cfg.task.as_str(), model.name()))
}

fn wing_config(cfg: &ScenarioConfig) -> WingConfig {
    let mut w = WingConfig::default();
    if let Some(v) = cfg.guards.min_nu {
        w.min_nu = v;
    }
    if let Some(v) = cfg.guards.min_k {
        w.min_k = v;
    }
    w
}

fn tail_config(cfg: &ScenarioConfig) -> TailConfig {
    let mut c = TailConfig::default();
    if let Some(v) = cfg.guards.tail_ratio {
        c.guard_ratio = v;
    }
    c
}

/// Evaluates `f` on every grid point in parallel, keeping grid order.
fn over_grid<F>(cfg: &ScenarioConfig, f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(f64) -> Result<Vec<Cell>, CliError> + Sync,
{
    let grid = cfg.grid.ok_or_else(|| CliError::config("grid", format!("task {} needs a grid", cfg.task.as_str())))?;
    let points = grid.points();
    let results: Vec<_> = points.par_iter().map(|&x| f(x)).collect();
    results.into_iter().collect()
}

/// Runs a validated scenario and returns its CSV text.
pub fn run(cfg: &ScenarioConfig, model: &Model) -> Result<String, CliError> {
    let table = match cfg.task {
        Task::CriticalMoments => critical_moments(cfg, model)?,
        Task::Mgf => match model {
            Model::Heston(p) => mgf(cfg, p)?,
            _ => return Err(unsupported(cfg, model)),
        },
        Task::Tail => match model {
            Model::Heston(p) => tail(cfg, p)?,
            _ => return Err(unsupported(cfg, model)),
        },
        Task::Wing | Task::Compare => wing(cfg, model)?,
    };
    table.to_csv(cfg.task.as_str())
}

fn critical_moments(cfg: &ScenarioConfig, model: &Model) -> Result<Table, CliError> {
    let t = cfg.t;
    let op = "critical_moments";
    let mut rows = Vec::new();
    let side_cell = |s: Side| Cell::Text(s.as_str());
    match model {
        Model::Heston(p) => {
            for side in [Side::Right, Side::Left] {
                let cm = heston_critical_moment(p, t, side).map_err(|e| e.classify(op, "t"))?;
                rows.push(vec![
                    side_cell(side),
                    Cell::Num(cm.mu_star),
                    Cell::Num(cm.dmu_star_dt),
                    Cell::Num(heston_mu_hat(p, side)),
                    Cell::Num(1.0),
                ]);
            }
        }
        Model::Svi(family) => {
            for side in [Side::Right, Side::Left] {
                let mu = family.at(t).and_then(|s| s.critical_moment(side)).map_err(|e| e.classify(op, "model"))?;
                let dmu = numdiff::first(|u| Ok(family.at(u).and_then(|s| s.critical_moment(side))?), t, 1e-3 * t)
                    .map_err(|e| e.classify(op, "model"))?;
                rows.push(vec![side_cell(side), Cell::Num(mu), Cell::Num(dmu), Cell::Num(mu), Cell::Num(0.0)]);
            }
        }
        Model::SteinStein(c) => {
            let mu = (c.b1)(t);
            let b1 = c.b1.clone();
            let dmu = numdiff::first(|u| Ok(b1(u)), t, 1e-3 * t).map_err(|e| e.classify(op, "model"))?;
            rows.push(vec![side_cell(Side::Right), Cell::Num(mu), Cell::Num(dmu), Cell::Num(mu), Cell::Num(1.0)]);
        }
    }
    Ok(Table { header: ["side", "mu_star", "dmu_star_dt", "mu_hat", "alpha"].map(String::from).to_vec(), rows })
}

fn mgf(cfg: &ScenarioConfig, p: &HestonParams) -> Result<Table, CliError> {
    let side: Side = cfg.side.into();
    let t = cfg.t;
    let rows = over_grid(cfg, |mu| {
        let closed = heston_log_mgf(p, t, mu, side).map_err(|e| e.classify("heston_log_mgf", "grid"))?;
        let ode = riccati_log_mgf(p, t, mu, side).map_err(|e| e.classify("riccati_log_mgf", "grid"))?;
        Ok(vec![Cell::Num(mu), Cell::Num(closed), Cell::Num(ode), Cell::Num((closed - ode).abs())])
    })?;
    Ok(Table { header: ["mu", "lambda_closed", "lambda_ode", "abs_error"].map(String::from).to_vec(), rows })
}

fn tail(cfg: &ScenarioConfig, p: &HestonParams) -> Result<Table, CliError> {
    let side: Side = cfg.side.into();
    let t = cfg.t;
    let curve = HestonCurve { params: *p, side };
    let tcfg = tail_config(cfg);
    let rows = over_grid(cfg, |x| {
        let est = tail_expansion_with(&curve, t, x, &tcfg).map_err(|e| e.classify("tail_expansion", "grid"))?;
        let exact = match side {
            Side::Right => fourier_tail(p, t, x),
            Side::Left => fourier_left_tail(p, t, x),
        }
        .map_err(|e| e.classify("fourier_tail", "grid"))?;
        let log_exact = exact.ln();
        let rel = ((est.log_prob - log_exact) / log_exact).abs();
        Ok(vec![
            Cell::Num(x),
            Cell::Num(est.p_star),
            Cell::Num(est.lambda_star),
            Cell::Num(est.leading),
            Cell::Num(est.correction),
            Cell::Num(est.log_prob),
            Cell::Num(log_exact),
            Cell::Num(rel),
        ])
    })?;
    let header = ["x", "p_star", "lambda_star", "leading", "correction", "log_prob_tauberian", "log_prob_fourier", "rel_log_error"];
    Ok(Table { header: header.map(String::from).to_vec(), rows })
}

/// A wing evaluator and an optional independent reference at the same abscissa.
type Evaluator<'a> = Box<dyn Fn(f64) -> Result<WingPoint, CliError> + Sync + 'a>;
type Reference<'a> = Box<dyn Fn(f64) -> Result<f64, CliError> + Sync + 'a>;

fn svi_evaluators<'a>(
    cfg: &ScenarioConfig,
    family: &'a SviFamily,
    side: Side,
    t: f64,
) -> Option<(Evaluator<'a>, Option<Reference<'a>>)> {
    let s = side.sign();
    let at = move |u: f64| family.at(u);
    match cfg.wing_kind {
        WingKind::Local => Some((
            Box::new(move |y| svi_local_vol_wing(at, t, side, y).map_err(|e| e.classify("svi_local_vol_wing", "grid"))),
            Some(Box::new(move |y| svi_dupire(at, t, s * y).map_err(|e| e.classify("svi_dupire", "grid")))),
        )),
        WingKind::Price => Some((
            Box::new(move |k| {
                let slice = family.at(t).map_err(|e| e.classify("svi_price_expansion", "model"))?;
                let value =
                    svi_price_expansion(&slice, side, k).map_err(|e| e.classify("svi_price_expansion", "grid"))?;
                Ok(WingPoint {
                    side,
                    abscissa: k,
                    value,
                    terms: vec![("mu_star", slice.critical_moment(side).unwrap_or(f64::NAN))],
                    regime_ok: true,
                    error_order: 1.0,
                })
            }),
            Some(Box::new(move |k| {
                let slice = family.at(t).map_err(|e| e.classify("svi_black_scholes", "model"))?;
                let v = TotalVol::new(slice.total_variance(s * k).sqrt())
                    .map_err(|e| e.classify("svi_black_scholes", "model"))?;
                Ok(bs_otm(s * k, v))
            })),
        )),
        WingKind::Implied => None,
    }
}

fn wing(cfg: &ScenarioConfig, model: &Model) -> Result<Table, CliError> {
    let side: Side = cfg.side.into();
    let s = side.sign();
    let t = cfg.t;
    let wcfg = wing_config(cfg);
    let stein_stein;
    let (evaluate, reference): (Evaluator, Option<Reference>) = match (model, cfg.wing_kind) {
        (Model::Heston(p), WingKind::Implied) => (
            Box::new(move |k| {
                heston_implied_wing_with(p, t, side, k, &wcfg).map_err(|e| e.classify("heston_implied_wing", "grid"))
            }),
            Some(Box::new(move |k| {
                let price = fourier_otm(p, t, s * k).map_err(|e| e.classify("fourier_otm", "grid"))?;
                let v = implied_total_vol_otm(price, s * k).map_err(|e| e.classify("implied_total_vol", "grid"))?;
                Ok(v.variance())
            })),
        ),
        (Model::Heston(p), WingKind::Local) => (
            Box::new(move |y| {
                heston_local_vol_wing_with(p, t, side, y, &wcfg)
                    .map_err(|e| e.classify("heston_local_vol_wing", "grid"))
            }),
            Some(Box::new(move |y| heston_dupire(p, t, s * y).map_err(|e| e.classify("heston_dupire", "grid")))),
        ),
        (Model::Svi(family), _) => svi_evaluators(cfg, family, side, t).ok_or_else(|| unsupported(cfg, model))?,
        (Model::SteinStein(c), WingKind::Implied | WingKind::Local) => {
            if side != Side::Right {
                return Err(CliError::config("side", "the Stein-Stein wing is available on the right side only"));
            }
            stein_stein = stein_stein_curve(SteinSteinCoeffs::clone(c), t).map_err(|e| e.classify("stein_stein_curve", "model"))?.0;
            let curve = &stein_stein;
            let evaluate: Evaluator = match cfg.wing_kind {
                WingKind::Implied => Box::new(move |k| {
                    implied_vol_wing(curve, t, k, &wcfg).map_err(|e| e.classify("implied_vol_wing", "grid"))
                }),
                _ => Box::new(move |y| {
                    local_vol_wing(curve, t, y, 0.0, &wcfg).map_err(|e| e.classify("local_vol_wing", "grid"))
                }),
            };
            (evaluate, None)
        }
        _ => return Err(unsupported(cfg, model)),
    };

    let abscissa = match cfg.wing_kind {
        WingKind::Local => "y",
        WingKind::Implied | WingKind::Price => "k",
    };
    let value_name = match cfg.wing_kind {
        WingKind::Local => "local_variance",
        WingKind::Implied => "total_variance",
        WingKind::Price => "price",
    };

    match cfg.task {
        Task::Compare => {
            let reference = reference.ok_or_else(|| unsupported(cfg, model))?;
            let rows = over_grid(cfg, |x| {
                let w = evaluate(x)?;
                let r = reference(x)?;
                let abs = (w.value - r).abs();
                Ok(vec![Cell::Num(x), Cell::Num(w.value), Cell::Num(r), Cell::Num(abs), Cell::Num(abs / r.abs())])
            })?;
            let header = [abscissa, "wing", "oracle", "abs_error", "rel_error"];
            Ok(Table { header: header.map(String::from).to_vec(), rows })
        }
        _ => {
            let points = over_grid(cfg, |x| {
                let w = evaluate(x)?;
                let mut row = vec![Cell::Num(x), Cell::Num(w.value)];
                row.extend(w.terms.iter().map(|&(_, v)| Cell::Num(v)));
                Ok(row)
            })?;
            let probe = cfg.grid.map(|g| evaluate(g.start)).transpose()?;
            let mut header = vec![abscissa.to_string(), value_name.to_string()];
            if let Some(p) = probe {
                header.extend(p.terms.iter().map(|(n, _)| n.to_string()));
            }
            Ok(Table { header, rows: points })
        }
    }
}
