//! Verification suites behind `qflow verify`.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::circulation::{circulation, make_circle, stokes_check, FlowSource, STOKES_POINTS};
use crate::error::{Error, Result};
use crate::geometry::{Point2D, Vec2};
use crate::kinematics::{self, NodeThreshold};
use crate::numerics::{convergence_order, curl_fd, ConvergenceReport, FieldSample, Grid2D, Tolerances};
use crate::potentials::{consistency_state_vs_potential, potential_of_state, BranchCut, ComplexPotentialSpec};
use crate::states::StateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Irrotational,
    CauchyRiemann,
    Continuity,
    Quantization,
    Consistency,
    All,
}

/// What the suites run against.
#[derive(Debug, Clone)]
pub enum Source {
    State(StateSpec),
    Potential(ComplexPotentialSpec),
}

impl Source {
    pub fn state(&self) -> Option<&StateSpec> {
        match self {
            Source::State(s) => Some(s),
            Source::Potential(_) => None,
        }
    }

    pub fn potential(&self) -> ComplexPotentialSpec {
        match self {
            Source::State(s) => potential_of_state(s),
            Source::Potential(p) => *p,
        }
    }

    pub fn flow(&self, core_radius: f64) -> FlowSource<'_> {
        match self {
            Source::State(s) => FlowSource::State(s),
            Source::Potential(spec) => FlowSource::Potential { spec, core_radius },
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Sampling grid, exclusions included.
    pub grid: Grid2D,
    pub h: f64,
    pub h_list: Vec<f64>,
    pub radii: Vec<f64>,
    pub cut: BranchCut,
    pub threshold: NodeThreshold,
    pub core_radius: f64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub evaluated: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn measured(name: &'static str, residual: f64, tolerance: f64, evaluated: usize, skipped: usize) -> Self {
        let status = if evaluated > 0 && residual <= tolerance { Status::Pass } else { Status::Fail };
        let note = (evaluated == 0).then(|| "no point could be evaluated".to_string());
        Self { name, status, max_residual: Some(residual), tolerance, evaluated, skipped, convergence: None, note }
    }

    fn skipped(name: &'static str, tolerance: f64, note: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::Skipped,
            max_residual: None,
            tolerance,
            evaluated: 0,
            skipped: 0,
            convergence: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Errors that mark a point as unusable rather than aborting a sweep.
fn is_pointwise(e: &Error) -> bool {
    matches!(
        e,
        Error::StencilHitsNode { .. }
            | Error::SingularPoint { .. }
            | Error::OriginEvaluation
            | Error::StencilCrossesCut { .. }
    )
}

/// Max of `|f(p)|` over the grid; unusable points are counted, not fatal.
fn sweep<F>(cfg: &VerifyConfig, f: F) -> Result<(f64, usize, usize)>
where
    F: Fn(Point2D) -> Result<Option<f64>> + Sync,
{
    let results: Vec<Result<Option<f64>>> = cfg.grid.points().par_iter().map(|gp| f(gp.point)).collect();
    let (mut max, mut ok, mut skipped) = (0.0_f64, 0, 0);
    for r in results {
        match r {
            Ok(Some(v)) => {
                max = max.max(v.abs());
                ok += 1;
            }
            Ok(None) => skipped += 1,
            Err(e) if is_pointwise(&e) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((max, ok, skipped))
}

fn velocity_at(src: &Source, cfg: &VerifyConfig, p: Point2D) -> Result<FieldSample<Vec2>> {
    src.flow(cfg.core_radius).velocity(p, cfg.threshold)
}

pub fn irrotational(src: &Source, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let tol = &cfg.tolerances;
    let curl_at =
        |p: Point2D, h: f64| -> Result<Option<f64>> { Ok(curl_fd(|q| velocity_at(src, cfg, q), p, h)?.value()) };
    let (max, n, skipped) = sweep(cfg, |p| curl_at(p, cfg.h))?;
    let main = CheckResult::measured("irrotational", max, tol.vorticity, n, skipped);

    // order fit on points usable at every step
    let usable: Vec<Point2D> = cfg
        .grid
        .points()
        .par_iter()
        .map(|gp| gp.point)
        .filter(|&p| cfg.h_list.iter().all(|&h| matches!(curl_at(p, h), Ok(Some(_)))))
        .collect();
    let report = convergence_order(
        &cfg.h_list,
        |h| usable.par_iter().map(|&p| curl_at(p, h).ok().flatten().unwrap_or(0.0).abs()).reduce(|| 0.0, f64::max),
        tol.roundoff_floor,
    )?;
    let (status, note) = match report.fitted_order {
        _ if usable.is_empty() => (Status::Fail, Some("no point usable at every step".to_string())),
        None => (Status::Pass, Some("residuals at roundoff floor".to_string())),
        Some(order) if order >= tol.min_order => (Status::Pass, None),
        Some(_) => (Status::Fail, None),
    };
    let order = CheckResult {
        name: "irrotational_order",
        status,
        max_residual: report.fitted_order,
        tolerance: tol.min_order,
        evaluated: usable.len(),
        skipped: cfg.grid.points().len() - usable.len(),
        convergence: Some(report),
        note,
    };
    Ok(vec![main, order])
}

pub fn continuity(state: &StateSpec, cfg: &VerifyConfig) -> Result<CheckResult> {
    let (max, n, skipped) = sweep(cfg, |p| kinematics::continuity_residual(state, p, cfg.h).map(Some))?;
    Ok(CheckResult::measured("continuity", max, cfg.tolerances.continuity, n, skipped))
}

pub fn cauchy_riemann(potential: &ComplexPotentialSpec, cfg: &VerifyConfig) -> Result<CheckResult> {
    let (max, n, skipped) = sweep(cfg, |p| {
        let (a, b) = potential.cauchy_riemann_residual(p, cfg.h, cfg.cut)?;
        Ok(Some(a.abs().max(b.abs())))
    })?;
    Ok(CheckResult::measured("cauchy_riemann", max, cfg.tolerances.cauchy_riemann, n, skipped))
}

pub fn consistency(state: &StateSpec, cfg: &VerifyConfig) -> Result<CheckResult> {
    let (max, n, skipped) = sweep(cfg, |p| consistency_state_vs_potential(state, p, cfg.threshold).map(Some))?;
    Ok(CheckResult::measured("consistency", max, cfg.tolerances.consistency, n, skipped))
}

pub fn quantization(src: &Source, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let tol = &cfg.tolerances;
    let flow = src.flow(cfg.core_radius);
    let quantum = flow.circulation_quantum();
    let expected = TAU * quantum;

    let stokes = match stokes_check(flow, &cfg.radii, cfg.threshold) {
        Ok(r) => r,
        Err(e) if is_pointwise(&e) => {
            let note = format!("circle crosses a singular point: {e}");
            return Ok(vec![
                CheckResult::skipped("quantization", tol.quantization, note.clone()),
                CheckResult::skipped("stokes_spread", tol.stokes_spread, note),
            ]);
        }
        Err(e) => return Err(e),
    };
    let err = stokes
        .gammas
        .iter()
        .map(|g| if quantum == 0.0 { g.abs() } else { (g - expected).abs() / expected.abs() })
        .fold(0.0, f64::max);
    let n = cfg.radii.len();
    let mut checks = vec![
        CheckResult::measured("quantization", err, tol.quantization, n, 0),
        CheckResult::measured("stokes_spread", stokes.spread, tol.stokes_spread, n, 0),
    ];

    // a circle that leaves the core outside
    let lo = cfg.radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cfg.radii.iter().copied().fold(0.0, f64::max);
    let mid = 0.5 * (lo + hi);
    let away = make_circle(Point2D::new(mid, 0.0), 0.25 * mid, STOKES_POINTS)?;
    checks.push(match circulation(flow, &away, cfg.threshold) {
        Ok(r) => CheckResult::measured("complement", r.gamma.abs(), tol.complement, 1, 0),
        Err(e) if is_pointwise(&e) => {
            CheckResult::skipped("complement", tol.complement, format!("circle crosses a singular point: {e}"))
        }
        Err(e) => return Err(e),
    });
    Ok(checks)
}

/// Runs `suite`. A suite that needs a state but got a bare potential is a
/// usage error.
pub fn run(suite: Suite, src: &Source, cfg: &VerifyConfig) -> std::result::Result<VerificationReport, RunError> {
    let needs_state = |name: &str| RunError::Usage(format!("suite `{name}` needs a state, not a bare potential"));
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Irrotational {
        checks.extend(irrotational(src, cfg)?);
    }
    if all || suite == Suite::CauchyRiemann {
        checks.push(cauchy_riemann(&src.potential(), cfg)?);
    }
    if all || suite == Suite::Continuity {
        match src.state() {
            Some(s) => checks.push(continuity(s, cfg)?),
            None if all => checks.push(CheckResult::skipped("continuity", cfg.tolerances.continuity, "needs a state")),
            None => return Err(needs_state("continuity")),
        }
    }
    if all || suite == Suite::Quantization {
        checks.extend(quantization(src, cfg)?);
    }
    if all || suite == Suite::Consistency {
        match src.state() {
            Some(s) => checks.push(consistency(s, cfg)?),
            None if all => {
                checks.push(CheckResult::skipped("consistency", cfg.tolerances.consistency, "needs a state"))
            }
            None => return Err(needs_state("consistency")),
        }
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerificationReport { checks, passed })
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Eval(#[from] Error),
}
