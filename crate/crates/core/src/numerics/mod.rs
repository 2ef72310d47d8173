//! Sampling grids, finite-difference stencils and convergence-order fits
//! shared by every verification path.

mod spline;

pub use spline::CubicSpline;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Vec2};

/// Default finite-difference step in natural units.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Value of a field at a point, or a flag that the field is undefined there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSample<T> {
    Regular(T),
    Singular,
}

impl<T> FieldSample<T> {
    pub fn value(self) -> Option<T> {
        match self {
            FieldSample::Regular(v) => Some(v),
            FieldSample::Singular => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, FieldSample::Singular)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> FieldSample<U> {
        match self {
            FieldSample::Regular(v) => FieldSample::Regular(f(v)),
            FieldSample::Singular => FieldSample::Singular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

/// Region removed from a grid: a disk around a vortex core, or a strip
/// around a nodal line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exclusion {
    Disk {
        center: Point2D,
        radius: f64,
    },
    /// Points with `|coordinate(axis) - at| < half_width`.
    Strip {
        axis: Axis,
        at: f64,
        half_width: f64,
    },
}

impl Exclusion {
    pub fn contains(&self, p: Point2D) -> bool {
        match *self {
            Exclusion::Disk { center, radius } => (p - center).norm() < radius,
            Exclusion::Strip { axis, at, half_width } => {
                let c = match axis {
                    Axis::X => p.x,
                    Axis::Y => p.y,
                };
                (c - at).abs() < half_width
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridKind {
    /// Inclusive endpoints on both axes.
    Cartesian { x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize },
    /// `nr` radii from `r0` to `r1` inclusive; `nphi` cell-centred azimuths
    /// in (-π, π).
    PolarAnnulus { r0: f64, r1: f64, nr: usize, nphi: usize },
}

/// A sampling lattice with excluded neighbourhoods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub kind: GridKind,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
}

/// A grid node. `polar` is set for annulus grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub point: Point2D,
    pub polar: Option<(f64, f64)>,
}

impl Grid2D {
    pub fn cartesian(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::new(GridKind::Cartesian { x0, x1, y0, y1, nx, ny })
    }

    pub fn annulus(r0: f64, r1: f64, nr: usize, nphi: usize) -> Result<Self> {
        Self::new(GridKind::PolarAnnulus { r0, r1, nr, nphi })
    }

    pub fn new(kind: GridKind) -> Result<Self> {
        let grid = Self { kind, exclusions: Vec::new() };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_exclusions(mut self, exclusions: impl IntoIterator<Item = Exclusion>) -> Self {
        self.exclusions.extend(exclusions);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        match self.kind {
            GridKind::Cartesian { x0, x1, y0, y1, nx, ny } => {
                if ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
                    return bad("grid bounds must be finite");
                }
                if !(x0 < x1 && y0 < y1) {
                    return bad("grid bounds must be ordered");
                }
                if nx < 2 || ny < 2 {
                    return bad("grid counts must be at least 2");
                }
            }
            GridKind::PolarAnnulus { r0, r1, nr, nphi } => {
                if !(r0.is_finite() && r1.is_finite()) {
                    return bad("annulus radii must be finite");
                }
                if !(r0 > 0.0) {
                    return bad("annulus inner radius must be positive");
                }
                if !(r0 < r1) {
                    return bad("annulus radii must be ordered");
                }
                if nr < 2 || nphi < 2 {
                    return bad("grid counts must be at least 2");
                }
            }
        }
        for ex in &self.exclusions {
            let width = match *ex {
                Exclusion::Disk { radius, .. } => radius,
                Exclusion::Strip { half_width, .. } => half_width,
            };
            if !(width >= 0.0) {
                return bad("exclusion sizes must be non-negative");
            }
        }
        Ok(())
    }

    /// All lattice nodes, including excluded ones, in deterministic order:
    /// row-major (x fastest) for Cartesian grids, radius-major for annuli.
    fn lattice(&self) -> Vec<GridPoint> {
        match self.kind {
            GridKind::Cartesian { x0, x1, y0, y1, nx, ny } => {
                let dx = (x1 - x0) / (nx - 1) as f64;
                let dy = (y1 - y0) / (ny - 1) as f64;
                (0..ny)
                    .flat_map(|j| {
                        (0..nx).map(move |i| GridPoint {
                            point: Point2D::new(x0 + i as f64 * dx, y0 + j as f64 * dy),
                            polar: None,
                        })
                    })
                    .collect()
            }
            GridKind::PolarAnnulus { r0, r1, nr, nphi } => {
                let dr = (r1 - r0) / (nr - 1) as f64;
                let dphi = 2.0 * PI / nphi as f64;
                (0..nr)
                    .flat_map(|i| {
                        let r = r0 + i as f64 * dr;
                        (0..nphi).map(move |j| {
                            let phi = -PI + (j as f64 + 0.5) * dphi;
                            GridPoint { point: Point2D::from_polar(r, phi), polar: Some((r, phi)) }
                        })
                    })
                    .collect()
            }
        }
    }

    /// Non-excluded grid nodes in deterministic order.
    pub fn points(&self) -> Vec<GridPoint> {
        self.lattice().into_iter().filter(|gp| !self.exclusions.iter().any(|e| e.contains(gp.point))).collect()
    }
}

/// One row of a grid sweep. Per-point failures are recorded, not fatal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow<T> {
    pub at: GridPoint,
    pub value: Result<T>,
}

/// Evaluates `f` on every non-excluded node of `grid`. Rows come back in
/// grid order; evaluation is spread across threads by rayon.
pub fn sample_grid<T, F>(grid: &Grid2D, f: F) -> Vec<SampleRow<T>>
where
    T: Send,
    F: Fn(Point2D) -> Result<T> + Sync,
{
    grid.points().into_par_iter().map(|at| SampleRow { at, value: f(at.point) }).collect()
}

/// Second-order central difference of a scalar function.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name: "h", value: h })
    }
}

/// Values of a vector field at the four axis-aligned stencil neighbours
/// `(x+h, y), (x-h, y), (x, y+h), (x, y-h)`.
fn stencil<F>(field: &F, p: Point2D, h: f64) -> Result<FieldSample<[Vec2; 4]>>
where
    F: Fn(Point2D) -> Result<FieldSample<Vec2>>,
{
    if field(p)?.is_singular() {
        return Ok(FieldSample::Singular);
    }
    let pts = [p.offset(h, 0.0), p.offset(-h, 0.0), p.offset(0.0, h), p.offset(0.0, -h)];
    let mut out = [Vec2::ZERO; 4];
    for (slot, q) in out.iter_mut().zip(pts) {
        *slot = field(q)?.value().ok_or(Error::StencilHitsNode { point: q })?;
    }
    Ok(FieldSample::Regular(out))
}

/// Central-difference curl `∂v_y/∂x - ∂v_x/∂y` of a planar field.
///
/// A singular centre yields [`FieldSample::Singular`]; a singular stencil
/// neighbour is an error naming that neighbour.
pub fn curl_fd<F>(field: F, p: Point2D, h: f64) -> Result<FieldSample<f64>>
where
    F: Fn(Point2D) -> Result<FieldSample<Vec2>>,
{
    check_step(h)?;
    Ok(stencil(&field, p, h)?.map(|[xp, xm, yp, ym]| (xp.y - xm.y) / (2.0 * h) - (yp.x - ym.x) / (2.0 * h)))
}

/// Central-difference divergence `∂v_x/∂x + ∂v_y/∂y` of a planar field.
pub fn divergence_fd<F>(field: F, p: Point2D, h: f64) -> Result<FieldSample<f64>>
where
    F: Fn(Point2D) -> Result<FieldSample<Vec2>>,
{
    check_step(h)?;
    Ok(stencil(&field, p, h)?.map(|[xp, xm, yp, ym]| (xp.x - xm.x) / (2.0 * h) + (yp.y - ym.y) / (2.0 * h)))
}

/// Residuals below this are treated as roundoff, not truncation error.
pub const DEFAULT_ROUNDOFF_FLOOR: f64 = 1e-10;

/// Observed convergence of a residual as the step shrinks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub h_values: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Which residuals were at or below the roundoff floor and left out of
    /// the fit.
    pub floored: Vec<bool>,
    /// Least-squares slope of `log(residual)` against `log(h)`; `None` when
    /// fewer than two residuals sit above the floor.
    pub fitted_order: Option<f64>,
}

impl ConvergenceReport {
    /// True when the fit was impossible because the residual never rose
    /// above roundoff.
    pub fn at_floor(&self) -> bool {
        self.fitted_order.is_none()
    }
}

/// Fits the convergence order of `residual_fn` over the steps in `h_list`.
///
/// Steps must be strictly decreasing, at least three, and span a decade.
pub fn convergence_order(
    h_list: &[f64],
    mut residual_fn: impl FnMut(f64) -> f64,
    floor: f64,
) -> Result<ConvergenceReport> {
    if h_list.len() < 3 {
        return Err(Error::InvalidSteps(format!("need at least 3 steps, got {}", h_list.len())));
    }
    if h_list.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::InvalidSteps("steps must be positive and finite".into()));
    }
    if h_list.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidSteps("steps must be strictly decreasing".into()));
    }
    if h_list[0] / h_list[h_list.len() - 1] < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidSteps("steps must span at least one decade".into()));
    }

    let residuals: Vec<f64> = h_list.iter().map(|&h| residual_fn(h).abs()).collect();
    let floored: Vec<bool> = residuals.iter().map(|&r| !(r > floor)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        h_list.iter().zip(&residuals).zip(&floored).filter(|(_, &f)| !f).map(|((h, r), _)| (h.ln(), r.ln())).unzip();

    let fitted_order = (xs.len() >= 2).then(|| least_squares_slope(&xs, &ys));
    Ok(ConvergenceReport { h_values: h_list.to_vec(), residuals, floored, fitted_order })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Every tolerance used by the verification suites, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max |FD vorticity| at the reporting step.
    pub vorticity: f64,
    /// Max |FD divergence of the current|.
    pub continuity: f64,
    /// Max FD Cauchy–Riemann residual.
    pub cauchy_riemann: f64,
    /// Max-norm gap between state-derived and potential-derived velocity.
    pub consistency: f64,
    /// Relative error of Γ against 2π·m_l·ħ/m (absolute when the quantum is 0).
    pub quantization: f64,
    /// Max pairwise spread of Γ across contours around the same core.
    pub stokes_spread: f64,
    /// |Γ| on a contour that encloses no singularity.
    pub complement: f64,
    /// Minimum fitted convergence order of FD residuals.
    pub min_order: f64,
    /// Roundoff floor below which residuals are excluded from order fits.
    pub roundoff_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            vorticity: 1e-6,
            continuity: 1e-6,
            cauchy_riemann: 1e-6,
            consistency: 1e-8,
            quantization: 1e-6,
            stokes_spread: 1e-8,
            complement: 1e-8,
            min_order: 1.9,
            roundoff_floor: DEFAULT_ROUNDOFF_FLOOR,
        }
    }
}
