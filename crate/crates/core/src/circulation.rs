//! Circulation `Γ = ∮ v·dl` around closed contours and the quantization
//! check `Γ = 2π m_l ħ/m`.
//!
//! Contours built from a smooth periodic parametrization carry exact
//! tangents and are integrated with the periodic trapezoidal rule, which
//! converges spectrally. Bare point lists fall back to the chord-wise
//! trapezoidal rule.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Vec2};
use crate::kinematics::{self, NodeThreshold};
use crate::numerics::FieldSample;
use crate::potentials::ComplexPotentialSpec;
use crate::states::StateSpec;

pub const MIN_CONTOUR_POINTS: usize = 16;

/// Point count used by [`stokes_check`].
pub const STOKES_POINTS: usize = 256;

/// Radius around a potential vortex inside which velocity is singular.
pub const DEFAULT_POTENTIAL_CORE_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Closed curve; the last point connects back to the first.
///
/// When `tangents` is present, entry `i` is `dp/ds` at `points[i]` for a
/// parameter `s ∈ [0, 1)` sampled uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContourDoc", into = "ContourDoc")]
pub struct Contour {
    points: Vec<Point2D>,
    tangents: Option<Vec<Vec2>>,
    orientation: Orientation,
}

#[derive(Serialize, Deserialize)]
struct ContourDoc {
    points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tangents: Option<Vec<[f64; 2]>>,
}

impl Contour {
    pub fn new(points: Vec<Point2D>) -> Result<Self> {
        Self::build(points, None)
    }

    pub fn with_tangents(points: Vec<Point2D>, tangents: Vec<Vec2>) -> Result<Self> {
        if tangents.len() != points.len() {
            return Err(Error::InvalidSpec(format!("{} tangents for {} contour points", tangents.len(), points.len())));
        }
        Self::build(points, Some(tangents))
    }

    fn build(points: Vec<Point2D>, tangents: Option<Vec<Vec2>>) -> Result<Self> {
        if points.len() < MIN_CONTOUR_POINTS {
            return Err(Error::TooFewPoints { n: points.len(), min: MIN_CONTOUR_POINTS });
        }
        if !points.iter().all(|p| p.is_finite()) {
            return Err(Error::InvalidSpec("contour points must be finite".into()));
        }
        let area = signed_area(&points);
        if area == 0.0 || !area.is_finite() {
            return Err(Error::InvalidSpec("contour encloses no area".into()));
        }
        let orientation = if area > 0.0 { Orientation::Ccw } else { Orientation::Cw };
        Ok(Self { points, tangents, orientation })
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn tangents(&self) -> Option<&[Vec2]> {
        self.tangents.as_deref()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let n = self.points.len();
        let idx = |k: usize| (n - k) % n;
        Self {
            points: (0..n).map(|k| self.points[idx(k)]).collect(),
            tangents: self.tangents.as_ref().map(|t| (0..n).map(|k| -t[idx(k)]).collect()),
            orientation: match self.orientation {
                Orientation::Ccw => Orientation::Cw,
                Orientation::Cw => Orientation::Ccw,
            },
        }
    }

    /// The curve traversed `times` times in one sweep of the parameter.
    pub fn repeated(&self, times: usize) -> Self {
        assert!(times >= 1, "a contour must be traversed at least once");
        let scale = times as f64;
        Self {
            points: self.points.repeat(times),
            tangents: self.tangents.as_ref().map(|t| t.iter().map(|v| *v * scale).collect::<Vec<_>>().repeat(times)),
            orientation: self.orientation,
        }
    }

    /// Number of times the contour winds counter-clockwise about `about`.
    pub fn winding_number(&self, about: Point2D) -> i64 {
        let n = self.points.len();
        let total: f64 = (0..n)
            .map(|i| {
                let a = (self.points[i] - about).y.atan2((self.points[i] - about).x);
                let b = (self.points[(i + 1) % n] - about).y.atan2((self.points[(i + 1) % n] - about).x);
                wrap_angle(b - a)
            })
            .sum();
        (total / TAU).round() as i64
    }
}

fn wrap_angle(mut d: f64) -> f64 {
    while d > PI {
        d -= TAU;
    }
    while d <= -PI {
        d += TAU;
    }
    d
}

fn signed_area(points: &[Point2D]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

impl TryFrom<ContourDoc> for Contour {
    type Error = Error;

    fn try_from(doc: ContourDoc) -> Result<Self> {
        let points = doc.points.into_iter().map(|[x, y]| Point2D::new(x, y)).collect();
        match doc.tangents {
            Some(t) => Contour::with_tangents(points, t.into_iter().map(|[x, y]| Vec2::new(x, y)).collect()),
            None => Contour::new(points),
        }
    }
}

impl From<Contour> for ContourDoc {
    fn from(c: Contour) -> Self {
        ContourDoc {
            points: c.points.iter().map(|p| [p.x, p.y]).collect(),
            tangents: c.tangents.map(|t| t.iter().map(|v| [v.x, v.y]).collect()),
        }
    }
}

/// Counter-clockwise circle sampled at `n_points` equally spaced angles,
/// with exact tangents.
pub fn make_circle(center: Point2D, radius: f64, n_points: usize) -> Result<Contour> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::NonPositive { name: "radius", value: radius });
    }
    if n_points < MIN_CONTOUR_POINTS {
        return Err(Error::TooFewPoints { n: n_points, min: MIN_CONTOUR_POINTS });
    }
    let (points, tangents) = (0..n_points)
        .map(|k| {
            let t = TAU * k as f64 / n_points as f64;
            let (s, c) = t.sin_cos();
            (center.offset(radius * c, radius * s), Vec2::new(-TAU * radius * s, TAU * radius * c))
        })
        .unzip();
    Contour::with_tangents(points, tangents)
}

/// Where velocities come from.
#[derive(Debug, Clone, Copy)]
pub enum FlowSource<'a> {
    State(&'a StateSpec),
    Potential { spec: &'a ComplexPotentialSpec, core_radius: f64 },
}

impl<'a> FlowSource<'a> {
    pub fn potential(spec: &'a ComplexPotentialSpec) -> Self {
        FlowSource::Potential { spec, core_radius: DEFAULT_POTENTIAL_CORE_RADIUS }
    }

    pub fn velocity(&self, p: Point2D, th: NodeThreshold) -> Result<FieldSample<Vec2>> {
        match self {
            FlowSource::State(s) => kinematics::velocity(s, p, th),
            FlowSource::Potential { spec, core_radius } => spec.velocity(p, *core_radius),
        }
    }

    /// `m_l ħ/m`, or zero for flows without a vortex.
    pub fn circulation_quantum(&self) -> f64 {
        match self {
            FlowSource::State(s) => s.circulation_quantum(),
            FlowSource::Potential { spec, .. } => spec.circulation_quantum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CirculationResult {
    pub gamma: f64,
    /// Winding number of the contour about the origin.
    pub winding: i64,
    /// `m_l ħ/m` of the flow.
    pub quantum: f64,
    /// `|Γ - 2π · winding · quantum|`.
    pub quantum_residual: f64,
}

/// Sum that does not depend on term order and satisfies `f(-x) = -f(x)`
/// exactly, so a reversed contour gives exactly `-Γ`.
fn sign_symmetric_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let pos: f64 = terms.iter().filter(|t| **t > 0.0).sum();
    let neg: f64 = terms.iter().filter(|t| **t < 0.0).sum();
    pos + neg
}

/// `∮ v·dl` along `contour`.
pub fn circulation(source: FlowSource<'_>, contour: &Contour, th: NodeThreshold) -> Result<CirculationResult> {
    let velocities = contour
        .points
        .iter()
        .map(|&p| source.velocity(p, th)?.value().ok_or(Error::SingularPoint { point: p }))
        .collect::<Result<Vec<_>>>()?;

    let n = contour.points.len();
    let terms: Vec<f64> = match &contour.tangents {
        Some(t) => velocities.iter().zip(t).map(|(v, t)| v.dot(*t)).collect(),
        None => (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                (velocities[i] + velocities[j]).dot(contour.points[j] - contour.points[i]) * 0.5
            })
            .collect(),
    };
    let gamma = match contour.tangents {
        Some(_) => sign_symmetric_sum(terms) / n as f64,
        None => sign_symmetric_sum(terms),
    };

    let winding = contour.winding_number(Point2D::ORIGIN);
    let quantum = source.circulation_quantum();
    Ok(CirculationResult { gamma, winding, quantum, quantum_residual: (gamma - TAU * winding as f64 * quantum).abs() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesReport {
    pub radii: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Max pairwise `|Γ(r_i) - Γ(r_j)|`.
    pub spread: f64,
}

/// Circulation on origin-centred circles of several radii.
///
/// The vorticity vanishes between any two of the circles, so the
/// circulations must agree.
pub fn stokes_check(source: FlowSource<'_>, radii: &[f64], th: NodeThreshold) -> Result<StokesReport> {
    if radii.len() < 2 {
        return Err(Error::InvalidSpec("stokes check needs at least two radii".into()));
    }
    let gammas = radii
        .iter()
        .map(|&r| Ok(circulation(source, &make_circle(Point2D::ORIGIN, r, STOKES_POINTS)?, th)?.gamma))
        .collect::<Result<Vec<_>>>()?;
    let hi = gammas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = gammas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(StokesReport { radii: radii.to_vec(), gammas, spread: hi - lo })
}
