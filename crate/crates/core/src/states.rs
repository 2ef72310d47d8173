//! Catalog of closed-form stationary states: the plane wave, the 2D harmonic
//! oscillator eigenstate, and a central-field bound state restricted to a
//! plane of fixed polar angle.
//!
//! Every state exposes its amplitude and an analytic gradient. Time
//! dependence is dropped: all catalog states are stationary, so density and
//! velocity carry no explicit `t`.
//!
//! JSON form:
//!
//! ```json
//! {"variant": "plane_wave", "params": {"px": 1, "py": 2, "amplitude_sq": 1}, "hbar": 1, "mass": 1}
//! {"variant": "oscillator", "params": {"nx": 2, "ny": 1, "omega": 1}, "hbar": 1, "mass": 1}
//! {"variant": "central", "params": {"l": 1, "ml": 1, "radial": {"kind": "gaussian", "width": 1}}}
//! ```
//!
//! `hbar` and `mass` default to 1. Central states take an optional `theta`
//! (polar angle of the slice, default π/2).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::numerics::{Axis, CubicSpline, Exclusion, Grid2D};
use crate::special_functions::{
    assoc_legendre, hermite, hermite_derivative, hermite_zeros, oscillator_norm, spherical_harmonic_norm, PolyDegree,
};

/// ħ and the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalConstants {
    /// ħ = m = 1.
    pub const NATURAL: PhysicalConstants = PhysicalConstants { hbar: 1.0, mass: 1.0 };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let c = Self { hbar, mass };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::NonPositive { name: "hbar", value: self.hbar });
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::NonPositive { name: "mass", value: self.mass });
        }
        Ok(())
    }

    /// ħ/m, the unit every velocity in this crate scales with.
    pub fn hbar_over_mass(&self) -> f64 {
        self.hbar / self.mass
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::NATURAL
    }
}

/// `ψ = a·exp(i(p_x x + p_y y)/ħ)` with `|a|² = amplitude_sq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSpec {
    pub px: f64,
    pub py: f64,
    pub amplitude_sq: f64,
}

/// 2D oscillator eigenstate `N_nx N_ny e^{-α²(x²+y²)/2} H_nx(αx) H_ny(αy)`,
/// `α = sqrt(mω/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub nx: PolyDegree,
    pub ny: PolyDegree,
    pub omega: f64,
}

/// Real radial profile `R(r)` of a central-field bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialChoice {
    /// `R(r) = r^l exp(-r²/(2 width²))`.
    Gaussian { width: f64 },
    /// Natural cubic spline through `(radii, values)`.
    Table { radii: Vec<f64>, values: Vec<f64> },
}

impl Default for RadialChoice {
    fn default() -> Self {
        RadialChoice::Gaussian { width: 1.0 }
    }
}

/// `u = R(r) C_{l m} P_l^{|m|}(cos θ) e^{i m φ}` on the plane of fixed polar
/// angle `theta`, with planar radius `ρ = r sin θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralFieldSpec {
    pub l: PolyDegree,
    pub ml: i32,
    #[serde(default = "equatorial")]
    pub theta: f64,
    #[serde(default)]
    pub radial: RadialChoice,
}

fn equatorial() -> f64 {
    FRAC_PI_2
}

impl CentralFieldSpec {
    /// Equatorial slice with the default Gaussian profile.
    pub fn new(l: u32, ml: i32) -> Result<Self> {
        Ok(Self { l: PolyDegree::new(l)?, ml, theta: FRAC_PI_2, radial: RadialChoice::default() })
    }

    pub fn with_radial(mut self, radial: RadialChoice) -> Self {
        self.radial = radial;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum StateKind {
    PlaneWave(PlaneWaveSpec),
    Oscillator(OscillatorSpec),
    Central(CentralFieldSpec),
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    #[serde(flatten)]
    kind: StateKind,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    mass: f64,
}

fn one() -> f64 {
    1.0
}

/// A validated catalog state together with its physical constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateDoc", into = "StateDoc")]
pub struct StateSpec {
    kind: StateKind,
    constants: PhysicalConstants,
    eval: Evaluator,
}

/// Precomputed pieces of the amplitude.
#[derive(Debug, Clone, PartialEq)]
enum Evaluator {
    PlaneWave {
        a: f64,
        kx: f64,
        ky: f64,
    },
    Oscillator {
        nx: PolyDegree,
        ny: PolyDegree,
        alpha: f64,
        norm: f64,
    },
    Central {
        ml: i32,
        /// `C_{l m} P_l^{|m|}(cos θ)`
        slice: f64,
        sin_theta: f64,
        radial: RadialEval,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum RadialEval {
    Gaussian { l: i32, inv_w2: f64 },
    Table(CubicSpline),
}

impl RadialEval {
    /// `(R(r), R'(r))`.
    fn eval(&self, r: f64) -> Result<(f64, f64)> {
        match self {
            RadialEval::Gaussian { l, inv_w2 } => {
                let g = (-0.5 * r * r * inv_w2).exp();
                let rl = r.powi(*l);
                let dr = if *l == 0 { 0.0 } else { f64::from(*l) * r.powi(l - 1) };
                Ok((rl * g, (dr - rl * r * inv_w2) * g))
            }
            RadialEval::Table(s) => s.eval(r),
        }
    }
}

impl StateSpec {
    pub fn new(kind: StateKind, constants: PhysicalConstants) -> Result<Self> {
        constants.validate()?;
        let eval = Evaluator::build(&kind, &constants)?;
        Ok(Self { kind, constants, eval })
    }

    pub fn plane_wave(px: f64, py: f64, amplitude_sq: f64, constants: PhysicalConstants) -> Result<Self> {
        Self::new(StateKind::PlaneWave(PlaneWaveSpec { px, py, amplitude_sq }), constants)
    }

    pub fn oscillator(nx: u32, ny: u32, omega: f64, constants: PhysicalConstants) -> Result<Self> {
        let spec = OscillatorSpec { nx: PolyDegree::new(nx)?, ny: PolyDegree::new(ny)?, omega };
        Self::new(StateKind::Oscillator(spec), constants)
    }

    pub fn central(spec: CentralFieldSpec, constants: PhysicalConstants) -> Result<Self> {
        Self::new(StateKind::Central(spec), constants)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// Whether `ψ(x, y) = X(x)·Y(y)` in Cartesian coordinates.
    pub fn is_cartesian_separable(&self) -> bool {
        !matches!(self.kind, StateKind::Central(_))
    }

    /// Circulation quantum `m_l ħ/m` of the state's vortex; zero when there
    /// is no vortex.
    pub fn circulation_quantum(&self) -> f64 {
        match &self.kind {
            StateKind::Central(c) => f64::from(c.ml) * self.constants.hbar_over_mass(),
            _ => 0.0,
        }
    }

    /// Complex amplitude `ψ` at `p`.
    pub fn amplitude(&self, p: Point2D) -> Result<Complex64> {
        match &self.eval {
            Evaluator::PlaneWave { a, kx, ky } => Ok(Complex64::from_polar(*a, kx * p.x + ky * p.y)),
            Evaluator::Oscillator { nx, ny, alpha, norm } => {
                let (u, v) = (alpha * p.x, alpha * p.y);
                let g = (-0.5 * (u * u + v * v)).exp();
                Ok(Complex64::new(norm * g * hermite(*nx, u) * hermite(*ny, v), 0.0))
            }
            Evaluator::Central { ml, slice, sin_theta, radial } => {
                let rho = p.radius();
                let (r, _) = radial.eval(rho / sin_theta)?;
                Ok(Complex64::from_polar(1.0, f64::from(*ml) * p.azimuth()) * (slice * r))
            }
        }
    }

    /// Analytic `(∂ψ/∂x, ∂ψ/∂y)` at `p`.
    pub fn grad_amplitude(&self, p: Point2D) -> Result<(Complex64, Complex64)> {
        match &self.eval {
            Evaluator::PlaneWave { kx, ky, .. } => {
                let psi = self.amplitude(p)?;
                let i = Complex64::i();
                Ok((i * kx * psi, i * ky * psi))
            }
            Evaluator::Oscillator { nx, ny, alpha, norm } => {
                let (u, v) = (alpha * p.x, alpha * p.y);
                let g = (-0.5 * (u * u + v * v)).exp();
                let (hx, hy) = (hermite(*nx, u), hermite(*ny, v));
                // d/du [e^{-u²/2} H_n(u)] = e^{-u²/2} (2n H_{n-1}(u) - u H_n(u))
                let dx = norm * g * alpha * (hermite_derivative(*nx, u) - u * hx) * hy;
                let dy = norm * g * alpha * hx * (hermite_derivative(*ny, v) - v * hy);
                Ok((Complex64::new(dx, 0.0), Complex64::new(dy, 0.0)))
            }
            Evaluator::Central { ml, slice, sin_theta, radial } => {
                let rho = p.radius();
                let (r, dr) = radial.eval(rho / sin_theta)?;
                let (m, dm) = (slice * r, slice * dr / sin_theta);
                let mlf = f64::from(*ml);
                if rho == 0.0 {
                    // ψ ≈ M'(0)·(x ± iy) when |m_l| = 1; flat or a cusp otherwise.
                    return Ok(if ml.abs() == 1 {
                        (Complex64::new(dm, 0.0), Complex64::new(0.0, mlf * dm))
                    } else {
                        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                    });
                }
                let (c, s) = (p.x / rho, p.y / rho);
                let phase = Complex64::from_polar(1.0, mlf * p.azimuth());
                let gx = phase * Complex64::new(dm * c, -mlf * m * s / rho);
                let gy = phase * Complex64::new(dm * s, mlf * m * c / rho);
                Ok((gx, gy))
            }
        }
    }

    /// Regions to keep out of grid sweeps: strips around the oscillator's
    /// nodal lines and a disk around the vortex core.
    pub fn node_exclusions(&self, node_half_width: f64, core_radius: f64) -> Vec<Exclusion> {
        match &self.eval {
            Evaluator::PlaneWave { .. } => Vec::new(),
            Evaluator::Oscillator { nx, ny, alpha, .. } => {
                let xs = hermite_zeros(*nx).into_iter().map(|z| Exclusion::Strip {
                    axis: Axis::X,
                    at: z / alpha,
                    half_width: node_half_width,
                });
                let ys = hermite_zeros(*ny).into_iter().map(|z| Exclusion::Strip {
                    axis: Axis::Y,
                    at: z / alpha,
                    half_width: node_half_width,
                });
                xs.chain(ys).collect()
            }
            Evaluator::Central { .. } => {
                vec![Exclusion::Disk { center: Point2D::ORIGIN, radius: core_radius }]
            }
        }
    }

    /// A 32×32 grid covering the region where the state is appreciable,
    /// without exclusions.
    pub fn default_grid(&self) -> Grid2D {
        let grid = match &self.eval {
            Evaluator::PlaneWave { .. } => Grid2D::cartesian(-2.0, 2.0, -2.0, 2.0, 32, 32),
            Evaluator::Oscillator { nx, ny, alpha, .. } => {
                let n = nx.get().max(ny.get()) as f64;
                let half = ((2.0 * n + 1.0).sqrt() + 1.0) / alpha;
                Grid2D::cartesian(-half, half, -half, half, 32, 32)
            }
            Evaluator::Central { sin_theta, radial, .. } => match radial {
                RadialEval::Gaussian { inv_w2, .. } => {
                    let w = inv_w2.recip().sqrt() * sin_theta;
                    Grid2D::annulus(0.75 * w, 2.5 * w, 32, 32)
                }
                RadialEval::Table(s) => {
                    let (lo, hi) = s.range();
                    let (lo, hi) = (lo * sin_theta, hi * sin_theta);
                    let span = hi - lo;
                    Grid2D::annulus((lo + 0.25 * span).max(1e-3 * hi), hi - 0.05 * span, 32, 32)
                }
            },
        };
        grid.expect("default grid bounds are valid")
    }
}

impl Evaluator {
    fn build(kind: &StateKind, constants: &PhysicalConstants) -> Result<Self> {
        match kind {
            StateKind::PlaneWave(pw) => {
                if !(pw.amplitude_sq > 0.0 && pw.amplitude_sq.is_finite()) {
                    return Err(Error::NonPositive { name: "amplitude_sq", value: pw.amplitude_sq });
                }
                if !(pw.px.is_finite() && pw.py.is_finite()) {
                    return Err(Error::InvalidSpec("plane-wave momenta must be finite".into()));
                }
                Ok(Evaluator::PlaneWave {
                    a: pw.amplitude_sq.sqrt(),
                    kx: pw.px / constants.hbar,
                    ky: pw.py / constants.hbar,
                })
            }
            StateKind::Oscillator(osc) => {
                if !(osc.omega > 0.0 && osc.omega.is_finite()) {
                    return Err(Error::NonPositive { name: "omega", value: osc.omega });
                }
                let alpha = (constants.mass * osc.omega / constants.hbar).sqrt();
                let norm = oscillator_norm(osc.nx, alpha)? * oscillator_norm(osc.ny, alpha)?;
                Ok(Evaluator::Oscillator { nx: osc.nx, ny: osc.ny, alpha, norm })
            }
            StateKind::Central(c) => {
                let m_abs = PolyDegree::new(c.ml.unsigned_abs()).map_err(|_| {
                    Error::InvalidSpec(format!("|m_l| = {} exceeds the degree cap", c.ml.unsigned_abs()))
                })?;
                if m_abs > c.l {
                    return Err(Error::OrderExceedsDegree { m: m_abs.get(), l: c.l.get() });
                }
                if !(c.theta > 0.0 && c.theta < std::f64::consts::PI) {
                    return Err(Error::InvalidSpec(format!(
                        "slice polar angle {} must lie strictly between 0 and π",
                        c.theta
                    )));
                }
                let legendre = assoc_legendre(c.l, m_abs, c.theta.cos())?;
                let scale = (0..=200)
                    .map(|k| assoc_legendre(c.l, m_abs, -1.0 + 0.01 * k as f64).map(f64::abs))
                    .try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))?;
                // cos θ carries ~1e-16 absolute error, so a nodal cone shows up
                // as a tiny residual rather than an exact zero
                if legendre.abs() <= 1e-10 * scale {
                    return Err(Error::InvalidSpec(format!(
                        "the plane θ = {} is a nodal cone of P_{}^{}",
                        c.theta,
                        c.l.get(),
                        m_abs.get()
                    )));
                }
                let radial = match &c.radial {
                    RadialChoice::Gaussian { width } => {
                        if !(*width > 0.0 && width.is_finite()) {
                            return Err(Error::NonPositive { name: "width", value: *width });
                        }
                        RadialEval::Gaussian { l: c.l.get() as i32, inv_w2: 1.0 / (width * width) }
                    }
                    RadialChoice::Table { radii, values } => {
                        if radii.first().is_some_and(|&r| r < 0.0) {
                            return Err(Error::InvalidSpec("radial table radii must be non-negative".into()));
                        }
                        RadialEval::Table(CubicSpline::new(radii, values)?)
                    }
                };
                let slice = spherical_harmonic_norm(c.l, m_abs)? * legendre;
                Ok(Evaluator::Central { ml: c.ml, slice, sin_theta: c.theta.sin(), radial })
            }
        }
    }
}

impl TryFrom<StateDoc> for StateSpec {
    type Error = Error;

    fn try_from(doc: StateDoc) -> Result<Self> {
        StateSpec::new(doc.kind, PhysicalConstants { hbar: doc.hbar, mass: doc.mass })
    }
}

impl From<StateSpec> for StateDoc {
    fn from(s: StateSpec) -> StateDoc {
        StateDoc { kind: s.kind, hbar: s.constants.hbar, mass: s.constants.mass }
    }
}
