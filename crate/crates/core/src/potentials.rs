//! Velocity potential Φ, stream function Ψ and the complex potential
//! `W(z) = Φ + iΨ` of planar irrotational flows, with `dW/dz = v_x - i v_y`.
//!
//! Φ is only defined up to an additive constant, and for the vortex it is
//! multivalued; a [`BranchCut`] fixes the sheet.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Vec2};
use crate::kinematics::{self, NodeThreshold};
use crate::numerics::FieldSample;
use crate::states::{PhysicalConstants, StateKind, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `W = (p_x - i p_y) z / m`
    Uniform { px: f64, py: f64 },
    /// `W = 0`
    AtRest,
    /// `W = -i (m_l ħ/m) log z`
    Vortex { ml: i32 },
    /// `W = A z^n`, flow turning through π/n.
    Corner { a: Complex64, n: u32 },
}

#[derive(Serialize, Deserialize)]
struct PotentialDoc {
    #[serde(flatten)]
    kind: PotentialKind,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    mass: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialDoc", into = "PotentialDoc")]
pub struct ComplexPotentialSpec {
    kind: PotentialKind,
    constants: PhysicalConstants,
}

/// Ray along which the vortex potential jumps. Azimuths are taken in
/// `(cut_angle - 2π, cut_angle]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCut {
    cut_angle: f64,
}

impl BranchCut {
    /// Cut along the negative real axis.
    pub const PRINCIPAL: BranchCut = BranchCut { cut_angle: PI };

    pub fn new(cut_angle: f64) -> Result<Self> {
        if !(cut_angle > -PI && cut_angle <= PI) {
            return Err(Error::InvalidSpec(format!("cut angle {cut_angle} must lie in (-π, π]")));
        }
        Ok(Self { cut_angle })
    }

    pub fn angle(&self) -> f64 {
        self.cut_angle
    }

    /// Azimuth of `p` on this branch.
    pub fn arg(&self, p: Point2D) -> f64 {
        let mut phi = p.azimuth();
        if phi > self.cut_angle {
            phi -= TAU;
        } else if phi <= self.cut_angle - TAU {
            phi += TAU;
        }
        phi
    }
}

impl Default for BranchCut {
    fn default() -> Self {
        Self::PRINCIPAL
    }
}

impl ComplexPotentialSpec {
    pub fn new(kind: PotentialKind, constants: PhysicalConstants) -> Result<Self> {
        let spec = Self { kind, constants };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        PhysicalConstants::new(self.constants.hbar, self.constants.mass)?;
        match self.kind {
            PotentialKind::Uniform { px, py } if !(px.is_finite() && py.is_finite()) => {
                Err(Error::InvalidSpec("uniform-flow momenta must be finite".into()))
            }
            PotentialKind::Corner { n: 0, .. } => Err(Error::InvalidSpec("corner exponent must be at least 1".into())),
            PotentialKind::Corner { a, .. } if !a.is_finite() => {
                Err(Error::InvalidSpec("corner amplitude must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn uniform(px: f64, py: f64, constants: PhysicalConstants) -> Result<Self> {
        Self::new(PotentialKind::Uniform { px, py }, constants)
    }

    pub fn at_rest(constants: PhysicalConstants) -> Self {
        Self { kind: PotentialKind::AtRest, constants }
    }

    pub fn vortex(ml: i32, constants: PhysicalConstants) -> Result<Self> {
        Self::new(PotentialKind::Vortex { ml }, constants)
    }

    pub fn corner(a: Complex64, n: u32, constants: PhysicalConstants) -> Result<Self> {
        Self::new(PotentialKind::Corner { a, n }, constants)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// `m_l ħ/m` for the vortex, zero for every single-valued potential.
    pub fn circulation_quantum(&self) -> f64 {
        match self.kind {
            PotentialKind::Vortex { ml } => f64::from(ml) * self.constants.hbar_over_mass(),
            _ => 0.0,
        }
    }

    /// `W(z)`. The vortex is evaluated on the sheet selected by `cut`.
    pub fn eval_w(&self, z: Complex64, cut: BranchCut) -> Result<Complex64> {
        let m = self.constants.mass;
        match self.kind {
            PotentialKind::Uniform { px, py } => Ok(Complex64::new(px, -py) * z / m),
            PotentialKind::AtRest => Ok(Complex64::new(0.0, 0.0)),
            PotentialKind::Vortex { .. } => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::OriginEvaluation);
                }
                let k = self.circulation_quantum();
                let phi = cut.arg(Point2D::new(z.re, z.im));
                // -i k (ln|z| + iφ)
                Ok(Complex64::new(k * phi, -k * z.norm().ln()))
            }
            PotentialKind::Corner { a, n } => Ok(a * z.powu(n)),
        }
    }

    /// `(Φ, Ψ) = (Re W, Im W)`.
    pub fn eval_phi_psi(&self, p: Point2D, cut: BranchCut) -> Result<(f64, f64)> {
        let w = self.eval_w(p.to_complex(), cut)?;
        Ok((w.re, w.im))
    }

    /// Closed-form `dW/dz`.
    pub fn complex_velocity(&self, z: Complex64) -> Result<Complex64> {
        match self.kind {
            PotentialKind::Uniform { px, py } => Ok(Complex64::new(px, -py) / self.constants.mass),
            PotentialKind::AtRest => Ok(Complex64::new(0.0, 0.0)),
            PotentialKind::Vortex { .. } => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::OriginEvaluation);
                }
                Ok(Complex64::new(0.0, -self.circulation_quantum()) / z)
            }
            PotentialKind::Corner { a, n } => Ok(a * f64::from(n) * z.powu(n - 1)),
        }
    }

    /// `(v_x, v_y) = (Re dW/dz, -Im dW/dz)`; singular within `core_radius`
    /// of a vortex core.
    pub fn velocity(&self, p: Point2D, core_radius: f64) -> Result<FieldSample<Vec2>> {
        if matches!(self.kind, PotentialKind::Vortex { .. }) && p.radius() <= core_radius {
            return Ok(FieldSample::Singular);
        }
        let dw = self.complex_velocity(p.to_complex())?;
        Ok(FieldSample::Regular(Vec2::new(dw.re, -dw.im)))
    }

    /// Central-difference Cauchy–Riemann residuals
    /// `(∂Φ/∂x - ∂Ψ/∂y, ∂Φ/∂y + ∂Ψ/∂x)`.
    pub fn cauchy_riemann_residual(&self, p: Point2D, h: f64, cut: BranchCut) -> Result<(f64, f64)> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::NonPositive { name: "h", value: h });
        }
        let stencil = [p.offset(h, 0.0), p.offset(-h, 0.0), p.offset(0.0, h), p.offset(0.0, -h)];
        if matches!(self.kind, PotentialKind::Vortex { .. }) {
            if p.radius() <= h {
                return Err(Error::OriginEvaluation);
            }
            let args = stencil.map(|q| cut.arg(q));
            let lo = args.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = args.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > PI {
                return Err(Error::StencilCrossesCut { point: p });
            }
        }
        let [xp, xm, yp, ym] = stencil;
        let (phi_xp, psi_xp) = self.eval_phi_psi(xp, cut)?;
        let (phi_xm, psi_xm) = self.eval_phi_psi(xm, cut)?;
        let (phi_yp, psi_yp) = self.eval_phi_psi(yp, cut)?;
        let (phi_ym, psi_ym) = self.eval_phi_psi(ym, cut)?;
        let d = 2.0 * h;
        let first = (phi_xp - phi_xm) / d - (psi_yp - psi_ym) / d;
        let second = (phi_yp - phi_ym) / d + (psi_xp - psi_xm) / d;
        Ok((first, second))
    }
}

impl TryFrom<PotentialDoc> for ComplexPotentialSpec {
    type Error = Error;

    fn try_from(doc: PotentialDoc) -> Result<Self> {
        ComplexPotentialSpec::new(doc.kind, PhysicalConstants { hbar: doc.hbar, mass: doc.mass })
    }
}

impl From<ComplexPotentialSpec> for PotentialDoc {
    fn from(p: ComplexPotentialSpec) -> Self {
        PotentialDoc { kind: p.kind, hbar: p.constants.hbar, mass: p.constants.mass }
    }
}

/// Complex potential of a catalog state: plane wave → uniform flow,
/// oscillator → fluid at rest, central field → vortex filament.
pub fn potential_of_state(state: &StateSpec) -> ComplexPotentialSpec {
    let kind = match state.kind() {
        StateKind::PlaneWave(pw) => PotentialKind::Uniform { px: pw.px, py: pw.py },
        StateKind::Oscillator(_) => PotentialKind::AtRest,
        StateKind::Central(c) => PotentialKind::Vortex { ml: c.ml },
    };
    ComplexPotentialSpec { kind, constants: state.constants() }
}

/// Max-norm gap between the quotient velocity of `state` and the velocity
/// read off `dW/dz` of its complex potential.
pub fn consistency_state_vs_potential(state: &StateSpec, p: Point2D, th: NodeThreshold) -> Result<f64> {
    let from_state = kinematics::velocity(state, p, th)?.value().ok_or(Error::SingularPoint { point: p })?;
    let dw = potential_of_state(state).complex_velocity(p.to_complex())?;
    Ok((from_state - Vec2::new(dw.re, -dw.im)).max_abs())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;
    use crate::states::CentralFieldSpec;

    const NAT: PhysicalConstants = PhysicalConstants::NATURAL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn state_correspondence() {
        let pw = StateSpec::plane_wave(1.0, 2.0, 1.0, NAT).unwrap();
        assert_eq!(potential_of_state(&pw).kind(), PotentialKind::Uniform { px: 1.0, py: 2.0 });
        let osc = StateSpec::oscillator(3, 1, 1.0, NAT).unwrap();
        assert_eq!(potential_of_state(&osc).kind(), PotentialKind::AtRest);
        let cen = StateSpec::central(CentralFieldSpec::new(2, -2).unwrap(), NAT).unwrap();
        assert_eq!(potential_of_state(&cen).kind(), PotentialKind::Vortex { ml: -2 });
    }

    #[test]
    fn w_values() {
        let cut = BranchCut::PRINCIPAL;
        let u = ComplexPotentialSpec::uniform(1.0, 2.0, NAT).unwrap();
        assert_eq!(u.eval_w(c(1.0, 1.0), cut).unwrap(), c(3.0, -1.0));

        let v = ComplexPotentialSpec::vortex(1, NAT).unwrap();
        let w = v.eval_w(Complex64::from_polar(1.0, FRAC_PI_4), cut).unwrap();
        assert!((w.re - FRAC_PI_4).abs() < 1e-15 && w.im.abs() < 1e-15);
        assert_eq!(v.eval_w(c(0.0, 0.0), cut), Err(Error::OriginEvaluation));

        let k = ComplexPotentialSpec::corner(c(1.0, 0.0), 2, NAT).unwrap();
        assert_eq!(k.eval_w(c(1.0, 1.0), cut).unwrap(), c(0.0, 2.0));
    }

    #[test]
    fn phi_psi_values() {
        let cut = BranchCut::PRINCIPAL;
        let u = ComplexPotentialSpec::uniform(1.0, 2.0, NAT).unwrap();
        assert_eq!(u.eval_phi_psi(Point2D::new(3.0, 1.0), cut).unwrap(), (5.0, -5.0));

        let v = ComplexPotentialSpec::vortex(3, NAT).unwrap();
        let (phi, psi) = v.eval_phi_psi(Point2D::new(0.0, 1.0), cut).unwrap();
        assert!((phi - 1.5 * PI).abs() < 1e-14 && psi.abs() < 1e-15);

        let r = ComplexPotentialSpec::at_rest(NAT);
        assert_eq!(r.eval_phi_psi(Point2D::new(-4.0, 2.5), cut).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn complex_velocity_values() {
        let u = ComplexPotentialSpec::uniform(1.0, 2.0, NAT).unwrap();
        assert_eq!(u.complex_velocity(c(7.0, -3.0)).unwrap(), c(1.0, -2.0));
        let v = ComplexPotentialSpec::vortex(1, NAT).unwrap();
        let dw = v.complex_velocity(c(2.0, 0.0)).unwrap();
        assert!(dw.re.abs() < 1e-16 && (dw.im + 0.5).abs() < 1e-16);
        let k = ComplexPotentialSpec::corner(c(1.0, 0.0), 2, NAT).unwrap();
        assert_eq!(k.complex_velocity(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(v.velocity(Point2D::new(1e-9, 0.0), 1e-8).unwrap().is_singular());
    }

    #[test]
    fn branch_selection() {
        let down = BranchCut::new(-FRAC_PI_4).unwrap();
        let p = Point2D::from_polar(1.0, 0.0);
        assert_eq!(down.arg(p), -TAU);
        let q = Point2D::from_polar(1.0, -PI / 2.0);
        assert!((down.arg(q) + PI / 2.0).abs() < 1e-15);
        assert!(BranchCut::new(-PI).is_err());
        assert!(BranchCut::new(4.0).is_err());
    }

    #[test]
    fn cauchy_riemann_examples() {
        let cut = BranchCut::PRINCIPAL;
        let u = ComplexPotentialSpec::uniform(1.0, 2.0, NAT).unwrap();
        let (a, b) = u.cauchy_riemann_residual(Point2D::new(0.4, -2.0), 1e-4, cut).unwrap();
        assert!(a.abs() < 1e-9 && b.abs() < 1e-9);

        let v = ComplexPotentialSpec::vortex(2, NAT).unwrap();
        let (a, b) = v.cauchy_riemann_residual(Point2D::from_polar(1.5, PI / 3.0), 1e-4, cut).unwrap();
        assert!(a.abs() < 1e-6 && b.abs() < 1e-6);

        let k = ComplexPotentialSpec::corner(c(1.0, 0.0), 3, NAT).unwrap();
        let (a, b) = k.cauchy_riemann_residual(Point2D::new(1.0, 0.5), 1e-4, cut).unwrap();
        assert!(a.abs() < 1e-6 && b.abs() < 1e-6);
    }

    #[test]
    fn stencil_across_cut_is_rejected() {
        let v = ComplexPotentialSpec::vortex(1, NAT).unwrap();
        let p = Point2D::new(-1.0, 1e-6);
        assert_eq!(
            v.cauchy_riemann_residual(p, 1e-4, BranchCut::PRINCIPAL),
            Err(Error::StencilCrossesCut { point: p })
        );
        // the same point is fine once the cut is rotated away
        assert!(v.cauchy_riemann_residual(p, 1e-4, BranchCut::new(0.0).unwrap()).is_ok());
    }

    #[test]
    fn consistency_examples() {
        let th = NodeThreshold::new(1e-14).unwrap();
        let pw = StateSpec::plane_wave(1.0, 2.0, 1.0, NAT).unwrap();
        assert!(consistency_state_vs_potential(&pw, Point2D::new(0.3, 0.2), th).unwrap() < 1e-10);
        let osc = StateSpec::oscillator(1, 1, 1.0, NAT).unwrap();
        assert!(consistency_state_vs_potential(&osc, Point2D::new(0.3, 0.2), th).unwrap() < 1e-10);
        let cen = StateSpec::central(CentralFieldSpec::new(2, 2).unwrap(), NAT).unwrap();
        let p = Point2D::from_polar(1.2, 1.0);
        assert!(consistency_state_vs_potential(&cen, p, th).unwrap() < 1e-8);
    }

    #[test]
    fn json_forms() {
        let k = ComplexPotentialSpec::from_json(r#"{"variant":"corner","params":{"a":[2.0,0.5],"n":2}}"#).unwrap();
        assert_eq!(k.kind(), PotentialKind::Corner { a: c(2.0, 0.5), n: 2 });
        let r = ComplexPotentialSpec::from_json(r#"{"variant":"at_rest"}"#).unwrap();
        assert_eq!(r.kind(), PotentialKind::AtRest);
        let v =
            ComplexPotentialSpec::from_json(r#"{"variant":"vortex","params":{"ml":-1},"hbar":2,"mass":3}"#).unwrap();
        assert!((v.circulation_quantum() + 2.0 / 3.0).abs() < 1e-15);
        assert!(ComplexPotentialSpec::from_json(r#"{"variant":"corner","params":{"a":[1,0],"n":0}}"#).is_err());
    }
}
