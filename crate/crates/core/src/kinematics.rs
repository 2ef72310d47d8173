//! Density, probability current and the quotient "velocity" `v = j/ρ`, with
//! finite-difference vorticity, divergence and continuity checks.
//!
//! The velocity is flagged singular wherever the density falls below a node
//! threshold; nothing is clamped or extrapolated at nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Vec2};
use crate::numerics::{curl_fd, divergence_fd, FieldSample, Grid2D};
use crate::states::StateSpec;

/// Default threshold relative to the peak density of a sampled grid.
pub const DEFAULT_RELATIVE_NODE_THRESHOLD: f64 = 1e-12;

/// Density below which the velocity quotient is treated as singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeThreshold {
    pub epsilon_rho: f64,
}

impl NodeThreshold {
    pub fn new(epsilon_rho: f64) -> Result<Self> {
        if !(epsilon_rho > 0.0 && epsilon_rho.is_finite()) {
            return Err(Error::NonPositive { name: "epsilon_rho", value: epsilon_rho });
        }
        Ok(Self { epsilon_rho })
    }

    /// `relative × peak density` over the nodes of `grid`.
    pub fn relative_to_peak(state: &StateSpec, grid: &Grid2D, relative: f64) -> Result<Self> {
        let peak = grid.points().iter().filter_map(|gp| density(state, gp.point).ok()).fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::InvalidSpec("density vanishes on every grid point".into()));
        }
        Self::new(relative * peak)
    }
}

/// `ρ = |ψ|²`.
pub fn density(state: &StateSpec, p: Point2D) -> Result<f64> {
    Ok(state.amplitude(p)?.norm_sqr())
}

/// `j = Re[ψ* (-iħ∇) ψ] / m = (ħ/m) Im(ψ* ∇ψ)`.
pub fn current(state: &StateSpec, p: Point2D) -> Result<Vec2> {
    let psi = state.amplitude(p)?;
    let (gx, gy) = state.grad_amplitude(p)?;
    let k = state.constants().hbar_over_mass();
    Ok(Vec2::new(k * (psi.conj() * gx).im, k * (psi.conj() * gy).im))
}

/// `v = j / ρ`, or [`FieldSample::Singular`] where `ρ < epsilon_rho`.
pub fn velocity(state: &StateSpec, p: Point2D, th: NodeThreshold) -> Result<FieldSample<Vec2>> {
    let rho = density(state, p)?;
    if rho < th.epsilon_rho {
        return Ok(FieldSample::Singular);
    }
    Ok(FieldSample::Regular(current(state, p)? * rho.recip()))
}

/// Central-difference vorticity `∂v_y/∂x - ∂v_x/∂y`.
///
/// Vortex cores are never resolved pointwise here; their strength shows up
/// only through circulation.
pub fn vorticity_fd(state: &StateSpec, p: Point2D, h: f64, th: NodeThreshold) -> Result<FieldSample<f64>> {
    curl_fd(|q| velocity(state, q, th), p, h)
}

/// Central-difference divergence of the velocity.
pub fn divergence_fd_velocity(state: &StateSpec, p: Point2D, h: f64, th: NodeThreshold) -> Result<FieldSample<f64>> {
    divergence_fd(|q| velocity(state, q, th), p, h)
}

/// Residual of the reduced continuity equation `∇·j = 0`.
///
/// Every catalog state is stationary, so `∂ρ/∂t` is identically zero and
/// only the spatial term is evaluated.
pub fn continuity_residual(state: &StateSpec, p: Point2D, h: f64) -> Result<f64> {
    let field = |q| current(state, q).map(FieldSample::Regular);
    Ok(divergence_fd(field, p, h)?.value().expect("current is never singular"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{CentralFieldSpec, PhysicalConstants};

    const NAT: PhysicalConstants = PhysicalConstants::NATURAL;

    fn th() -> NodeThreshold {
        NodeThreshold::new(1e-14).unwrap()
    }

    fn central(l: u32, ml: i32) -> StateSpec {
        StateSpec::central(CentralFieldSpec::new(l, ml).unwrap(), NAT).unwrap()
    }

    #[test]
    fn plane_wave_density_and_current() {
        let s = StateSpec::plane_wave(1.0, 2.0, 1.0, NAT).unwrap();
        let p = Point2D::new(0.4, -1.7);
        assert!((density(&s, p).unwrap() - 1.0).abs() < 1e-15);
        let j = current(&s, p).unwrap();
        assert!((j.x - 1.0).abs() < 1e-15 && (j.y - 2.0).abs() < 1e-15);
        let v = velocity(&s, p, th()).unwrap().value().unwrap();
        assert!((v.x - 1.0).abs() < 1e-15 && (v.y - 2.0).abs() < 1e-15);
    }

    #[test]
    fn oscillator_density_node_and_gaussian() {
        let s = StateSpec::oscillator(1, 0, 1.0, NAT).unwrap();
        assert_eq!(density(&s, Point2D::new(0.0, 0.4)).unwrap(), 0.0);
        assert!(velocity(&s, Point2D::new(0.0, 0.4), th()).unwrap().is_singular());

        let g = StateSpec::oscillator(0, 0, 1.0, NAT).unwrap();
        let expected = (-0.25f64).exp() / std::f64::consts::PI;
        assert!((density(&g, Point2D::new(0.5, 0.0)).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn oscillator_current_vanishes() {
        let s = StateSpec::oscillator(2, 3, 1.5, NAT).unwrap();
        let p = Point2D::new(0.31, -0.77);
        assert_eq!(current(&s, p).unwrap().max_abs(), 0.0);
        assert_eq!(velocity(&s, p, th()).unwrap().value().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn central_current_is_azimuthal() {
        let s = central(1, 1);
        let p = Point2D::new(2.0, 0.0);
        let j = current(&s, p).unwrap();
        let rho = density(&s, p).unwrap();
        assert!(j.x.abs() < 1e-16);
        assert!((j.y - rho * 0.5).abs() < 1e-15);
    }

    #[test]
    fn central_velocity_magnitude() {
        let s = central(3, 3);
        let p = Point2D::from_polar(1.5, 0.7);
        let v = velocity(&s, p, th()).unwrap().value().unwrap();
        assert!((v.azimuthal(p) - 2.0).abs() < 1e-14);
        assert!(v.radial(p).abs() < 1e-14);
    }

    #[test]
    fn vorticity_and_divergence_examples() {
        let pw = StateSpec::plane_wave(1.0, 2.0, 1.0, NAT).unwrap();
        let p = Point2D::new(0.3, 0.9);
        assert!(vorticity_fd(&pw, p, 1e-4, th()).unwrap().value().unwrap().abs() < 1e-8);
        assert!(divergence_fd_velocity(&pw, p, 1e-4, th()).unwrap().value().unwrap().abs() < 1e-8);

        let c1 = central(1, 1);
        let w = vorticity_fd(&c1, Point2D::new(1.0, 0.0), 1e-4, th()).unwrap().value().unwrap();
        assert!(w.abs() < 1e-6);
        let c2 = central(2, 2);
        let d = divergence_fd_velocity(&c2, Point2D::from_polar(1.3, 0.4), 1e-4, th()).unwrap().value().unwrap();
        assert!(d.abs() < 1e-6);

        let osc = StateSpec::oscillator(1, 1, 1.0, NAT).unwrap();
        let d = divergence_fd_velocity(&osc, Point2D::new(0.5, 0.6), 1e-4, th()).unwrap().value().unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn stencil_on_node_is_an_error() {
        let osc = StateSpec::oscillator(1, 0, 1.0, NAT).unwrap();
        let h = 1e-3;
        let err = vorticity_fd(&osc, Point2D::new(h, 0.2), h, th()).unwrap_err();
        assert_eq!(err, Error::StencilHitsNode { point: Point2D::new(0.0, 0.2) });
    }

    #[test]
    fn continuity_examples() {
        let pw = StateSpec::plane_wave(1.0, 2.0, 1.0, NAT).unwrap();
        assert!(continuity_residual(&pw, Point2D::new(0.2, 0.1), 1e-4).unwrap().abs() < 1e-10);
        let osc = StateSpec::oscillator(2, 1, 1.0, NAT).unwrap();
        assert!(continuity_residual(&osc, Point2D::new(0.37, -0.61), 1e-4).unwrap().abs() < 1e-8);
        let c = central(1, 1);
        assert!(continuity_residual(&c, Point2D::from_polar(0.8, 2.0), 1e-4).unwrap().abs() < 1e-6);
    }

    #[test]
    fn threshold_validation() {
        assert!(NodeThreshold::new(0.0).is_err());
        let s = StateSpec::oscillator(0, 0, 1.0, NAT).unwrap();
        let g = Grid2D::cartesian(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let t = NodeThreshold::relative_to_peak(&s, &g, 1e-12).unwrap();
        assert!((t.epsilon_rho - 1e-12 / std::f64::consts::PI).abs() < 1e-27);
    }
}
