//! Hydrodynamic description of closed-form quantum states.
//!
//! For a wavefunction `ψ` the crate computes the density `ρ = |ψ|²`, the
//! probability current `j`, and the quotient velocity `v = j/ρ`; from those,
//! finite-difference vorticity and divergence, the velocity potential Φ,
//! stream function Ψ and complex potential `W = Φ + iΨ`, and the
//! circulation around closed contours.
//!
//! ```
//! use quantum_flow::prelude::*;
//!
//! let state = StateSpec::central(CentralFieldSpec::new(2, 2)?, PhysicalConstants::NATURAL)?;
//! let th = NodeThreshold::new(1e-14)?;
//! let circle = make_circle(Point2D::ORIGIN, 1.0, 256)?;
//! let gamma = circulation(FlowSource::State(&state), &circle, th)?.gamma;
//! assert!((gamma - 4.0 * std::f64::consts::PI).abs() < 1e-8);
//! # Ok::<(), quantum_flow::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circulation;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod numerics;
pub mod potentials;
pub mod special_functions;
pub mod states;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::circulation::{circulation, make_circle, stokes_check, Contour, FlowSource};
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{Point2D, Vec2};
    pub use crate::kinematics::{
        continuity_residual, current, density, divergence_fd_velocity, velocity, vorticity_fd, NodeThreshold,
    };
    pub use crate::numerics::{FieldSample, Grid2D, Tolerances};
    pub use crate::potentials::{potential_of_state, BranchCut, ComplexPotentialSpec, PotentialKind};
    pub use crate::states::{CentralFieldSpec, PhysicalConstants, RadialChoice, StateSpec};
}
