use thiserror::Error;

use crate::geometry::Point2D;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree {n} exceeds the configured maximum {max}")]
    DegreeOutOfRange { n: u32, max: u32 },

    #[error("argument {x} is outside the domain [-1, 1]")]
    ArgumentOutOfDomain { x: f64 },

    #[error("order |m| = {m} exceeds degree l = {l}")]
    OrderExceedsDegree { m: u32, l: u32 },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("radius {r} lies outside the radial table range [{min}, {max}]")]
    OutOfTableRange { r: f64, min: f64, max: f64 },

    #[error("finite-difference stencil point ({}, {}) is singular", .point.x, .point.y)]
    StencilHitsNode { point: Point2D },

    #[error("velocity is singular at ({}, {})", .point.x, .point.y)]
    SingularPoint { point: Point2D },

    #[error("the vortex potential cannot be evaluated at the origin")]
    OriginEvaluation,

    #[error("finite-difference stencil around ({}, {}) crosses the branch cut", .point.x, .point.y)]
    StencilCrossesCut { point: Point2D },

    #[error("contour needs at least {min} points, got {n}")]
    TooFewPoints { n: usize, min: usize },

    #[error("invalid step sequence: {0}")]
    InvalidSteps(String),
}
