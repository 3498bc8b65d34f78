use std::fmt;

use thiserror::Error;

use crate::geometry::GeometryViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A boundary node of a sampled inflow grid whose velocity does not vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryNodeViolation {
    pub i: usize,
    pub j: usize,
    pub y: f64,
    pub z: f64,
    pub magnitude: f64,
}

impl fmt::Display for BoundaryNodeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node ({}, {}) at (y={}, z={}) has |h| = {:e}",
            self.i, self.j, self.y, self.z, self.magnitude
        )
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {}", join(.0))]
    Geometry(Vec<GeometryViolation>),

    #[error("exponent p = {0} outside the admissible range (2, 6]")]
    ExponentOutOfRange(f64),

    #[error("V-space denominator violated: pi^2 - 2 m^2 / L^2 = {0} is not positive")]
    VSpaceDenominator(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("inflow datum does not vanish on the inlet boundary: {}", join(.0))]
    IncompatibleInflow(Vec<BoundaryNodeViolation>),

    #[error("invalid sampled grid: {0}")]
    Grid(String),

    #[error("Simpson quadrature needs an odd node count of at least 3, got {0}")]
    EvenNodeCount(usize),

    #[error("sharp bound inapplicable: denominator {0} is not positive (Phi is beyond the contraction range)")]
    SharpBoundInapplicable(f64),

    #[error("psi requires cubic bounding box (a = b = c), got a = {a}, b = {b}, c = {c}")]
    NonCubicBox { a: f64, b: f64, c: f64 },

    #[error("obstacle volume {volume} does not exceed {threshold}; the cube-root branch is not guaranteed, use the general drag/lift bound instead")]
    CondaViolated { volume: f64, threshold: f64 },

    #[error("inverse iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("config line {line}: `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("not certified: Phi = {phi} exceeds the threshold {threshold}")]
    NotCertified { phi: f64, threshold: f64 },
}
