// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension {0} is not supported (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point is not on the unit sphere (|x| = {norm})")]
    NotOnSphere { norm: f64 },
    #[error("stereographic projection is singular at the north pole")]
    NorthPoleSingular,
    #[error("subsphere passes through the north pole (|rho - psi_last| = {gap})")]
    PassesThroughNorthPole { gap: f64 },
    #[error("invalid subsphere: {0}")]
    InvalidSubsphere(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("surface is not contained in the unit ball (max |x| = {max_norm})")]
    NotContained { max_norm: f64 },
    #[error("surface is not axially symmetric about the last axis")]
    NotAxiallySymmetric,
    #[error("degenerate tangent at parameter {param}")]
    DegenerateTangent { param: f64 },
    #[error("profile never crosses the symmetry axis")]
    NoAxisCrossing,
    #[error("upper component has an empty boundary (no singular points)")]
    EmptyBoundary,
    #[error("tangent plane passes through the origin or the north pole")]
    OnSigma0,
    #[error("point lies on the singular set")]
    OnSingularSet,
    #[error("the origin does not determine a hyperplane")]
    OriginUndefined,
    #[error("point lies on the sphere S0 (|y|^2 = y_last)")]
    OnS0,
    #[error("point lies outside the open unit ball")]
    OutsideBall,
    #[error("denominator vanishes at parameter {param}")]
    DenominatorVanishes { param: f64 },
    #[error("profile is not regular at parameter {param}")]
    NotRegular { param: f64 },
    #[error("finite-difference stencil leaves the domain at step {step}")]
    DomainClip { step: f64 },
    #[error("invalid configuration at {location}: {message}")]
    ConfigInvalid { location: String, message: String },
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
}
