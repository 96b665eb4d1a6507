// SPDX-License-Identifier: Apache-2.0

//! Shared tolerances and discretization constants.

/// Unit-vector normalization and near-singular denominators.
pub const UNIT_TOL: f64 = 1e-12;
/// Geometric identities (points on predicted spheres, planes).
pub const GEOM_TOL: f64 = 1e-10;
/// Relative agreement between two quadrature routes.
pub const QUAD_RELTOL: f64 = 1e-6;

/// Tolerance for the unit-sphere membership check on stereographic input.
pub const SPHERE_MEMBERSHIP_TOL: f64 = 1e-10;

/// Profiles must stay this far inside the unit circle.
pub const CONTAINMENT_MARGIN: f64 = 1e-6;
/// Samples used by the containment check.
pub const CONTAINMENT_SAMPLES: usize = 4096;

/// Uniform scan density for sign-change root finding.
pub const ROOT_SCAN_SAMPLES: usize = 4096;
/// Bisection bracket width at termination.
pub const ROOT_TOL: f64 = 1e-12;

/// Samples per interval for the curvature-expression regularity scan.
pub const REGULARITY_SAMPLES: usize = 2048;
/// Threshold on |g1' g2'' - g1'' g2'|.
pub const REGULARITY_TOL: f64 = 1e-9;

/// Minimum acceptable normal defect for a space-like sample.
pub const SPACELIKE_TOL: f64 = 1e-9;

/// Image samples whose denominator `γ₁γ₂' − γ₂γ₁' + γ₁'` falls below this are dropped.
pub const IMAGE_DENOM_CUTOFF: f64 = 1e-8;

pub const FD_STEP_JACOBIAN: f64 = 1e-5;
pub const FD_STEP_TANGENT: f64 = 1e-6;
pub const FD_STEP_S0: f64 = 1e-4;

/// Default quadrature node count on circles.
pub const DEFAULT_NODES: usize = 512;
/// Smallest node count accepted by the circle rules.
pub const MIN_NODES: usize = 4;
