// SPDX-License-Identifier: Apache-2.0

//! Verification suites, the support experiment and figure data.

mod experiment;
mod figures;
mod suites;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::SphereField;
use crate::geometry::SubsphereParam;
use crate::surfaces::Surface;
use crate::tol::DEFAULT_NODES;
use crate::vector::norm_sq;

pub use experiment::{
    support_experiment, ExperimentOptions, FailArm, Precondition, SupportReport,
    DISJOINTNESS_MARGIN,
};
pub use figures::{emit_figure, hyperboloid_partition_holds, FigureDataset, FigureId, Series};
pub use suites::{run_suite, SuiteName, SUITE_NAMES};

/// Direction of the comparison a check makes against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Passes when the value is strictly below the tolerance.
    Upper,
    /// Passes when the value is at least the tolerance.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn upper(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_residual: value,
            tolerance,
            bound: Bound::Upper,
            passed: value < tolerance,
        }
    }

    pub fn lower(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_residual: value,
            tolerance,
            bound: Bound::Lower,
            passed: value >= tolerance,
        }
    }

    /// Status line `PASS name value (< tol)`.
    pub fn line(&self) -> String {
        let (status, op) = match (self.passed, self.bound) {
            (true, Bound::Upper) => ("PASS", "<"),
            (false, Bound::Upper) => ("FAIL", "<"),
            (true, Bound::Lower) => ("PASS", ">="),
            (false, Bound::Lower) => ("FAIL", ">="),
        };
        format!(
            "{status} {} value={:.6e} (need {op} {:.3e})",
            self.name, self.max_residual, self.tolerance
        )
    }
}

/// Outcome of one suite. The runtime is reported separately so that
/// serialized results are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySuiteResult {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub overall: bool,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl VerifySuiteResult {
    pub fn new(suite: impl Into<String>, seed: u64, checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        Self {
            suite: suite.into(),
            seed,
            checks,
            overall,
            runtime_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Inputs shared by the suites; `None` selects each suite's default.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub surface: Option<Surface>,
    pub field: Option<SphereField>,
    /// Overrides the vanishing tolerance of the support experiment.
    pub tol: Option<f64>,
    pub nodes: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            surface: None,
            field: None,
            tol: None,
            nodes: DEFAULT_NODES,
        }
    }
}

/// Uniform random unit vector by rejection from the cube.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = norm_sq(&v);
        if q > 1e-4 && q <= 1.0 {
            let len = q.sqrt();
            return v.into_iter().map(|c| c / len).collect();
        }
    }
}

/// Random subsphere with `ρ ∈ [0, rho_max)` staying `min_gap` away from
/// containing the north pole.
pub fn random_subsphere<R: Rng>(
    rng: &mut R,
    dim: usize,
    rho_max: f64,
    min_gap: f64,
) -> Result<SubsphereParam> {
    if !(rho_max > 0.0 && rho_max < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rho_max {rho_max} outside (0, 1)"
        )));
    }
    loop {
        let psi = random_unit_vector(rng, dim);
        let rho = rng.gen_range(0.0..rho_max);
        if (rho - psi[dim - 1]).abs() > min_gap {
            return SubsphereParam::new(psi, rho);
        }
    }
}
