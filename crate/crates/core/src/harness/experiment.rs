// SPDX-License-Identifier: Apache-2.0

//! Support experiment: a field whose support avoids every tangent subsphere
//! of the upper component must have vanishing data there, and moving the
//! support onto those subspheres must break it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::SphereField;
use crate::geometry::{subsphere_nodes, CapRegion};
use crate::roots::wrap_angle;
use crate::surfaces::{
    decompose, projection_set, tangent_plane_at, Interval, Surface, SurfaceParam,
};
use crate::tol::{DEFAULT_NODES, FD_STEP_S0};
use crate::transforms::{vanishing_data_check, VanishingReport};
use crate::vector::{distance, unit_axis};

use super::Check;

/// Required clearance between the support and every tangent subsphere.
pub const DISJOINTNESS_MARGIN: f64 = 0.05;
/// Violation the displaced field must exceed.
pub const FAIL_ARM_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOptions {
    pub samples: usize,
    /// Distance kept from singular parameters when sampling.
    pub param_margin: f64,
    pub tol: f64,
    pub step: f64,
    pub nodes: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            samples: 64,
            param_margin: 1e-3,
            tol: 1e-7,
            step: FD_STEP_S0,
            nodes: DEFAULT_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    /// Smallest `|p − c| − s` over subsphere nodes `p` and support caps
    /// `(c, s)`; 2 when the field has no support.
    pub min_margin: f64,
    pub required: f64,
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailArm {
    pub center: Vec<f64>,
    pub radius: f64,
    pub violation: f64,
    pub report: VanishingReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub projection_cap: CapRegion,
    pub upper: Interval,
    pub sample_params: Vec<SurfaceParam>,
    pub precondition: Precondition,
    /// Highest point of the support minus the cap height; negative when the
    /// support lies inside the projection set.
    pub support_excess: Option<f64>,
    pub pass_arm: Option<VanishingReport>,
    pub fail_arm: Option<FailArm>,
}

impl SupportReport {
    /// Checks in reporting order: the precondition always comes first.
    pub fn checks(&self) -> Vec<Check> {
        let mut checks = vec![Check::lower(
            "disjointness_margin",
            self.precondition.min_margin,
            self.precondition.required,
        )];
        if let Some(excess) = self.support_excess {
            checks.push(Check::upper("support_above_projection_cap", excess, 0.0));
        }
        if let Some(arm) = &self.pass_arm {
            checks.push(Check::upper("pass_arm_max_value", arm.max_value, arm.tol));
            checks.push(Check::upper(
                "pass_arm_max_gradient",
                arm.max_gradient,
                arm.tol,
            ));
        }
        if let Some(arm) = &self.fail_arm {
            checks.push(Check::lower(
                "fail_arm_violation",
                arm.violation,
                FAIL_ARM_THRESHOLD,
            ));
        }
        checks
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }
}

/// Highest value of `x_{n+1}` on the chordal cap `|x − c| ≤ s` of the sphere.
fn cap_top(center: &[f64], radius: f64) -> f64 {
    let half_angle = (1.0 - radius * radius / 2.0).clamp(-1.0, 1.0).acos();
    let from_pole = center[center.len() - 1].clamp(-1.0, 1.0).acos();
    (from_pole - half_angle).max(0.0).cos()
}

fn sample_params(
    upper: Interval,
    sigma0: &[f64],
    dim: usize,
    opts: &ExperimentOptions,
) -> Vec<SurfaceParam> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    upper
        .sample(opts.samples, opts.param_margin)
        .into_iter()
        .filter(|t| {
            sigma0
                .iter()
                .all(|r| wrap_angle(t - r).abs() > opts.param_margin)
        })
        .enumerate()
        .map(|(k, t)| {
            let phi = if dim == 3 {
                std::f64::consts::TAU * (k as f64 * golden).fract()
            } else {
                0.0
            };
            SurfaceParam::new(t, phi)
        })
        .collect()
}

/// Runs both arms of the support experiment on the upper component of
/// `surface`.
pub fn support_experiment(
    surface: &Surface,
    field: &SphereField,
    opts: &ExperimentOptions,
) -> Result<SupportReport> {
    let dim = surface.ambient_dim();
    field.validate(dim)?;
    if !field.c0_compatible(dim) {
        return Err(Error::PreconditionUnmet(
            "field support must stay away from the north pole".into(),
        ));
    }
    let section = surface.section()?;
    let decomposition = decompose(surface)?;
    let cap = projection_set(&section, &decomposition)?;
    let upper = decomposition.upper();
    let params = sample_params(upper, &decomposition.sigma0_extra_params, dim, opts);

    let node_sets: Vec<Vec<Vec<f64>>> = params
        .par_iter()
        .map(|p| {
            let s = tangent_plane_at(surface, *p)?.subsphere()?;
            Ok(subsphere_nodes(&s, opts.nodes)?
                .into_iter()
                .map(|n| n.point.into_coords())
                .collect())
        })
        .collect::<Result<_>>()?;

    let caps = field.support_caps().unwrap_or_default();
    let min_margin = node_sets
        .iter()
        .flatten()
        .flat_map(|p| caps.iter().map(move |c| distance(p, &c.center) - c.radius))
        .fold(2.0, f64::min);
    let precondition = Precondition {
        min_margin,
        required: DISJOINTNESS_MARGIN,
        confirmed: min_margin >= DISJOINTNESS_MARGIN,
    };
    let support_excess = caps
        .iter()
        .map(|c| cap_top(&c.center, c.radius) - cap.axis_height)
        .reduce(f64::max);

    let pass_arm = if precondition.confirmed {
        Some(vanishing_data_check(
            field, surface, &params, opts.tol, opts.step, opts.nodes,
        )?)
    } else {
        None
    };

    let fail_arm = match field {
        SphereField::CapBump {
            radius, amplitude, ..
        } if *amplitude != 0.0 => {
            let e1 = unit_axis(dim, 0);
            let near = |p: &Vec<f64>| distance(p, &e1);
            let closest = node_sets
                .iter()
                .flatten()
                .map(near)
                .fold(f64::INFINITY, f64::min);
            let center = if closest < radius / 2.0 {
                e1
            } else {
                node_sets[node_sets.len() / 2]
                    .iter()
                    .min_by(|a, b| near(a).total_cmp(&near(b)))
                    .cloned()
                    .unwrap_or(e1)
            };
            let moved = SphereField::cap_bump(center.clone(), *radius, *amplitude);
            let report =
                vanishing_data_check(&moved, surface, &params, opts.tol, opts.step, opts.nodes)?;
            Some(FailArm {
                center,
                radius: *radius,
                violation: report.max_value,
                report,
            })
        }
        _ => None,
    };

    Ok(SupportReport {
        projection_cap: cap,
        upper,
        sample_params: params,
        precondition,
        support_excess,
        pass_arm,
        fail_arm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cap_top_heights() {
        assert_abs_diff_eq!(cap_top(&[0.0, 0.0, -1.0], 0.0), -1.0);
        let s: f64 = 0.3;
        assert_abs_diff_eq!(
            cap_top(&[0.0, 0.0, -1.0], s),
            s * s / 2.0 - 1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(cap_top(&[0.0, 0.0, 1.0], s), 1.0);
    }
}
