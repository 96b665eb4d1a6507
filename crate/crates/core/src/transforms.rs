// SPDX-License-Identifier: Apache-2.0

//! Spherical transform over subspheres, its hyperplane-foot form, the
//! spherical mean over Euclidean spheres, and checks linking them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{pullback_field, PlaneField, SphereField};
use crate::geometry::{sphere_nodes, subsphere_nodes, EuclideanSphere, SubsphereParam};
use crate::maps::{psi0_map, psi_map};
use crate::surfaces::{Surface, SurfaceParam};
use crate::tol::UNIT_TOL;
use crate::vector::norm;

/// `∫ f dS` over the subsphere `S_{ψ,ρ}`.
pub fn spherical_transform(f: &SphereField, s: &SubsphereParam, nodes: usize) -> Result<f64> {
    f.validate(s.ambient_dim())?;
    Ok(subsphere_nodes(s, nodes)?
        .iter()
        .map(|n| n.weight * f.eval(n.point.coords()))
        .sum())
}

/// The spherical transform indexed by the foot `y` of the hyperplane,
/// `S₀f(y) = Sf(y/|y|, |y|)`.
pub fn modified_spherical_transform(f: &SphereField, y: &[f64], nodes: usize) -> Result<f64> {
    let len = norm(y);
    if len < UNIT_TOL {
        return Err(Error::OriginUndefined);
    }
    if len >= 1.0 {
        return Err(Error::OutsideBall);
    }
    let psi = y.iter().map(|c| c / len).collect();
    spherical_transform(f, &SubsphereParam::new(psi, len)?, nodes)
}

/// Central-difference gradient of `S₀f` at `y` with step `h`.
pub fn s0_gradient_fd(f: &SphereField, y: &[f64], h: f64, nodes: usize) -> Result<Vec<f64>> {
    let len = norm(y);
    if !(h > 0.0) || len + h >= 1.0 || len - h <= 0.0 {
        return Err(Error::DomainClip { step: h });
    }
    (0..y.len())
        .map(|i| {
            let mut plus = y.to_vec();
            let mut minus = y.to_vec();
            plus[i] += h;
            minus[i] -= h;
            let fp = modified_spherical_transform(f, &plus, nodes)?;
            let fm = modified_spherical_transform(f, &minus, nodes)?;
            Ok((fp - fm) / (2.0 * h))
        })
        .collect()
}

/// `∫ g dS` over the sphere `|x' − x| = t` in `R^n`.
pub fn spherical_mean(g: &PlaneField, sphere: &EuclideanSphere, nodes: usize) -> Result<f64> {
    Ok(sphere_nodes(sphere, nodes)?
        .iter()
        .map(|n| n.weight * g.eval(&n.point))
        .sum())
}

/// Both sides of `Sf(ψ, ρ) = Rg(Ψ(ψ, ρ))` for the pulled-back field `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1)`.
    pub rel_residual: f64,
}

pub fn transform_relation_check(
    f: &SphereField,
    s: &SubsphereParam,
    nodes: usize,
) -> Result<RelationCheck> {
    let lhs = spherical_transform(f, s, nodes)?;
    let rhs = spherical_mean(&pullback_field(f), &psi_map(s)?, nodes)?;
    let abs_residual = (lhs - rhs).abs();
    Ok(RelationCheck {
        lhs,
        rhs,
        abs_residual,
        rel_residual: abs_residual / lhs.abs().max(rhs.abs()).max(1.0),
    })
}

/// Values and finite-difference gradients of `S₀f` at the feet of tangent
/// planes of the sampled surface points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub evaluated: usize,
    /// Samples whose tangent plane passes through the origin or north pole.
    pub skipped: usize,
    pub max_value: f64,
    pub max_gradient: f64,
    pub worst_param: Option<SurfaceParam>,
    pub tol: f64,
    pub passed: bool,
}

/// Checks that `|S₀f(Ψ₀(x))| < tol` and `‖∇S₀f(Ψ₀(x))‖ < tol` at every
/// sample. At least one sample must be evaluated to pass.
pub fn vanishing_data_check(
    f: &SphereField,
    surface: &Surface,
    params: &[SurfaceParam],
    tol: f64,
    step: f64,
    nodes: usize,
) -> Result<VanishingReport> {
    let rows: Vec<Option<(SurfaceParam, f64, f64)>> = params
        .par_iter()
        .map(|p| {
            let y = match psi0_map(surface, *p) {
                Ok(y) => y,
                Err(Error::OnSigma0) => return Ok(None),
                Err(e) => return Err(e),
            };
            let value = modified_spherical_transform(f, &y, nodes)?.abs();
            let grad = norm(&s0_gradient_fd(f, &y, step, nodes)?);
            Ok(Some((*p, value, grad)))
        })
        .collect::<Result<_>>()?;

    let mut report = VanishingReport {
        evaluated: 0,
        skipped: 0,
        max_value: 0.0,
        max_gradient: 0.0,
        worst_param: None,
        tol,
        passed: false,
    };
    let mut worst = f64::NEG_INFINITY;
    for row in rows {
        match row {
            None => report.skipped += 1,
            Some((p, value, grad)) => {
                report.evaluated += 1;
                report.max_value = report.max_value.max(value);
                report.max_gradient = report.max_gradient.max(grad);
                if value.max(grad) > worst {
                    worst = value.max(grad);
                    report.worst_param = Some(p);
                }
            }
        }
    }
    report.passed = report.evaluated > 0 && report.max_value < tol && report.max_gradient < tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::OffsetSphere;
    use crate::tol::{DEFAULT_NODES, FD_STEP_S0};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const ONE: SphereField = SphereField::Constant { value: 1.0 };

    #[test]
    fn transform_of_constants() {
        let s = SubsphereParam::new(vec![0.0, 0.6, 0.8], 0.3).unwrap();
        let v = spherical_transform(&ONE, &s, DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(v, 2.0 * PI * (1.0 - 0.09f64).sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn transform_of_height() {
        let x3 = SphereField::Coordinate { index: 3 };
        let rho = 0.4;
        let s = SubsphereParam::new(vec![0.0, 0.0, 1.0], rho).unwrap();
        let v = spherical_transform(&x3, &s, DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(
            v,
            2.0 * PI * rho * (1.0 - rho * rho).sqrt(),
            epsilon = 1e-12
        );
        let s = SubsphereParam::new(vec![1.0, 0.0, 0.0], 0.0).unwrap();
        assert_abs_diff_eq!(
            spherical_transform(&x3, &s, DEFAULT_NODES).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn modified_transform() {
        let v = modified_spherical_transform(&ONE, &[0.0, 0.0, 0.5], DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(v, PI * 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(
            modified_spherical_transform(&ONE, &[0.0, 0.0, 0.0], DEFAULT_NODES),
            Err(Error::OriginUndefined)
        );
    }

    #[test]
    fn gradient_of_constant_field() {
        let g = s0_gradient_fd(&ONE, &[0.0, 0.0, 0.5], FD_STEP_S0, DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(g[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g[2], -2.0 * PI / 3f64.sqrt(), epsilon = 1e-6);
        let g = s0_gradient_fd(&ONE, &[0.5, 0.0, 0.0], FD_STEP_S0, DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(g[0], -2.0 * PI / 3f64.sqrt(), epsilon = 1e-6);
        let zero = SphereField::Constant { value: 0.0 };
        let g = s0_gradient_fd(&zero, &[0.1, 0.2, 0.3], FD_STEP_S0, DEFAULT_NODES).unwrap();
        assert!(g.iter().all(|c| *c == 0.0));
        assert!(matches!(
            s0_gradient_fd(&ONE, &[0.0, 0.0, 0.99995], FD_STEP_S0, DEFAULT_NODES),
            Err(Error::DomainClip { .. })
        ));
    }

    #[test]
    fn means() {
        let one = PlaneField::Constant { value: 1.0 };
        let s = EuclideanSphere::new(vec![0.3, -0.2], 0.7).unwrap();
        assert_abs_diff_eq!(
            spherical_mean(&one, &s, 64).unwrap(),
            2.0 * PI * 0.7,
            epsilon = 1e-13
        );
        let radial = PlaneField::Radial {
            coeffs: vec![1.0, 2.0],
        };
        let s = EuclideanSphere::new(vec![0.0, 0.0], 0.5).unwrap();
        assert_abs_diff_eq!(
            spherical_mean(&radial, &s, 64).unwrap(),
            PI * 1.5,
            epsilon = 1e-13
        );
        let s = EuclideanSphere::new(vec![0.5], 0.25).unwrap();
        assert_abs_diff_eq!(
            spherical_mean(&radial, &s, 64).unwrap(),
            1.0 + 0.125 + 1.0 + 1.125
        );
    }

    #[test]
    fn relation_closed_form() {
        let s = SubsphereParam::new(vec![0.0, 0.0, 1.0], 0.5).unwrap();
        let r = transform_relation_check(&ONE, &s, DEFAULT_NODES).unwrap();
        assert_abs_diff_eq!(r.lhs, PI * 3f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(r.rhs, PI * 3f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn vanishing_of_constants() {
        let surface = Surface::Sphere(OffsetSphere::centered(0.5, 3).unwrap());
        let params: Vec<_> = (0..8)
            .map(|k| SurfaceParam::new(0.6 + 0.1 * k as f64, 0.3))
            .collect();
        let zero = SphereField::Constant { value: 0.0 };
        let r = vanishing_data_check(&zero, &surface, &params, 1e-7, FD_STEP_S0, 128).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_value, 0.0);
        let r = vanishing_data_check(&ONE, &surface, &params, 1e-7, FD_STEP_S0, 128).unwrap();
        assert!(!r.passed);
        assert_abs_diff_eq!(r.max_value, PI * 3f64.sqrt(), epsilon = 1e-10);
    }
}
