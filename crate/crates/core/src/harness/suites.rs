// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::darboux::darboux_refinement;
use crate::error::{Error, Result};
use crate::fields::{PlaneField, SphereField};
use crate::geometry::{
    stereo_forward, stereo_inverse, subsphere_image, subsphere_nodes, AmbientPoint, SubsphereParam,
};
use crate::maps::{
    h_identity_residual, hyperboloid_level, hyperboloid_model, inside_s0, phi_profile, phi_sigma,
    phi_tangent_direction, psi1_jacobian_det, psi1_map, sample_component_image, spacelike_defect,
    spacelike_verify,
};
use crate::surfaces::{
    decompose, regularity_check, OffsetSphere, PlanarCurve, Surface, SurfaceParam,
};
use crate::tol::{
    FD_STEP_JACOBIAN, FD_STEP_TANGENT, GEOM_TOL, QUAD_RELTOL, REGULARITY_TOL, SPACELIKE_TOL,
};
use crate::transforms::transform_relation_check;
use crate::vector::{distance, norm, norm_sq};

use super::experiment::{support_experiment, ExperimentOptions};
use super::{random_subsphere, random_unit_vector, Check, SuiteOptions, VerifySuiteResult};
use crate::config::SurfaceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    StereographicImages,
    TransformRelation,
    SphereImages,
    SpacelikeImages,
    Darboux,
    Jacobian,
    Support,
    All,
}

pub const SUITE_NAMES: [&str; 8] = [
    "lemma21",
    "relation22",
    "example38",
    "theorem36",
    "darboux",
    "jacobian",
    "theorem31",
    "all",
];

const SINGLE_SUITES: [SuiteName; 7] = [
    SuiteName::StereographicImages,
    SuiteName::TransformRelation,
    SuiteName::SphereImages,
    SuiteName::SpacelikeImages,
    SuiteName::Darboux,
    SuiteName::Jacobian,
    SuiteName::Support,
];

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::StereographicImages => "lemma21",
            Self::TransformRelation => "relation22",
            Self::SphereImages => "example38",
            Self::SpacelikeImages => "theorem36",
            Self::Darboux => "darboux",
            Self::Jacobian => "jacobian",
            Self::Support => "theorem31",
            Self::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SINGLE_SUITES
            .iter()
            .chain(std::iter::once(&SuiteName::All))
            .find(|n| n.as_str() == s)
            .copied()
            .ok_or_else(|| Error::ConfigInvalid {
                location: "suite".into(),
                message: format!(
                    "unknown suite {s:?}; expected one of {}",
                    SUITE_NAMES.join(", ")
                ),
            })
    }
}

/// Runs one suite, or every suite in order for `all`.
pub fn run_suite(name: SuiteName, opts: &SuiteOptions) -> Result<VerifySuiteResult> {
    let start = Instant::now();
    let checks = match name {
        SuiteName::All => {
            let mut all = Vec::new();
            for suite in SINGLE_SUITES {
                for mut c in suite_checks(suite, opts)? {
                    c.name = format!("{suite}/{}", c.name);
                    all.push(c);
                }
            }
            all
        }
        single => suite_checks(single, opts)?,
    };
    let mut result = VerifySuiteResult::new(name.as_str(), opts.seed, checks);
    result.runtime_ms = start.elapsed().as_millis();
    Ok(result)
}

fn suite_checks(name: SuiteName, opts: &SuiteOptions) -> Result<Vec<Check>> {
    match name {
        SuiteName::StereographicImages => stereographic_images(opts),
        SuiteName::TransformRelation => transform_relation(opts),
        SuiteName::SphereImages => sphere_images(opts),
        SuiteName::SpacelikeImages => spacelike_images(opts),
        SuiteName::Darboux => darboux(opts),
        SuiteName::Jacobian => jacobian(opts),
        SuiteName::Support => support(opts),
        SuiteName::All => unreachable!("expanded by run_suite"),
    }
}

fn wrong_surface(suite: &str, need: &str) -> Error {
    Error::ConfigInvalid {
        location: "surface".into(),
        message: format!("suite {suite} needs {need}"),
    }
}

fn field_for(opts: &SuiteOptions, dim: usize) -> Result<Option<SphereField>> {
    match &opts.field {
        Some(f) => {
            f.validate(dim).map_err(|e| Error::ConfigInvalid {
                location: "field".into(),
                message: e.to_string(),
            })?;
            Ok(Some(f.clone()))
        }
        None => Ok(None),
    }
}

const SUBSPHERE_COUNT: usize = 1000;
const RELATION_SUBSPHERES: usize = 100;
const MIN_POLE_GAP: f64 = 0.05;
const RHO_MAX: f64 = 0.98;

fn smooth_test_field() -> SphereField {
    SphereField::Sum {
        terms: vec![
            SphereField::Constant { value: 1.0 },
            SphereField::Coordinate { index: 1 },
            SphereField::Coordinate { index: 3 },
        ],
    }
}

fn random_subspheres(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<SubsphereParam>> {
    (0..count)
        .map(|_| random_subsphere(rng, 3, RHO_MAX, MIN_POLE_GAP))
        .collect()
}

/// Projected subsphere nodes lie on the predicted circle, and the two
/// integration routes agree.
fn stereographic_images(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let field = field_for(opts, 3)?.unwrap_or_else(smooth_test_field);
    let subs = random_subspheres(&mut rng, SUBSPHERE_COUNT)?;
    let rows: Vec<(f64, f64)> = subs
        .par_iter()
        .map(|s| {
            let image = subsphere_image(s)?;
            let mut worst: f64 = 0.0;
            for node in subsphere_nodes(s, opts.nodes)? {
                let y = stereo_forward(&node.point)?;
                worst = worst.max((distance(&y, &image.center) - image.radius).abs());
            }
            let rel = transform_relation_check(&field, s, opts.nodes)?.rel_residual;
            Ok((worst, rel))
        })
        .collect::<Result<_>>()?;
    let node_residual = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let integral_residual = rows.iter().map(|r| r.1).fold(0.0, f64::max);

    let mut round_trip: f64 = 0.0;
    for _ in 0..SUBSPHERE_COUNT {
        let radius = 10f64.powf(rng.gen_range(-3.0..3.0));
        let y: Vec<f64> = random_unit_vector(&mut rng, 2)
            .iter()
            .map(|c| c * radius)
            .collect();
        let back = stereo_forward(&stereo_inverse(&y)?)?;
        round_trip = round_trip.max(distance(&back, &y));
        let mut x = random_unit_vector(&mut rng, 3);
        if x[2] > 0.999 {
            x[2] = -x[2];
        }
        let again = stereo_inverse(&stereo_forward(&AmbientPoint::new(x.clone())?)?)?;
        round_trip = round_trip.max(distance(again.coords(), &x));
    }

    Ok(vec![
        Check::upper("nodes_on_image_sphere", node_residual, GEOM_TOL),
        Check::upper("weighted_integral_relative", integral_residual, QUAD_RELTOL),
        Check::upper("stereographic_round_trip", round_trip, 1e-12),
    ])
}

/// Spherical transform against the spherical mean of the pulled-back field.
fn transform_relation(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let subs = random_subspheres(&mut rng, RELATION_SUBSPHERES)?;
    let fields: Vec<(String, SphereField)> = match field_for(opts, 3)? {
        Some(f) => vec![("field".into(), f)],
        None => vec![
            ("constant".into(), SphereField::Constant { value: 1.0 }),
            ("coordinate".into(), SphereField::Coordinate { index: 3 }),
            (
                "cap_bump".into(),
                SphereField::cap_bump(vec![0.0, 0.0, -1.0], 1.9, 1.0),
            ),
        ],
    };
    let mut checks = Vec::new();
    for (label, f) in &fields {
        let worst = subs
            .par_iter()
            .map(|s| Ok(transform_relation_check(f, s, opts.nodes)?.rel_residual))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::upper(
            format!("relation_relative[{label}]"),
            worst,
            QUAD_RELTOL,
        ));
    }
    let s = SubsphereParam::new(vec![0.0, 0.0, 1.0], 0.5)?;
    let r = transform_relation_check(&SphereField::Constant { value: 1.0 }, &s, opts.nodes)?;
    let exact = PI * 3f64.sqrt();
    checks.push(Check::upper(
        "closed_form_transform",
        (r.lhs - exact).abs(),
        1e-10,
    ));
    checks.push(Check::upper(
        "closed_form_mean",
        (r.rhs - exact).abs(),
        1e-10,
    ));
    Ok(checks)
}

const QUADRIC_SAMPLES: usize = 500;
const QUADRIC_GAP: f64 = 0.02;

fn label(x: f64) -> String {
    format!("{x}")
}

/// Images of offset spheres against the proposed quadric.
fn sphere_images(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let e3 = vec![0.0, 0.0, 1.0];
    let cases: Vec<(f64, Vec<f64>, f64)> = match &opts.surface {
        Some(Surface::Sphere(s)) => vec![(s.lambda(), s.omega().to_vec(), s.radius())],
        Some(_) => return Err(wrong_surface("example38", "an offset_sphere surface")),
        None => vec![
            (0.0, e3.clone(), 0.3),
            (0.0, e3.clone(), 0.5),
            (0.0, e3.clone(), 0.7),
            (0.2, e3, 0.3),
        ],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    for (lambda, omega, r) in cases {
        let surface = Surface::Sphere(OffsetSphere::new(lambda, omega.clone(), r)?);
        let model = hyperboloid_model(lambda, &omega, r)?;
        let tag = format!("lambda={},r={}", label(lambda), label(r));
        let mut worst: f64 = 0.0;
        let mut min_defect = f64::INFINITY;
        let mut accepted = 0;
        while accepted < QUADRIC_SAMPLES {
            let param = SurfaceParam::new(
                rng.gen_range(-PI / 2.0..PI / 2.0),
                rng.gen_range(0.0..2.0 * PI),
            );
            let plane = crate::surfaces::tangent_plane_at(&surface, param)?;
            if plane.pole_gap().abs() < QUADRIC_GAP {
                continue;
            }
            accepted += 1;
            let y = phi_sigma(&surface, param)?.as_point();
            let (res, branch) = model.residual(&y);
            worst = worst.max(res.abs());
            min_defect = min_defect.min(spacelike_defect(&model.normal(&y, branch)));
        }
        checks.push(Check::upper(
            format!("quadric_residual[{tag}]"),
            worst,
            1e-9,
        ));
        if lambda == 0.0 {
            let one = 1.0 - r * r;
            let constants = [
                (model.a - one).abs(),
                (model.c - one).abs(),
                (model.d - one).abs(),
                (model.b + r / one.sqrt()).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            checks.push(Check::upper(
                format!("centered_constants[{tag}]"),
                constants,
                1e-12,
            ));
            checks.push(Check::lower(
                format!("quadric_spacelike[{tag}]"),
                min_defect,
                -SPACELIKE_TOL,
            ));
        }
    }
    Ok(checks)
}

const IMAGE_SAMPLES: usize = 1000;
const IDENTITY_SAMPLES: usize = 1000;
const DIRECTION_SAMPLES: usize = 50;

fn direction_error<C: PlanarCurve>(curve: &C, t: f64) -> Result<f64> {
    let nu = phi_tangent_direction(curve, t)?.nu;
    let ahead = phi_profile(curve, t + FD_STEP_TANGENT)?;
    let behind = phi_profile(curve, t - FD_STEP_TANGENT)?;
    let fd = [ahead[0] - behind[0], ahead[1] - behind[1]];
    let cross = nu[0] * fd[1] - nu[1] * fd[0];
    let dot = nu[0] * fd[0] + nu[1] * fd[1];
    Ok(cross.abs().atan2(dot.abs()))
}

/// Images of regular components are space-like; some other component is not
/// regular or not space-like.
fn spacelike_images(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let default = opts.surface.is_none();
    let surface = match &opts.surface {
        Some(s) => s.clone(),
        None => SurfaceConfig::three_lobe().build()?,
    };
    let section = surface.section()?;
    let d = decompose(&surface)?;
    let mut checks = Vec::new();
    if default {
        checks.push(Check::upper(
            "component_count_is_six",
            (d.components.len() as f64 - 6.0).abs(),
            0.5,
        ));
    }

    let upper_regularity = regularity_check(&section, d.upper());
    checks.push(Check::lower(
        "upper_component_bending",
        if upper_regularity.regular {
            upper_regularity.min_abs
        } else {
            0.0
        },
        REGULARITY_TOL,
    ));

    let mut regular_min = f64::INFINITY;
    let mut failing = 0usize;
    for (i, c) in d.components.iter().enumerate() {
        let report =
            spacelike_verify(&sample_component_image(&surface, *c, IMAGE_SAMPLES)?.samples);
        if d.regular_flags[i] {
            regular_min = regular_min.min(report.min_defect);
        }
        if !d.regular_flags[i] || !report.passed {
            failing += 1;
        }
    }
    if !regular_min.is_finite() {
        regular_min = -1.0;
    }
    checks.push(Check::lower(
        "regular_components_spacelike",
        regular_min,
        -SPACELIKE_TOL,
    ));
    checks.push(Check::lower("other_component_fails", failing as f64, 1.0));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let identity = (0..IDENTITY_SAMPLES)
        .map(|_| h_identity_residual(&section, rng.gen_range(-PI..PI)).abs())
        .fold(0.0, f64::max);
    checks.push(Check::upper("h_identity", identity, GEOM_TOL));

    let upper = d.upper();
    let inner = crate::surfaces::Interval {
        lo: upper.lo + 0.05 * upper.width(),
        hi: upper.hi - 0.05 * upper.width(),
    };
    let mut angle: f64 = 0.0;
    for t in inner.sample(DIRECTION_SAMPLES, 0.0) {
        angle = angle.max(direction_error(&section, t)?);
    }
    checks.push(Check::upper("tangent_direction_angle", angle, 1e-5));
    Ok(checks)
}

fn darboux(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let x_range = (-0.1, 0.1);
    let t_range = (0.3, 0.5);
    let h = 0.02;
    let residual = |g: &PlaneField| -> Result<f64> {
        let r = darboux_refinement(g, 2, x_range, t_range, h, opts.nodes)?;
        Ok(r.coarse_max.max(r.fine_max))
    };
    let constant = residual(&PlaneField::Constant { value: 1.0 })?;
    let quadratic = residual(&PlaneField::Radial {
        coeffs: vec![0.0, 1.0],
    })?;
    let bump = PlaneField::Bump {
        center: vec![0.05, -0.03],
        width: 0.5,
        amplitude: 1.0,
    };
    let order = darboux_refinement(&bump, 2, x_range, t_range, h, opts.nodes)?
        .order
        .unwrap_or(0.0);
    Ok(vec![
        Check::upper("constant_residual", constant, 1e-8),
        Check::upper("quadratic_residual", quadratic, 1e-8),
        Check::lower("bump_convergence_order", order, 1.8),
    ])
}

const JACOBIAN_POINTS: usize = 50;
const POSITIVITY_POINTS: usize = 10_000;
const PARTITION_POINTS: usize = 1000;

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Central-difference determinant of the Jacobian of `Ψ₁` in `R^3`.
pub(crate) fn fd_jacobian_det(y: &[f64], h: f64) -> Result<f64> {
    let mut m = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut plus = y.to_vec();
        let mut minus = y.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let a = psi1_map(&plus)?.as_point();
        let b = psi1_map(&minus)?.as_point();
        for i in 0..3 {
            m[i][j] = (a[i] - b[i]) / (2.0 * h);
        }
    }
    Ok(det3(&m).abs())
}

fn random_domain_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let r = rng.gen_range(lo..hi);
        let y: Vec<f64> = random_unit_vector(rng, 3).iter().map(|c| c * r).collect();
        if (norm_sq(&y) - y[2]).abs() > gap {
            return y;
        }
    }
}

fn jacobian(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rel: f64 = 0.0;
    for _ in 0..JACOBIAN_POINTS {
        let y = random_domain_point(&mut rng, 0.1, 0.9, 0.05);
        let exact = psi1_jacobian_det(&y)?;
        rel = rel.max((fd_jacobian_det(&y, FD_STEP_JACOBIAN)? - exact).abs() / exact);
    }
    let mut min_det = f64::INFINITY;
    for _ in 0..POSITIVITY_POINTS {
        let y = random_domain_point(&mut rng, 1e-3, 1.0 - 1e-3, 1e-9);
        min_det = min_det.min(psi1_jacobian_det(&y)?);
    }

    let mut inside_wrong = 0usize;
    let mut accepted = 0;
    while accepted < PARTITION_POINTS {
        let u = random_unit_vector(&mut rng, 3);
        let s = 0.5 * rng.gen_range(0.0..1.0f64);
        let y = [s * u[0], s * u[1], 0.5 + s * u[2]];
        if norm(&y) < 1e-6 || y[2] - norm_sq(&y) < 1e-9 {
            continue;
        }
        accepted += 1;
        if !(inside_s0(&y) && hyperboloid_level(&psi1_map(&y)?) > 1.0) {
            inside_wrong += 1;
        }
    }
    let mut outside_wrong = 0usize;
    accepted = 0;
    while accepted < PARTITION_POINTS {
        let y = random_domain_point(&mut rng, 1e-6, 1.0 - 1e-9, 1e-9);
        if inside_s0(&y) {
            continue;
        }
        accepted += 1;
        if hyperboloid_level(&psi1_map(&y)?) >= 1.0 {
            outside_wrong += 1;
        }
    }
    Ok(vec![
        Check::upper("jacobian_fd_relative", rel, 1e-6),
        Check::lower("jacobian_min_positive", min_det, f64::MIN_POSITIVE),
        Check::upper("partition_inside_misclassified", inside_wrong as f64, 0.5),
        Check::upper("partition_outside_misclassified", outside_wrong as f64, 0.5),
    ])
}

fn support(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let surface = match &opts.surface {
        Some(s) => s.clone(),
        None => SurfaceConfig::centered_sphere(0.5, 3).build()?,
    };
    let dim = surface.ambient_dim();
    let mut south = vec![0.0; dim];
    south[dim - 1] = -1.0;
    let field = field_for(opts, dim)?.unwrap_or_else(|| SphereField::cap_bump(south, 0.3, 1.0));
    let mut eopts = ExperimentOptions {
        nodes: opts.nodes,
        ..Default::default()
    };
    if let Some(tol) = opts.tol {
        eopts.tol = tol;
    }
    Ok(support_experiment(&surface, &field, &eopts)?.checks())
}
