// SPDX-License-Identifier: Apache-2.0

//! Profile curves, surfaces of revolution about the last axis, tangent
//! planes, singular sets and the component decomposition of `Σ ∖ Σ'`.
//!
//! Every axially symmetric surface is handled through its planar section
//! `(γ₁, γ₂)`, where `γ₂` runs along the symmetry axis. For surfaces in
//! `R^3` the section is the right half (`γ₁ ≥ 0`) of the profile mirrored
//! across the axis; in `R^2` it is the profile itself.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sphere_dim, CapRegion, CapSide, SubsphereParam};
use crate::roots::{bisect, periodic_roots};
use crate::tol::{
    CONTAINMENT_MARGIN, CONTAINMENT_SAMPLES, GEOM_TOL, REGULARITY_SAMPLES, REGULARITY_TOL,
    ROOT_SCAN_SAMPLES, ROOT_TOL, UNIT_TOL,
};
use crate::vector::{all_finite, dot, norm};

/// Position and first two derivatives of a planar curve at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub p: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

impl CurveJet {
    /// `γ₁γ₂' − γ₂γ₁'`; zero when the tangent line passes through the origin.
    pub fn origin_moment(&self) -> f64 {
        self.p[0] * self.d1[1] - self.p[1] * self.d1[0]
    }

    /// `γ₁γ₂' − γ₂γ₁' + γ₁'`; zero when the tangent line passes through `(0, 1)`.
    pub fn pole_moment(&self) -> f64 {
        self.origin_moment() + self.d1[0]
    }

    /// `γ₁'γ₂'' − γ₁''γ₂'`.
    pub fn bending(&self) -> f64 {
        self.d1[0] * self.d2[1] - self.d2[0] * self.d1[1]
    }

    pub fn speed_sq(&self) -> f64 {
        self.d1[0] * self.d1[0] + self.d1[1] * self.d1[1]
    }

    /// In-plane normal `(γ₂', −γ₁')`, outward for counter-clockwise curves.
    pub fn normal(&self) -> [f64; 2] {
        [self.d1[1], -self.d1[0]]
    }
}

/// A twice differentiable planar curve, `2π`-periodic in its parameter.
pub trait PlanarCurve {
    fn jet(&self, t: f64) -> CurveJet;

    fn point(&self, t: f64) -> [f64; 2] {
        self.jet(t).p
    }
}

/// Built-in profile families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileCurve {
    /// `γ(θ) = (a·r(θ)cos θ, a·r(θ)sin θ + d)` with `r(θ) = b + c·sin(kθ + φ₀)`.
    PolarTrig {
        scale: f64,
        base: f64,
        amp: f64,
        freq: f64,
        phase: f64,
        vertical_shift: f64,
    },
    /// `γ(θ) = center + radius·(cos θ, sin θ)`.
    OffsetCircle { center: [f64; 2], radius: f64 },
}

impl ProfileCurve {
    pub fn polar_trig(
        scale: f64,
        base: f64,
        amp: f64,
        freq: f64,
        phase: f64,
        vertical_shift: f64,
    ) -> Result<Self> {
        if !all_finite(&[scale, base, amp, freq, phase, vertical_shift]) {
            return Err(Error::NonFinite);
        }
        if (freq - freq.round()).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!(
                "frequency {freq} must be an integer for a closed profile"
            )));
        }
        if scale <= 0.0 || base - amp.abs() <= 0.0 {
            return Err(Error::InvalidArgument(
                "polar radius must stay positive".into(),
            ));
        }
        Ok(Self::PolarTrig {
            scale,
            base,
            amp,
            freq,
            phase,
            vertical_shift,
        })
    }

    pub fn offset_circle(center: [f64; 2], radius: f64) -> Result<Self> {
        if !all_finite(&[center[0], center[1], radius]) {
            return Err(Error::NonFinite);
        }
        if radius <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radius {radius} must be positive"
            )));
        }
        Ok(Self::OffsetCircle { center, radius })
    }

    /// The three-lobed profile `r(θ) = 0.9·(0.5 + 0.2·sin(3θ + 3.1))`.
    pub fn three_lobe() -> Self {
        Self::PolarTrig {
            scale: 0.9,
            base: 0.5,
            amp: 0.2,
            freq: 3.0,
            phase: 3.1,
            vertical_shift: 0.0,
        }
    }

    /// The same lobed curve unscaled and lowered by 0.2, as drawn for the
    /// revolved surface.
    pub fn three_lobe_lowered() -> Self {
        Self::PolarTrig {
            scale: 1.0,
            base: 0.5,
            amp: 0.2,
            freq: 3.0,
            phase: 3.1,
            vertical_shift: -0.2,
        }
    }
}

impl PlanarCurve for ProfileCurve {
    fn jet(&self, t: f64) -> CurveJet {
        match *self {
            Self::PolarTrig {
                scale,
                base,
                amp,
                freq,
                phase,
                vertical_shift,
            } => {
                let (s, c) = (freq * t + phase).sin_cos();
                let r = base + amp * s;
                let r1 = amp * freq * c;
                let r2 = -amp * freq * freq * s;
                let (st, ct) = t.sin_cos();
                CurveJet {
                    p: [scale * r * ct, scale * r * st + vertical_shift],
                    d1: [scale * (r1 * ct - r * st), scale * (r1 * st + r * ct)],
                    d2: [
                        scale * (r2 * ct - 2.0 * r1 * st - r * ct),
                        scale * (r2 * st + 2.0 * r1 * ct - r * st),
                    ],
                }
            }
            Self::OffsetCircle { center, radius } => {
                let (st, ct) = t.sin_cos();
                CurveJet {
                    p: [center[0] + radius * ct, center[1] + radius * st],
                    d1: [-radius * st, radius * ct],
                    d2: [-radius * ct, -radius * st],
                }
            }
        }
    }
}

/// Planar section of a surface: the profile itself, or its right half
/// mirrored across the symmetry axis.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionCurve {
    Full(ProfileCurve),
    Mirrored(ProfileCurve),
}

impl PlanarCurve for SectionCurve {
    fn jet(&self, t: f64) -> CurveJet {
        match self {
            Self::Full(c) => c.jet(t),
            Self::Mirrored(c) => {
                if t.abs() <= FRAC_PI_2 {
                    return c.jet(t);
                }
                let s = if t > 0.0 { PI - t } else { -PI - t };
                let j = c.jet(s);
                CurveJet {
                    p: [-j.p[0], j.p[1]],
                    d1: [j.d1[0], -j.d1[1]],
                    d2: [-j.d2[0], j.d2[1]],
                }
            }
        }
    }
}

fn max_section_norm<C: PlanarCurve>(curve: &C) -> f64 {
    (0..CONTAINMENT_SAMPLES)
        .map(|k| {
            let t = -PI + 2.0 * PI * k as f64 / CONTAINMENT_SAMPLES as f64;
            norm(&curve.point(t))
        })
        .fold(0.0, f64::max)
}

/// Surface obtained by revolving a profile about the last coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurface {
    profile: ProfileCurve,
    ambient_dim: usize,
}

impl RevolutionSurface {
    pub fn new(profile: ProfileCurve, ambient_dim: usize) -> Result<Self> {
        sphere_dim(ambient_dim)?;
        let surface = Self {
            profile,
            ambient_dim,
        };
        let max_norm = max_section_norm(&surface.section());
        if max_norm >= 1.0 - CONTAINMENT_MARGIN {
            return Err(Error::NotContained { max_norm });
        }
        Ok(surface)
    }

    pub fn profile(&self) -> &ProfileCurve {
        &self.profile
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn section(&self) -> SectionCurve {
        if self.ambient_dim == 2 {
            SectionCurve::Full(self.profile.clone())
        } else {
            SectionCurve::Mirrored(self.profile.clone())
        }
    }
}

/// The sphere `{x : |x − λω| = r}` in `R^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetSphere {
    lambda: f64,
    omega: Vec<f64>,
    radius: f64,
}

impl OffsetSphere {
    pub fn new(lambda: f64, omega: Vec<f64>, radius: f64) -> Result<Self> {
        sphere_dim(omega.len())?;
        if !all_finite(&omega) || !lambda.is_finite() || !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm(&omega) - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument("omega must be a unit vector".into()));
        }
        if lambda < 0.0 || radius <= 0.0 {
            return Err(Error::InvalidArgument(
                "need lambda >= 0 and radius > 0".into(),
            ));
        }
        if lambda + radius >= 1.0 - CONTAINMENT_MARGIN {
            return Err(Error::NotContained {
                max_norm: lambda + radius,
            });
        }
        Ok(Self {
            lambda,
            omega,
            radius,
        })
    }

    pub fn centered(radius: f64, ambient_dim: usize) -> Result<Self> {
        sphere_dim(ambient_dim)?;
        let mut omega = vec![0.0; ambient_dim];
        omega[ambient_dim - 1] = 1.0;
        Self::new(0.0, omega, radius)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> Vec<f64> {
        self.omega.iter().map(|w| self.lambda * w).collect()
    }
}

/// Parameters of a surface point: profile parameter `θ` and, in `R^3`,
/// rotation angle `φ` about the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceParam {
    pub theta: f64,
    pub phi: f64,
}

impl SurfaceParam {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn planar(theta: f64) -> Self {
        Self { theta, phi: 0.0 }
    }
}

/// A hypersurface inside the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Revolution(RevolutionSurface),
    Sphere(OffsetSphere),
}

impl Surface {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Revolution(s) => s.ambient_dim,
            Self::Sphere(s) => s.omega.len(),
        }
    }

    pub fn is_axially_symmetric(&self) -> bool {
        match self {
            Self::Revolution(_) => true,
            Self::Sphere(s) => {
                s.omega.len() == 2
                    || s.lambda == 0.0
                    || s.omega[..s.omega.len() - 1]
                        .iter()
                        .all(|w| w.abs() <= UNIT_TOL)
            }
        }
    }

    /// The planar section through the axis, for surfaces that have one.
    pub fn section(&self) -> Result<SectionCurve> {
        match self {
            Self::Revolution(s) => Ok(s.section()),
            Self::Sphere(s) => {
                if !self.is_axially_symmetric() {
                    return Err(Error::NotAxiallySymmetric);
                }
                let c = s.center();
                let center = if c.len() == 2 {
                    [c[0], c[1]]
                } else {
                    [0.0, c[2]]
                };
                Ok(SectionCurve::Full(ProfileCurve::OffsetCircle {
                    center,
                    radius: s.radius,
                }))
            }
        }
    }

    /// Point of the surface.
    pub fn point(&self, param: SurfaceParam) -> Vec<f64> {
        self.point_and_gradient(param).0
    }

    /// Point and an (unnormalized) normal `∇F` at that point.
    pub fn point_and_gradient(&self, param: SurfaceParam) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::Revolution(s) => {
                let j = s.section().jet(param.theta);
                let n = j.normal();
                if s.ambient_dim == 2 {
                    (j.p.to_vec(), n.to_vec())
                } else {
                    let (sp, cp) = param.phi.sin_cos();
                    (
                        vec![j.p[0] * cp, j.p[0] * sp, j.p[1]],
                        vec![n[0] * cp, n[0] * sp, n[1]],
                    )
                }
            }
            Self::Sphere(s) => {
                let (st, ct) = param.theta.sin_cos();
                let u = if s.omega.len() == 2 {
                    vec![ct, st]
                } else {
                    let (sp, cp) = param.phi.sin_cos();
                    vec![ct * cp, ct * sp, st]
                };
                let x = u
                    .iter()
                    .zip(&s.omega)
                    .map(|(ui, wi)| s.lambda * wi + s.radius * ui)
                    .collect();
                (x, u)
            }
        }
    }
}

/// Tangent plane `{z : z·ψ = ρ}` with `ρ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPlaneData {
    pub psi: Vec<f64>,
    pub rho: f64,
}

impl TangentPlaneData {
    /// Builds the plane through `x` with normal direction `grad`, oriented
    /// so that `ρ ≥ 0`.
    pub fn from_point_normal(x: &[f64], grad: &[f64], theta: f64) -> Result<Self> {
        let len = norm(grad);
        if !(len >= UNIT_TOL) {
            return Err(Error::DegenerateTangent { param: theta });
        }
        let mut psi: Vec<f64> = grad.iter().map(|g| g / len).collect();
        let mut rho = dot(x, &psi);
        if rho < 0.0 {
            psi.iter_mut().for_each(|p| *p = -*p);
            rho = -rho;
        }
        Ok(Self { psi, rho })
    }

    /// Closest point of the plane to the origin, `ρψ`.
    pub fn foot(&self) -> Vec<f64> {
        self.psi.iter().map(|p| self.rho * p).collect()
    }

    /// `ρ − ψ_{n+1}`; zero when the plane contains the north pole.
    pub fn pole_gap(&self) -> f64 {
        self.rho - self.psi[self.psi.len() - 1]
    }

    pub fn subsphere(&self) -> Result<SubsphereParam> {
        SubsphereParam::new(self.psi.clone(), self.rho)
    }
}

/// Tangent plane of `Σ` at the point with parameters `param`.
pub fn tangent_plane_at(surface: &Surface, param: SurfaceParam) -> Result<TangentPlaneData> {
    if let Surface::Revolution(s) = surface {
        let j = s.section().jet(param.theta);
        if j.speed_sq().sqrt() < UNIT_TOL {
            return Err(Error::DegenerateTangent { param: param.theta });
        }
    }
    let (x, grad) = surface.point_and_gradient(param);
    TangentPlaneData::from_point_normal(&x, &grad, param.theta)
}

/// Parameters where the section's tangent line passes through `(0, 1)`
/// (`Σ'`), and where it passes through the origin (the extra part of `Σ₀`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSets {
    pub sigma_prime: Vec<f64>,
    pub sigma0_extra: Vec<f64>,
}

pub fn singular_param_set<C: PlanarCurve>(curve: &C) -> SingularSets {
    SingularSets {
        sigma_prime: periodic_roots(|t| curve.jet(t).pole_moment(), ROOT_SCAN_SAMPLES),
        sigma0_extra: periodic_roots(|t| curve.jet(t).origin_moment(), ROOT_SCAN_SAMPLES),
    }
}

/// An open parameter interval `(lo, hi)`; `hi` may exceed `π` for the
/// component that wraps around.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Whether the angle `t` (any representative mod `2π`) lies inside.
    pub fn contains(&self, t: f64) -> bool {
        let shifted = self.lo + (t - self.lo).rem_euclid(2.0 * PI);
        shifted > self.lo && shifted < self.hi
    }

    /// `count` equispaced interior parameters at the cell midpoints of
    /// `[lo + margin, hi − margin]`.
    pub fn sample(&self, count: usize, margin: f64) -> Vec<f64> {
        let lo = self.lo + margin;
        let step = (self.hi - margin - lo) / count as f64;
        (0..count).map(|k| lo + step * (k as f64 + 0.5)).collect()
    }
}

/// Outcome of the regularity scan on an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    /// Parameter minimizing `|γ₁'γ₂'' − γ₁''γ₂'|`, or a located zero.
    pub witness: f64,
    pub min_abs: f64,
}

/// Scans `|γ₁'γ₂'' − γ₁''γ₂'|` over `REGULARITY_SAMPLES` interior points of
/// `(lo, hi)`. A sign change between samples also counts as a zero.
pub fn regularity_check<C: PlanarCurve>(curve: &C, interval: Interval) -> Regularity {
    let n = REGULARITY_SAMPLES;
    let step = interval.width() / (n + 1) as f64;
    let f = |t: f64| curve.jet(t).bending();
    let mut best = (interval.lo + step, f64::INFINITY);
    let mut prev: Option<(f64, f64)> = None;
    let mut crossing = None;
    for k in 1..=n {
        let t = interval.lo + step * k as f64;
        let v = f(t);
        if v.abs() < best.1 {
            best = (t, v.abs());
        }
        if let Some((tp, vp)) = prev {
            if crossing.is_none() && vp != 0.0 && v != 0.0 && (vp < 0.0) != (v < 0.0) {
                crossing = Some(bisect(f, tp, t, ROOT_TOL));
            }
        }
        prev = Some((t, v));
    }
    match crossing {
        Some(t) if best.1 > REGULARITY_TOL => Regularity {
            regular: false,
            witness: t,
            min_abs: f(t).abs(),
        },
        _ => Regularity {
            regular: best.1 > REGULARITY_TOL,
            witness: best.0,
            min_abs: best.1,
        },
    }
}

/// Connected components of `Σ ∖ Σ'` in parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDecomposition {
    pub components: Vec<Interval>,
    pub singular_params: Vec<f64>,
    pub sigma0_extra_params: Vec<f64>,
    pub regular_flags: Vec<bool>,
    pub upper_index: usize,
    /// Parameter of the highest crossing of the section with the axis.
    pub top_param: f64,
}

impl ComponentDecomposition {
    pub fn upper(&self) -> Interval {
        self.components[self.upper_index]
    }

    /// Index of the component containing `t`, if `t` is not singular.
    pub fn component_of(&self, t: f64) -> Option<usize> {
        self.components.iter().position(|c| c.contains(t))
    }
}

/// Splits the parameter circle at the `Σ'` roots and marks the component
/// containing the highest axis crossing.
pub fn split_components<C: PlanarCurve>(
    curve: &C,
    sets: &SingularSets,
) -> Result<ComponentDecomposition> {
    let crossings = periodic_roots(|t| curve.jet(t).p[0], ROOT_SCAN_SAMPLES);
    let top_param = crossings
        .iter()
        .copied()
        .max_by(|a, b| curve.point(*a)[1].total_cmp(&curve.point(*b)[1]))
        .ok_or(Error::NoAxisCrossing)?;

    let roots = &sets.sigma_prime;
    let components: Vec<Interval> = if roots.is_empty() {
        vec![Interval { lo: -PI, hi: PI }]
    } else {
        let mut c: Vec<Interval> = roots
            .windows(2)
            .map(|w| Interval { lo: w[0], hi: w[1] })
            .collect();
        c.push(Interval {
            lo: roots[roots.len() - 1],
            hi: roots[0] + 2.0 * PI,
        });
        c
    };
    let upper_index = components
        .iter()
        .position(|c| c.contains(top_param))
        .ok_or(Error::NoAxisCrossing)?;
    let regular_flags = components
        .iter()
        .map(|c| regularity_check(curve, *c).regular)
        .collect();
    Ok(ComponentDecomposition {
        components,
        singular_params: roots.clone(),
        sigma0_extra_params: sets.sigma0_extra.clone(),
        regular_flags,
        upper_index,
        top_param,
    })
}

/// Singular sets and component decomposition of an axially symmetric surface.
pub fn decompose(surface: &Surface) -> Result<ComponentDecomposition> {
    let section = surface.section()?;
    split_components(&section, &singular_param_set(&section))
}

/// Height where the line from `(0, 1)` through `b` meets the unit circle again.
pub fn cone_height(b: [f64; 2]) -> f64 {
    let dx = b[0];
    let dy = b[1] - 1.0;
    1.0 - 2.0 * dy * dy / (dx * dx + dy * dy)
}

/// The spherical cap cut out by the tangent cone through the boundary of
/// the upper component. With two distinct boundary heights the lower one
/// is used.
pub fn projection_set<C: PlanarCurve>(
    curve: &C,
    decomposition: &ComponentDecomposition,
) -> Result<CapRegion> {
    if decomposition.singular_params.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let upper = decomposition.upper();
    let h = cone_height(curve.point(upper.lo)).min(cone_height(curve.point(upper.hi)));
    CapRegion::new(h, CapSide::Below)
}

pub fn surface_projection_set(surface: &Surface) -> Result<CapRegion> {
    let section = surface.section()?;
    projection_set(&section, &decompose(surface)?)
}

/// Residual of the tangent line at `θ` passing through `(0, 1)`, normalized
/// by the speed.
pub fn pole_line_residual<C: PlanarCurve>(curve: &C, theta: f64) -> f64 {
    let j = curve.jet(theta);
    j.pole_moment() / j.speed_sq().sqrt()
}

/// Whether a surface parameter sits within `GEOM_TOL` of a singular root.
pub fn near_singular(decomposition: &ComponentDecomposition, theta: f64) -> bool {
    decomposition
        .singular_params
        .iter()
        .chain(&decomposition.sigma0_extra_params)
        .any(|r| (crate::roots::wrap_angle(theta - r)).abs() < GEOM_TOL)
}
