// SPDX-License-Identifier: Apache-2.0

//! Maps from tangent planes and hyperplane feet to spheres in `R^n`,
//! image sampling with normals, the space-like test, and the quadric model
//! for images of offset spheres.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{subsphere_image, EuclideanSphere, SubsphereParam};
use crate::surfaces::{tangent_plane_at, CurveJet, Interval, PlanarCurve, Surface, SurfaceParam};
use crate::tol::{
    CONTAINMENT_MARGIN, GEOM_TOL, IMAGE_DENOM_CUTOFF, REGULARITY_TOL, SPACELIKE_TOL, UNIT_TOL,
};
use crate::vector::{dot, norm, norm_sq};

/// Center and radius of the stereographic image of `S_{ψ,ρ}`.
pub fn psi_map(s: &SubsphereParam) -> Result<EuclideanSphere> {
    subsphere_image(s)
}

/// The same map evaluated on raw plane data of either orientation;
/// `(ψ, ρ)` and `(−ψ, −ρ)` describe one plane and give the same sphere.
pub fn psi_map_signed(psi: &[f64], rho: f64) -> Result<EuclideanSphere> {
    let n = psi.len() - 1;
    let gap = rho - psi[n];
    if gap.abs() < UNIT_TOL {
        return Err(Error::PassesThroughNorthPole { gap: gap.abs() });
    }
    EuclideanSphere::new(
        psi[..n].iter().map(|p| p / gap).collect(),
        (1.0 - rho * rho).sqrt() / gap.abs(),
    )
}

/// Foot of the perpendicular from the origin to the tangent plane at `x`.
pub fn psi0_map(surface: &Surface, param: SurfaceParam) -> Result<Vec<f64>> {
    let plane = tangent_plane_at(surface, param)?;
    if plane.rho < GEOM_TOL || plane.pole_gap().abs() < GEOM_TOL {
        return Err(Error::OnSigma0);
    }
    Ok(plane.foot())
}

fn check_psi1_domain(y: &[f64]) -> Result<(f64, f64)> {
    let q = norm_sq(y);
    let len = q.sqrt();
    if len < UNIT_TOL {
        return Err(Error::OriginUndefined);
    }
    if len >= 1.0 {
        return Err(Error::OutsideBall);
    }
    let delta = q - y[y.len() - 1];
    if delta.abs() < UNIT_TOL {
        return Err(Error::OnS0);
    }
    Ok((len, delta))
}

/// Sphere whose preimage is cut by the hyperplane with foot `y`:
/// `(y*/(|y|² − y_{n+1}), |y|√(1 − |y|²)/||y|² − y_{n+1}|)`.
pub fn psi1_map(y: &[f64]) -> Result<EuclideanSphere> {
    let (len, delta) = check_psi1_domain(y)?;
    let n = y.len() - 1;
    EuclideanSphere::new(
        y[..n].iter().map(|c| c / delta).collect(),
        len * (1.0 - len * len).sqrt() / delta.abs(),
    )
}

/// `|det JΨ₁(y)| = |y| / (||y|² − y_{n+1}|^{n+1} √(1 − |y|²))`.
pub fn psi1_jacobian_det(y: &[f64]) -> Result<f64> {
    let (len, delta) = check_psi1_domain(y)?;
    Ok(len / (delta.abs().powi(y.len() as i32) * (1.0 - len * len).sqrt()))
}

/// Whether `y` lies strictly inside the sphere `|y − e_{n+1}/2| = 1/2`.
pub fn inside_s0(y: &[f64]) -> bool {
    norm_sq(y) < y[y.len() - 1]
}

/// `t² − |c|²` for a sphere `(c, t)`; above the unit hyperboloid when `> 1`.
pub fn hyperboloid_level(s: &EuclideanSphere) -> f64 {
    s.radius * s.radius - norm_sq(&s.center)
}

/// Image of the tangent subsphere at `x`.
pub fn phi_sigma(surface: &Surface, param: SurfaceParam) -> Result<EuclideanSphere> {
    let plane = tangent_plane_at(surface, param)?;
    if plane.pole_gap().abs() < GEOM_TOL {
        return Err(Error::OnSingularSet);
    }
    psi_map_signed(&plane.psi, plane.rho)
}

fn radicand(j: &CurveJet) -> f64 {
    let m = j.origin_moment();
    j.speed_sq() - m * m
}

/// Closed-form image of a planar curve point:
/// `(γ₂'/D, √(γ₁'² + γ₂'² − (γ₁γ₂' − γ₂γ₁')²)/|D|)` with
/// `D = γ₁γ₂' − γ₂γ₁' + γ₁'`.
pub fn phi_profile<C: PlanarCurve>(curve: &C, t: f64) -> Result<[f64; 2]> {
    let j = curve.jet(t);
    let d = j.pole_moment();
    if d.abs() < UNIT_TOL {
        return Err(Error::DenominatorVanishes { param: t });
    }
    Ok([j.d1[1] / d, radicand(&j).max(0.0).sqrt() / d.abs()])
}

/// The two sides of the space-like inequality along the image curve.
pub fn h_terms(j: &CurveJet) -> (f64, f64) {
    let h1 = (1.0 - j.p[1]) * radicand(j).max(0.0).sqrt();
    let h2 = j.p[0] * j.origin_moment() + j.p[0] * j.d1[0] + j.p[1] * j.d1[1] - j.d1[1];
    (h1, h2)
}

/// `h₁² − h₂² − (1 − |γ|²)D²`, which vanishes identically.
pub fn h_identity_residual<C: PlanarCurve>(curve: &C, t: f64) -> f64 {
    let j = curve.jet(t);
    let (h1, h2) = h_terms(&j);
    let d = j.pole_moment();
    h1 * h1 - h2 * h2 - (1.0 - norm_sq(&j.p)) * d * d
}

/// Tangent of the image curve at `t` and its scale factor `K(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentDirection {
    pub nu: [f64; 2],
    pub k: f64,
}

/// `ν(t) = K(t)·(1 − γ₂, ∓h₂/√R)` with `K = (γ₁'γ₂'' − γ₁''γ₂')/D²`. The
/// sign of the second entry is `−sign(D)`, which makes `ν` the derivative of
/// the image parameterization with respect to `t`.
pub fn phi_tangent_direction<C: PlanarCurve>(curve: &C, t: f64) -> Result<TangentDirection> {
    let j = curve.jet(t);
    let d = j.pole_moment();
    if d.abs() < UNIT_TOL {
        return Err(Error::DenominatorVanishes { param: t });
    }
    let bend = j.bending();
    if bend.abs() <= REGULARITY_TOL {
        return Err(Error::NotRegular { param: t });
    }
    let k = bend / (d * d);
    let (_, h2) = h_terms(&j);
    let root = radicand(&j).sqrt();
    Ok(TangentDirection {
        nu: [k * (1.0 - j.p[1]), -d.signum() * k * h2 / root],
        k,
    })
}

/// `N_{n+1}² − Σ N_i²` for the normalized normal; −1 for a zero normal.
pub fn spacelike_defect(normal: &[f64]) -> f64 {
    let len_sq = norm_sq(normal);
    if !(len_sq > 0.0) || !len_sq.is_finite() {
        return -1.0;
    }
    let last = normal[normal.len() - 1];
    (2.0 * last * last - len_sq) / len_sq
}

/// A sampled point of an image surface with its normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageSample {
    pub param: SurfaceParam,
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacelikeReport {
    pub sampled_params: Vec<f64>,
    pub normal_defect: Vec<f64>,
    pub min_defect: f64,
    pub passed: bool,
}

/// Evaluates the space-like defect at every sample. An empty sample set
/// does not pass.
pub fn spacelike_verify(samples: &[ImageSample]) -> SpacelikeReport {
    let normal_defect: Vec<f64> = samples
        .iter()
        .map(|s| spacelike_defect(&s.normal))
        .collect();
    let min_defect = if normal_defect.is_empty() {
        -1.0
    } else {
        normal_defect.iter().copied().fold(f64::INFINITY, f64::min)
    };
    SpacelikeReport {
        sampled_params: samples.iter().map(|s| s.param.theta).collect(),
        normal_defect,
        min_defect,
        passed: min_defect >= -SPACELIKE_TOL,
    }
}

/// Image samples of one component together with the parameters that were
/// skipped.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ImageSampling {
    pub samples: Vec<ImageSample>,
    /// Too close to `Σ'`: `|D|` below the image cutoff.
    pub excluded: Vec<f64>,
    /// Vanishing bending, where the image has no tangent line.
    pub not_regular: Vec<f64>,
}

/// Rotation angles used when sampling revolved images in `R^3`.
pub const REVOLUTION_ANGLES: usize = 4;

/// Samples the image of the component `interval` of an axially symmetric
/// surface at `count` equispaced parameters. In `R^3` each section sample is
/// revolved to `REVOLUTION_ANGLES` angles; the normal of the revolved image
/// is `(−ν₂ cos φ, −ν₂ sin φ, ν₁)`.
pub fn sample_component_image(
    surface: &Surface,
    interval: Interval,
    count: usize,
) -> Result<ImageSampling> {
    let section = surface.section()?;
    let mut out = ImageSampling::default();
    let spatial = surface.ambient_dim() == 3;
    for t in interval.sample(count, 0.0) {
        let j = section.jet(t);
        if j.pole_moment().abs() < IMAGE_DENOM_CUTOFF {
            out.excluded.push(t);
            continue;
        }
        let [c, r] = phi_profile(&section, t)?;
        let dir = match phi_tangent_direction(&section, t) {
            Ok(d) => d,
            Err(Error::NotRegular { .. }) => {
                out.not_regular.push(t);
                continue;
            }
            Err(e) => return Err(e),
        };
        let [n1, n2] = [-dir.nu[1], dir.nu[0]];
        if spatial {
            for a in 0..REVOLUTION_ANGLES {
                let phi = 2.0 * PI * a as f64 / REVOLUTION_ANGLES as f64;
                let (sp, cp) = phi.sin_cos();
                out.samples.push(ImageSample {
                    param: SurfaceParam::new(t, phi),
                    point: vec![c * cp, c * sp, r],
                    normal: vec![n1 * cp, n1 * sp, n2],
                });
            }
        } else {
            out.samples.push(ImageSample {
                param: SurfaceParam::planar(t),
                point: vec![c, r],
                normal: vec![n1, n2],
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Quadric `A(y_{n+1} ± B)² − C(ω̂*·ȳ)² − D(|ȳ|² − (ω̂*·ȳ)²) = 1` proposed for
/// the image of the sphere `|x − λω| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidModel {
    pub q: f64,
    pub p: f64,
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Unit direction of `(ω₁, …, ω_n)`, or zero when that part vanishes.
    pub omega_hat: Vec<f64>,
}

pub fn hyperboloid_model(lambda: f64, omega: &[f64], r: f64) -> Result<HyperboloidModel> {
    if omega.len() < 2 || (norm(omega) - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument("omega must be a unit vector".into()));
    }
    if !(lambda >= 0.0 && r >= 0.0) {
        return Err(Error::InvalidArgument("need lambda >= 0 and r >= 0".into()));
    }
    if r >= 1.0 - lambda - CONTAINMENT_MARGIN {
        return Err(Error::NotContained {
            max_norm: lambda + r,
        });
    }
    let n = omega.len() - 1;
    let wl = omega[n];
    let q = ((1.0 - r + lambda * wl) / (1.0 + r - lambda * wl)).sqrt();
    let p = ((1.0 + r + lambda * wl) / (1.0 - r - lambda * wl)).sqrt();
    let l = r + lambda * (1.0 - wl * wl).max(0.0).sqrt();
    let a = 4.0 / ((q + p) * (q + p));
    let b = (q - p) / 2.0;
    let c = ((1.0 - l * l).sqrt() - b * l).powi(2) * a - l * l;
    let d = ((1.0 - r * r).sqrt() - b * r).powi(2) * a - r * r;
    let star = &omega[..n];
    let star_len = norm(star);
    let omega_hat = if star_len > UNIT_TOL {
        star.iter().map(|w| w / star_len).collect()
    } else {
        vec![0.0; n]
    };
    Ok(HyperboloidModel {
        q,
        p,
        l,
        a,
        b,
        c,
        d,
        omega_hat,
    })
}

impl HyperboloidModel {
    pub fn branch_residual(&self, y: &[f64], branch: Branch) -> f64 {
        let n = y.len() - 1;
        let bar = &y[..n];
        let along = dot(&self.omega_hat, bar);
        let shifted = y[n] + branch.sign() * self.b;
        self.a * shifted * shifted
            - self.c * along * along
            - self.d * (norm_sq(bar) - along * along)
            - 1.0
    }

    /// Residual on the branch with the smaller magnitude.
    pub fn residual(&self, y: &[f64]) -> (f64, Branch) {
        let plus = self.branch_residual(y, Branch::Plus);
        let minus = self.branch_residual(y, Branch::Minus);
        if plus.abs() <= minus.abs() {
            (plus, Branch::Plus)
        } else {
            (minus, Branch::Minus)
        }
    }

    /// Gradient of the quadric on one branch.
    pub fn normal(&self, y: &[f64], branch: Branch) -> Vec<f64> {
        let n = y.len() - 1;
        let bar = &y[..n];
        let along = dot(&self.omega_hat, bar);
        let mut g: Vec<f64> = (0..n)
            .map(|i| -2.0 * self.d * bar[i] - 2.0 * (self.c - self.d) * along * self.omega_hat[i])
            .collect();
        g.push(2.0 * self.a * (y[n] + branch.sign() * self.b));
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{OffsetSphere, ProfileCurve, RevolutionSurface};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn psi_examples() {
        let s = psi_map(&SubsphereParam::new(vec![1.0, 0.0, 0.0], 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(s.center[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.radius, 3f64.sqrt(), epsilon = 1e-15);
        let a = psi_map_signed(&[0.6, 0.0, -0.8], 0.3).unwrap();
        let b = psi_map_signed(&[-0.6, 0.0, 0.8], -0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn psi1_examples() {
        let s = psi1_map(&[0.0, 0.0, -0.5]).unwrap();
        assert_eq!(s.center, vec![0.0, 0.0]);
        assert_abs_diff_eq!(s.radius, 1.0 / 3f64.sqrt(), epsilon = 1e-15);

        let s = psi1_map(&[0.0, 0.0, 0.4]).unwrap();
        assert_abs_diff_eq!(s.radius, 0.4 * 0.84f64.sqrt() / 0.24, epsilon = 1e-14);
        assert!(hyperboloid_level(&s) > 1.0);

        assert_eq!(psi1_map(&[0.0, 0.0, 0.0]), Err(Error::OriginUndefined));
        assert_eq!(psi1_map(&[0.0, 0.0, 1.0]), Err(Error::OutsideBall));
        assert_eq!(psi1_map(&[0.0, 0.5, 0.5]), Err(Error::OnS0));
    }

    #[test]
    fn jacobian_example() {
        let j = psi1_jacobian_det(&[0.0, 0.0, -0.5]).unwrap();
        assert_abs_diff_eq!(j, 0.5 / (0.75f64.powi(3) * 0.75f64.sqrt()), epsilon = 1e-14);
        assert_abs_diff_eq!(j, 1.36854, epsilon = 1e-5);
    }

    #[test]
    fn sphere_maps() {
        let s = Surface::Sphere(OffsetSphere::centered(0.5, 3).unwrap());
        let top = SurfaceParam::new(FRAC_PI_2, 0.0);
        let img = phi_sigma(&s, top).unwrap();
        assert_abs_diff_eq!(img.radius, 3f64.sqrt(), epsilon = 1e-14);
        let y = img.as_point();
        let res = (y[2] - 1.0 / 3f64.sqrt()).powi(2) - y[0] * y[0] - y[1] * y[1] - 4.0 / 3.0;
        assert_abs_diff_eq!(res, 0.0, epsilon = 1e-14);

        let foot = psi0_map(&s, SurfaceParam::new(0.3, 1.1)).unwrap();
        let x = s.point(SurfaceParam::new(0.3, 1.1));
        for i in 0..3 {
            assert_abs_diff_eq!(foot[i], x[i], epsilon = 1e-15);
        }

        let singular = SurfaceParam::new(0.5f64.asin(), 0.0);
        assert_eq!(phi_sigma(&s, singular), Err(Error::OnSingularSet));
        assert_eq!(psi0_map(&s, singular), Err(Error::OnSigma0));
    }

    #[test]
    fn profile_image_top_of_circle() {
        let c = ProfileCurve::offset_circle([0.0, 0.0], 0.5).unwrap();
        let [x, t] = phi_profile(&c, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t, 3f64.sqrt(), epsilon = 1e-14);
        assert!(matches!(
            phi_profile(&c, 0.5f64.asin()),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn lambda_zero_constants() {
        for r in [0.3, 0.5, 0.7] {
            let m = hyperboloid_model(0.0, &[0.0, 0.0, 1.0], r).unwrap();
            let one = 1.0 - r * r;
            assert_abs_diff_eq!(m.a, one, epsilon = 1e-12);
            assert_abs_diff_eq!(m.c, one, epsilon = 1e-12);
            assert_abs_diff_eq!(m.d, one, epsilon = 1e-12);
            assert_abs_diff_eq!(m.b, -r / one.sqrt(), epsilon = 1e-12);
        }
        assert!(matches!(
            hyperboloid_model(0.3, &[0.0, 1.0], 0.7),
            Err(Error::NotContained { .. })
        ));
    }

    #[test]
    fn defect_examples() {
        assert_abs_diff_eq!(spacelike_defect(&[0.0, 0.0, 1.0]), 1.0);
        assert_abs_diff_eq!(spacelike_defect(&[-2.0, 0.0, 1.0]), -0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(spacelike_defect(&[0.0, 0.0]), -1.0);
    }

    #[test]
    fn three_lobe_upper_image_is_spacelike() {
        let s = Surface::Revolution(RevolutionSurface::new(ProfileCurve::three_lobe(), 2).unwrap());
        let d = crate::surfaces::decompose(&s).unwrap();
        let sampling = sample_component_image(&s, d.upper(), 200).unwrap();
        assert!(spacelike_verify(&sampling.samples).passed);
    }

    #[test]
    fn empty_report_fails() {
        assert!(!spacelike_verify(&[]).passed);
    }
}
