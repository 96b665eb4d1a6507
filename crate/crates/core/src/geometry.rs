// SPDX-License-Identifier: Apache-2.0

//! Ambient points, subspheres of the unit sphere, Euclidean spheres and the
//! stereographic projection from the north pole.
//!
//! Points of the unit sphere live in `R^{n+1}` with `n ∈ {1, 2}`; their
//! stereographic images live in `R^n`. The north pole is the last unit axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{MIN_NODES, SPHERE_MEMBERSHIP_TOL, UNIT_TOL};
use crate::vector::{all_finite, cross, dot, norm, norm_sq};

/// Returns `n` for an ambient dimension `n + 1`, rejecting anything but 2 or 3.
pub fn sphere_dim(ambient_dim: usize) -> Result<usize> {
    match ambient_dim {
        2 | 3 => Ok(ambient_dim - 1),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// A point of `R^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AmbientPoint {
    coords: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        sphere_dim(coords.len())?;
        if !all_finite(&coords) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// The north pole `e_{n+1}`.
    pub fn north_pole(ambient_dim: usize) -> Result<Self> {
        sphere_dim(ambient_dim)?;
        let mut coords = vec![0.0; ambient_dim];
        coords[ambient_dim - 1] = 1.0;
        Ok(Self { coords })
    }

    pub fn south_pole(ambient_dim: usize) -> Result<Self> {
        let mut p = Self::north_pole(ambient_dim)?;
        p.coords[ambient_dim - 1] = -1.0;
        Ok(p)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Last coordinate, the height along the symmetry axis.
    pub fn height(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl TryFrom<Vec<f64>> for AmbientPoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<AmbientPoint> for Vec<f64> {
    fn from(p: AmbientPoint) -> Self {
        p.coords
    }
}

/// The subsphere `{x ∈ S^n : x·ψ = ρ}`, i.e. the unit sphere cut by the
/// hyperplane `H_{ψ,ρ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsphereParam {
    psi: Vec<f64>,
    rho: f64,
}

impl SubsphereParam {
    pub fn new(psi: Vec<f64>, rho: f64) -> Result<Self> {
        sphere_dim(psi.len())?;
        if !all_finite(&psi) || !rho.is_finite() {
            return Err(Error::NonFinite);
        }
        let len = norm(&psi);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidSubsphere(format!("|psi| = {len} is not 1")));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidSubsphere(format!(
                "rho = {rho} outside [0, 1)"
            )));
        }
        Ok(Self { psi, rho })
    }

    /// Builds the subsphere cut by the plane `{x : x·normal = offset}`, with
    /// the normal rescaled to unit length and its sign chosen so `ρ ≥ 0`.
    pub fn from_plane(normal: &[f64], offset: f64) -> Result<Self> {
        let len = norm(normal);
        if !(len > UNIT_TOL) || !len.is_finite() {
            return Err(Error::InvalidSubsphere("zero plane normal".into()));
        }
        let sign = if offset < 0.0 { -1.0 } else { 1.0 };
        let psi = normal.iter().map(|c| sign * c / len).collect();
        Self::new(psi, sign * offset / len)
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn ambient_dim(&self) -> usize {
        self.psi.len()
    }

    /// Radius `sqrt(1 - ρ²)` of the subsphere inside its hyperplane.
    pub fn inner_radius(&self) -> f64 {
        (1.0 - self.rho * self.rho).sqrt()
    }

    /// `ρ - ψ_{n+1}`; zero exactly when the subsphere contains the north pole.
    pub fn pole_gap(&self) -> f64 {
        self.rho - self.psi[self.psi.len() - 1]
    }

    /// Signed distance of `x` from the hyperplane `H_{ψ,ρ}`.
    pub fn plane_offset(&self, x: &[f64]) -> f64 {
        dot(x, &self.psi) - self.rho
    }
}

/// The sphere `S^{n-1}(center, radius)` in `R^n`, also read as the point
/// `(center, radius)` of `R^n × R^+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanSphere {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl EuclideanSphere {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !all_finite(&center) || !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if radius < 0.0 {
            return Err(Error::InvalidArgument(format!("negative radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// The sphere as a point of `R^n × R^+`.
    pub fn as_point(&self) -> Vec<f64> {
        let mut p = self.center.clone();
        p.push(self.radius);
        p
    }

    /// Membership in the open ball `B_n(center, radius)`.
    pub fn ball_contains(&self, y: &[f64]) -> bool {
        crate::vector::distance(y, &self.center) < self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapSide {
    Below,
    Above,
}

/// The spherical cap `{x ∈ S^n : x_{n+1} < h}` (or `> h`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapRegion {
    pub axis_height: f64,
    pub side: CapSide,
}

impl CapRegion {
    pub fn new(axis_height: f64, side: CapSide) -> Result<Self> {
        if !(axis_height > -1.0 && axis_height < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cap height {axis_height} outside (-1, 1)"
            )));
        }
        Ok(Self { axis_height, side })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let h = x[x.len() - 1];
        match self.side {
            CapSide::Below => h < self.axis_height,
            CapSide::Above => h > self.axis_height,
        }
    }
}

/// `Λ(x) = (x_1, …, x_n) / (1 - x_{n+1})`.
pub fn stereo_forward(x: &AmbientPoint) -> Result<Vec<f64>> {
    let len = x.norm();
    if (len - 1.0).abs() > SPHERE_MEMBERSHIP_TOL {
        return Err(Error::NotOnSphere { norm: len });
    }
    let h = x.height();
    if h >= 1.0 - UNIT_TOL {
        return Err(Error::NorthPoleSingular);
    }
    let c = x.coords();
    let star = &c[..c.len() - 1];
    if h > 0.0 {
        // 1 − h = |x*|²/(1 + h) on the sphere, without cancellation near the pole.
        let q = norm_sq(star);
        if q == 0.0 {
            return Err(Error::NorthPoleSingular);
        }
        let scale = (1.0 + h) / q;
        return Ok(star.iter().map(|xi| xi * scale).collect());
    }
    Ok(star.iter().map(|xi| xi / (1.0 - h)).collect())
}

/// `Λ⁻¹(y) = (2y, |y|² - 1) / (1 + |y|²)`.
pub fn stereo_inverse(y: &[f64]) -> Result<AmbientPoint> {
    sphere_dim(y.len() + 1)?;
    if !all_finite(y) {
        return Err(Error::NonFinite);
    }
    Ok(AmbientPoint {
        coords: stereo_inverse_raw(y),
    })
}

pub(crate) fn stereo_inverse_raw(y: &[f64]) -> Vec<f64> {
    let q = norm_sq(y);
    let denom = 1.0 + q;
    let mut out: Vec<f64> = y.iter().map(|yi| 2.0 * yi / denom).collect();
    out.push((q - 1.0) / denom);
    out
}

/// Stereographic image of a subsphere avoiding the north pole:
/// center `ψ*/(ρ - ψ_{n+1})`, radius `sqrt(1 - ρ²)/|ρ - ψ_{n+1}|`.
pub fn subsphere_image(s: &SubsphereParam) -> Result<EuclideanSphere> {
    let gap = s.pole_gap();
    if gap.abs() < UNIT_TOL {
        return Err(Error::PassesThroughNorthPole { gap: gap.abs() });
    }
    let psi = s.psi();
    let center = psi[..psi.len() - 1].iter().map(|p| p / gap).collect();
    Ok(EuclideanSphere {
        center,
        radius: s.inner_radius() / gap.abs(),
    })
}

/// Density `dS/dS*` of the subsphere measure pulled back to `R^n`:
/// `2^{n-1} / (1 + |y|²)^{n-1}`.
pub fn measure_weight(y: &[f64]) -> f64 {
    let n = y.len() as i32;
    (2.0 / (1.0 + norm_sq(y))).powi(n - 1)
}

/// Deterministic orthonormal basis `{u, v}` of `ψ⊥` in `R^3`: Gram–Schmidt
/// against the axis least aligned with `ψ` (lowest index on ties), and
/// `v = ψ × u`.
pub fn orthonormal_frame(psi: &[f64]) -> ([f64; 3], [f64; 3]) {
    let mut axis = 0;
    for i in 1..3 {
        if psi[i].abs() < psi[axis].abs() {
            axis = i;
        }
    }
    let mut u = [0.0; 3];
    u[axis] = 1.0;
    let proj = psi[axis];
    for i in 0..3 {
        u[i] -= proj * psi[i];
    }
    let len = norm(&u);
    for c in &mut u {
        *c /= len;
    }
    let v = cross(psi, &u);
    (u, v)
}

/// A weighted quadrature node on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereNode {
    pub point: AmbientPoint,
    pub weight: f64,
}

/// A weighted quadrature node in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneNode {
    pub point: Vec<f64>,
    pub weight: f64,
}

fn check_count(count: usize) -> Result<()> {
    if count < MIN_NODES {
        return Err(Error::InvalidArgument(format!(
            "node count {count} below minimum {MIN_NODES}"
        )));
    }
    Ok(())
}

/// Quadrature nodes on a subsphere.
///
/// For `n = 2` this is the periodic trapezoid rule with `count` equispaced
/// nodes on the circle `ρψ + sqrt(1-ρ²)(cos θ u + sin θ v)`; for `n = 1` the
/// subsphere is a point pair and each point carries weight 1.
pub fn subsphere_nodes(s: &SubsphereParam, count: usize) -> Result<Vec<SphereNode>> {
    let psi = s.psi();
    let rho = s.rho();
    let r = s.inner_radius();
    match psi.len() {
        2 => {
            let u = [psi[1], -psi[0]];
            Ok([1.0, -1.0]
                .iter()
                .map(|sign| SphereNode {
                    point: AmbientPoint {
                        coords: vec![
                            rho * psi[0] + sign * r * u[0],
                            rho * psi[1] + sign * r * u[1],
                        ],
                    },
                    weight: 1.0,
                })
                .collect())
        }
        3 => {
            check_count(count)?;
            let (u, v) = orthonormal_frame(psi);
            let weight = 2.0 * PI * r / count as f64;
            Ok((0..count)
                .map(|k| {
                    let (sin, cos) = (2.0 * PI * k as f64 / count as f64).sin_cos();
                    let coords = (0..3)
                        .map(|i| rho * psi[i] + r * (cos * u[i] + sin * v[i]))
                        .collect();
                    SphereNode {
                        point: AmbientPoint { coords },
                        weight,
                    }
                })
                .collect())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Quadrature nodes on a Euclidean sphere in `R^n`: the trapezoid rule on a
/// circle for `n = 2`, the two points `x ± t` with unit weights for `n = 1`.
pub fn sphere_nodes(sphere: &EuclideanSphere, count: usize) -> Result<Vec<PlaneNode>> {
    let c = &sphere.center;
    let t = sphere.radius;
    match c.len() {
        1 => Ok(vec![
            PlaneNode {
                point: vec![c[0] - t],
                weight: 1.0,
            },
            PlaneNode {
                point: vec![c[0] + t],
                weight: 1.0,
            },
        ]),
        2 => {
            check_count(count)?;
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(
                    "circle radius must be positive".into(),
                ));
            }
            let weight = 2.0 * PI * t / count as f64;
            Ok((0..count)
                .map(|k| {
                    let (sin, cos) = (2.0 * PI * k as f64 / count as f64).sin_cos();
                    PlaneNode {
                        point: vec![c[0] + t * cos, c[1] + t * sin],
                        weight,
                    }
                })
                .collect())
        }
        d => Err(Error::UnsupportedDimension(d + 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(c: &[f64]) -> AmbientPoint {
        AmbientPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(
            stereo_forward(&pt(&[0.0, 0.0, -1.0])).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            stereo_forward(&pt(&[1.0, 0.0, 0.0])).unwrap(),
            vec![1.0, 0.0]
        );
        let y = stereo_forward(&pt(&[0.6, 0.0, 0.8])).unwrap();
        assert_abs_diff_eq!(y[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(y[1], 0.0);
    }

    #[test]
    fn forward_errors() {
        assert_eq!(
            stereo_forward(&pt(&[0.0, 0.0, 1.0])),
            Err(Error::NorthPoleSingular)
        );
        assert!(matches!(
            stereo_forward(&pt(&[0.5, 0.0, 0.0])),
            Err(Error::NotOnSphere { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            stereo_inverse(&[0.0, 0.0]).unwrap().coords(),
            &[0.0, 0.0, -1.0]
        );
        assert_eq!(
            stereo_inverse(&[1.0, 0.0]).unwrap().coords(),
            &[1.0, 0.0, 0.0]
        );
        let x = stereo_inverse(&[3.0, 0.0]).unwrap();
        assert_abs_diff_eq!(x.coords()[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(x.coords()[2], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn subsphere_image_examples() {
        let e3 = vec![0.0, 0.0, 1.0];
        let img = subsphere_image(&SubsphereParam::new(e3.clone(), 0.0).unwrap()).unwrap();
        assert_eq!(img.center, vec![0.0, 0.0]);
        assert_abs_diff_eq!(img.radius, 1.0);

        let img = subsphere_image(&SubsphereParam::new(e3, 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(img.radius, 3f64.sqrt(), epsilon = 1e-14);

        let img =
            subsphere_image(&SubsphereParam::new(vec![0.0, 0.0, -1.0], 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(img.radius, 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(img.center[0].abs(), 0.0);
    }

    #[test]
    fn subsphere_through_pole_rejected() {
        let s = SubsphereParam::new(vec![0.6, 0.0, 0.8], 0.8).unwrap();
        assert!(matches!(
            subsphere_image(&s),
            Err(Error::PassesThroughNorthPole { .. })
        ));
    }

    #[test]
    fn subsphere_validation() {
        assert!(SubsphereParam::new(vec![0.0, 0.0, 2.0], 0.1).is_err());
        assert!(SubsphereParam::new(vec![0.0, 0.0, 1.0], 1.0).is_err());
        assert!(SubsphereParam::new(vec![0.0, 0.0, 1.0], -0.1).is_err());
        let s = SubsphereParam::from_plane(&[0.0, 0.0, -2.0], -1.0).unwrap();
        assert_eq!(s.psi(), &[0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(s.rho(), 0.5);
    }

    #[test]
    fn measure_weight_examples() {
        assert_abs_diff_eq!(measure_weight(&[0.0, 0.0]), 2.0);
        assert_abs_diff_eq!(measure_weight(&[1.0, 0.0]), 1.0);
        assert_abs_diff_eq!(measure_weight(&[0.0, 3.0]), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(measure_weight(&[5.0]), 1.0);
    }

    #[test]
    fn equator_nodes() {
        let s = SubsphereParam::new(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        let nodes = subsphere_nodes(&s, 4).unwrap();
        assert_eq!(nodes.len(), 4);
        for n in &nodes {
            assert_abs_diff_eq!(n.weight, PI / 2.0, epsilon = 1e-15);
            assert_abs_diff_eq!(n.point.height(), 0.0);
            assert_abs_diff_eq!(n.point.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_point_subsphere() {
        let s = SubsphereParam::new(vec![0.0, 1.0], 0.0).unwrap();
        let nodes = subsphere_nodes(&s, 512).unwrap();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].point.coords(), &[1.0, 0.0]);
        assert_eq!(nodes[1].point.coords(), &[-1.0, 0.0]);
        assert!(nodes.iter().all(|n| n.weight == 1.0));
    }

    #[test]
    fn plane_nodes() {
        let s = EuclideanSphere::new(vec![0.0, 0.0], 1.0).unwrap();
        let nodes = sphere_nodes(&s, 4).unwrap();
        assert!(nodes.iter().all(|n| (n.weight - PI / 2.0).abs() < 1e-15));

        let s = EuclideanSphere::new(vec![0.5], 0.25).unwrap();
        let nodes = sphere_nodes(&s, 512).unwrap();
        assert_eq!(nodes[0].point, vec![0.25]);
        assert_eq!(nodes[1].point, vec![0.75]);

        let s = EuclideanSphere::new(vec![1.0, -2.0], 0.7).unwrap();
        let total: f64 = sphere_nodes(&s, 37).unwrap().iter().map(|n| n.weight).sum();
        assert_abs_diff_eq!(total, 2.0 * PI * 0.7, epsilon = 1e-13);
        assert!(sphere_nodes(&EuclideanSphere::new(vec![0.0, 0.0], 0.0).unwrap(), 8).is_err());
    }

    #[test]
    fn too_few_nodes() {
        let s = SubsphereParam::new(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        assert!(subsphere_nodes(&s, 3).is_err());
    }

    #[test]
    fn frame_is_orthonormal() {
        for psi in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [1.0 / 3f64.sqrt(); 3]] {
            let (u, v) = orthonormal_frame(&psi);
            assert_abs_diff_eq!(dot(&u, &psi), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(dot(&v, &psi), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(dot(&u, &v), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(norm(&u), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(norm(&v), 1.0, epsilon = 1e-15);
        }
        // Ties go to the lowest index.
        let (u, _) = orthonormal_frame(&[0.0, 0.0, 1.0]);
        assert_eq!(u, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn cap_region() {
        let cap = CapRegion::new(-0.5, CapSide::Below).unwrap();
        assert!(cap.contains(&[0.0, 0.0, -1.0]));
        assert!(!cap.contains(&[1.0, 0.0, 0.0]));
        assert!(CapRegion::new(1.0, CapSide::Below).is_err());
    }
}
