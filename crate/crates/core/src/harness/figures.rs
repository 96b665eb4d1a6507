// SPDX-License-Identifier: Apache-2.0

//! Plot data for the profile, projection-set, image and hyperboloid figures.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{inside_s0, phi_profile, psi1_map};
use crate::surfaces::{
    cone_height, decompose, projection_set, PlanarCurve, ProfileCurve, RevolutionSurface, Surface,
};
use crate::tol::IMAGE_DENOM_CUTOFF;
use crate::vector::norm_sq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigureId {
    /// Components of a revolved profile.
    Components,
    /// Components, tangent cone and projection set.
    ProjectionSet,
    /// Planar components and their images.
    Images,
    /// The sphere `S₀`, the unit hyperboloid and classified `Ψ₁` images.
    Hyperboloid,
}

impl FigureId {
    pub fn number(self) -> u8 {
        match self {
            Self::Components => 1,
            Self::ProjectionSet => 3,
            Self::Images => 4,
            Self::Hyperboloid => 5,
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Self::Components),
            "3" => Ok(Self::ProjectionSet),
            "4" => Ok(Self::Images),
            "5" => Ok(Self::Hyperboloid),
            _ => Err(Error::ConfigInvalid {
                location: "which".into(),
                message: format!("unknown figure {s:?}; expected 1, 3, 4 or 5"),
            }),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub component: Option<usize>,
    pub color: String,
    /// `(parameter, coordinates)` pairs.
    pub points: Vec<(f64, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureDataset {
    pub figure: FigureId,
    /// Number of coordinate columns.
    pub dim: usize,
    pub series: Vec<Series>,
}

impl FigureDataset {
    pub fn series_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Series> + 'a {
        self.series.iter().filter(move |s| s.name == name)
    }

    /// CSV with header `series,component,param,x1,…,xk`. Floats carry 17
    /// significant digits; a missing component is left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,component,param");
        for k in 1..=self.dim {
            write!(out, ",x{k}").unwrap();
        }
        out.push('\n');
        for s in &self.series {
            let component = s.component.map(|c| c.to_string()).unwrap_or_default();
            for (param, coords) in &s.points {
                write!(out, "{},{component},{param:.16e}", s.name).unwrap();
                for c in coords {
                    write!(out, ",{c:.16e}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

fn lowered_default() -> Result<Surface> {
    RevolutionSurface::new(ProfileCurve::three_lobe_lowered(), 3).map(Surface::Revolution)
}

fn planar_default() -> Result<Surface> {
    RevolutionSurface::new(ProfileCurve::three_lobe(), 2).map(Surface::Revolution)
}

/// Samples `resolution` points of the requested figure. Without a surface
/// each figure uses its own default profile; the hyperboloid figure ignores
/// the surface.
pub fn emit_figure(
    id: FigureId,
    surface: Option<&Surface>,
    resolution: usize,
) -> Result<FigureDataset> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(
            "figure resolution must be at least 2".into(),
        ));
    }
    let owned;
    let surface = match (id, surface) {
        (FigureId::Hyperboloid, _) => return Ok(hyperboloid_figure(resolution)),
        (_, Some(s)) => s,
        (FigureId::Images, None) => {
            owned = planar_default()?;
            &owned
        }
        (_, None) => {
            owned = lowered_default()?;
            &owned
        }
    };
    let series = match id {
        FigureId::Components => component_series(surface, resolution, true)?,
        FigureId::ProjectionSet => {
            let mut s = component_series(surface, resolution, true)?;
            s.extend(projection_series(surface, resolution)?);
            s
        }
        FigureId::Images => {
            let mut s = component_series(surface, resolution, false)?;
            s.extend(image_series(surface, resolution)?);
            s
        }
        FigureId::Hyperboloid => unreachable!("handled above"),
    };
    Ok(FigureDataset {
        figure: id,
        dim: 2,
        series,
    })
}

fn color(highlight: bool) -> String {
    if highlight { "red" } else { "gray" }.into()
}

/// One series per component of the section; the upper component (or, for
/// `by_upper == false`, every regular one) is tagged red.
fn component_series(surface: &Surface, resolution: usize, by_upper: bool) -> Result<Vec<Series>> {
    let section = surface.section()?;
    let d = decompose(surface)?;
    Ok(d.components
        .iter()
        .enumerate()
        .map(|(i, c)| Series {
            name: "component".into(),
            component: Some(i),
            color: color(if by_upper {
                i == d.upper_index
            } else {
                d.regular_flags[i]
            }),
            points: c
                .sample(resolution, 0.0)
                .into_iter()
                .map(|t| (t, section.point(t).to_vec()))
                .collect(),
        })
        .collect())
}

fn image_series(surface: &Surface, resolution: usize) -> Result<Vec<Series>> {
    let section = surface.section()?;
    let d = decompose(surface)?;
    d.components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut points = Vec::new();
            for t in c.sample(resolution, 0.0) {
                if section.jet(t).pole_moment().abs() < IMAGE_DENOM_CUTOFF {
                    continue;
                }
                points.push((t, phi_profile(&section, t)?.to_vec()));
            }
            Ok(Series {
                name: "image".into(),
                component: Some(i),
                color: color(d.regular_flags[i]),
                points,
            })
        })
        .collect()
}

/// Tangent-cone segments from the north pole through the boundary of the
/// upper component, and the arc of the unit circle below the cap height.
fn projection_series(surface: &Surface, resolution: usize) -> Result<Vec<Series>> {
    let section = surface.section()?;
    let d = decompose(surface)?;
    let cap = projection_set(&section, &d)?;
    let upper = d.upper();
    let mut series = Vec::new();
    for (k, t) in [upper.lo, upper.hi].into_iter().enumerate() {
        let b = section.point(t);
        let h = cone_height(b);
        let end = [b[0].signum() * (1.0 - h * h).max(0.0).sqrt(), h];
        series.push(Series {
            name: "cone".into(),
            component: Some(k),
            color: "black".into(),
            points: (0..resolution)
                .map(|j| {
                    let s = j as f64 / (resolution - 1) as f64;
                    (s, vec![end[0] * s, 1.0 + (end[1] - 1.0) * s])
                })
                .collect(),
        });
    }
    // Points of the unit circle with height at most the cap height.
    let half = (-cap.axis_height).clamp(-1.0, 1.0).acos();
    series.push(Series {
        name: "projection_set".into(),
        component: None,
        color: "blue".into(),
        points: (0..resolution)
            .map(|j| {
                let a = -half + 2.0 * half * j as f64 / (resolution - 1) as f64;
                (a, vec![a.sin(), -a.cos()])
            })
            .collect(),
    });
    Ok(series)
}

const HYPERBOLOID_EXTENT: f64 = 3.0;
const HYPERBOLOID_LEVEL_GAP: f64 = 1e-6;

/// The circle `S₀`, the hyperbola `t² − c² = 1`, and `Ψ₁` images of a polar
/// grid in the unit disk split by the side of `S₀` they come from.
fn hyperboloid_figure(resolution: usize) -> FigureDataset {
    let boundary = Series {
        name: "s0_boundary".into(),
        component: None,
        color: "black".into(),
        points: (0..resolution)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / resolution as f64;
                (a, vec![0.5 * a.sin(), 0.5 + 0.5 * a.cos()])
            })
            .collect(),
    };
    let hyperbola = Series {
        name: "hyperboloid".into(),
        component: None,
        color: "black".into(),
        points: (0..resolution)
            .map(|j| {
                let c = HYPERBOLOID_EXTENT * (2.0 * j as f64 / (resolution - 1) as f64 - 1.0);
                (c, vec![c, (1.0 + c * c).sqrt()])
            })
            .collect(),
    };
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for i in 0..resolution {
        let radius = (i as f64 + 0.5) / resolution as f64;
        for j in 0..resolution {
            let a = 2.0 * PI * (j as f64 + 0.5) / resolution as f64;
            let y = [radius * a.sin(), radius * a.cos()];
            if (norm_sq(&y) - y[1]).abs() < HYPERBOLOID_LEVEL_GAP {
                continue;
            }
            let Ok(image) = psi1_map(&y) else { continue };
            let point = (radius, vec![image.center[0], image.radius]);
            if inside_s0(&y) {
                inside.push(point);
            } else {
                outside.push(point);
            }
        }
    }
    let classified = |name: &str, points: Vec<(f64, Vec<f64>)>, above: bool| Series {
        name: name.into(),
        component: None,
        color: if above { "blue" } else { "red" }.into(),
        points,
    };
    FigureDataset {
        figure: FigureId::Hyperboloid,
        dim: 2,
        series: vec![
            boundary,
            hyperbola,
            classified("inside_image", inside, true),
            classified("outside_image", outside, false),
        ],
    }
}

/// Whether every `inside_image` point lies above the hyperbola and every
/// `outside_image` point below it.
pub fn hyperboloid_partition_holds(data: &FigureDataset) -> bool {
    let level = |p: &[f64]| p[1] * p[1] - p[0] * p[0];
    data.series_named("inside_image")
        .all(|s| s.points.iter().all(|(_, p)| level(p) > 1.0))
        && data
            .series_named("outside_image")
            .all(|s| s.points.iter().all(|(_, p)| level(p) < 1.0))
}
