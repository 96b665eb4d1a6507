// SPDX-License-Identifier: Apache-2.0

//! JSON configuration for surfaces and sphere fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::SphereField;
use crate::surfaces::{OffsetSphere, ProfileCurve, RevolutionSurface, Surface};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub ambient_dim: usize,
    pub surface: SurfaceSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    PolarTrigProfile {
        scale: f64,
        base: f64,
        amp: f64,
        freq: f64,
        phase: f64,
        #[serde(default)]
        vertical_shift: f64,
    },
    OffsetSphere {
        lambda: f64,
        omega: Vec<f64>,
        radius: f64,
    },
}

fn invalid(location: impl Into<String>, err: impl ToString) -> Error {
    Error::ConfigInvalid {
        location: location.into(),
        message: err.to_string(),
    }
}

fn json_error(err: serde_json::Error) -> Error {
    invalid(format!("line {} column {}", err.line(), err.column()), err)
}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn build(&self) -> Result<Surface> {
        let dim = self.ambient_dim;
        if dim != 2 && dim != 3 {
            return Err(invalid(
                "ambient_dim",
                format!("expected 2 or 3, got {dim}"),
            ));
        }
        match &self.surface {
            SurfaceSpec::PolarTrigProfile {
                scale,
                base,
                amp,
                freq,
                phase,
                vertical_shift,
            } => {
                let profile =
                    ProfileCurve::polar_trig(*scale, *base, *amp, *freq, *phase, *vertical_shift)
                        .map_err(|e| invalid("surface", e))?;
                RevolutionSurface::new(profile, dim)
                    .map(Surface::Revolution)
                    .map_err(|e| invalid("surface", e))
            }
            SurfaceSpec::OffsetSphere {
                lambda,
                omega,
                radius,
            } => {
                if omega.len() != dim {
                    return Err(invalid(
                        "surface.omega",
                        format!("expected {dim} entries, got {}", omega.len()),
                    ));
                }
                OffsetSphere::new(*lambda, omega.clone(), *radius)
                    .map(Surface::Sphere)
                    .map_err(|e| invalid("surface", e))
            }
        }
    }

    pub fn three_lobe() -> Self {
        Self {
            ambient_dim: 2,
            surface: SurfaceSpec::PolarTrigProfile {
                scale: 0.9,
                base: 0.5,
                amp: 0.2,
                freq: 3.0,
                phase: 3.1,
                vertical_shift: 0.0,
            },
        }
    }

    pub fn centered_sphere(radius: f64, ambient_dim: usize) -> Self {
        let mut omega = vec![0.0; ambient_dim];
        omega[ambient_dim - 1] = 1.0;
        Self {
            ambient_dim,
            surface: SurfaceSpec::OffsetSphere {
                lambda: 0.0,
                omega,
                radius,
            },
        }
    }
}

/// Parses and builds a surface from JSON text.
pub fn load_surface(text: &str) -> Result<Surface> {
    SurfaceConfig::parse(text)?.build()
}

/// Parses a sphere field and validates it against the ambient dimension.
pub fn load_field(text: &str, ambient_dim: usize) -> Result<SphereField> {
    let field: SphereField = serde_json::from_str(text).map_err(json_error)?;
    field
        .validate(ambient_dim)
        .map_err(|e| invalid("field", e))?;
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let s = load_surface(
            r#"{"ambient_dim": 2, "surface": {"kind": "polar_trig_profile", "scale": 0.9,
                "base": 0.5, "amp": 0.2, "freq": 3, "phase": 3.1, "vertical_shift": 0}}"#,
        )
        .unwrap();
        assert_eq!(s.ambient_dim(), 2);
        let s = load_surface(
            r#"{"ambient_dim": 3, "surface": {"kind": "offset_sphere", "lambda": 0.2,
                "omega": [0, 0, 1], "radius": 0.3}}"#,
        )
        .unwrap();
        assert!(s.is_axially_symmetric());
    }

    #[test]
    fn reports_location() {
        let err = load_surface("{\n  \"ambient_dim\": 2,\n  \"surface\": {\"kind\": \"torus\"}\n}")
            .unwrap_err();
        match err {
            Error::ConfigInvalid { location, .. } => assert!(location.starts_with("line 3")),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            load_surface(
                r#"{"ambient_dim": 4, "surface": {"kind": "offset_sphere",
                "lambda": 0, "omega": [0,0,0,1], "radius": 0.3}}"#
            ),
            Err(Error::ConfigInvalid { .. })
        ));
        assert!(matches!(
            load_surface(
                r#"{"ambient_dim": 2, "surface": {"kind": "offset_sphere",
                "lambda": 0.5, "omega": [0,1], "radius": 0.6}}"#
            ),
            Err(Error::ConfigInvalid { .. })
        ));
    }

    #[test]
    fn field_validation() {
        assert!(load_field(r#"{"kind": "coordinate", "index": 3}"#, 3).is_ok());
        assert!(matches!(
            load_field(r#"{"kind": "coordinate", "index": 3}"#, 2),
            Err(Error::ConfigInvalid { .. })
        ));
    }
}
