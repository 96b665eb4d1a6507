// SPDX-License-Identifier: Apache-2.0

//! Scalar fields on the unit sphere and on `R^n`, linked by the weighted
//! stereographic pullback `g = 2^{n-1} f∘Λ⁻¹ / (1 + |y|²)^{n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{measure_weight, sphere_dim, stereo_inverse_raw};
use crate::tol::GEOM_TOL;
use crate::vector::{all_finite, distance, norm, norm_sq};

/// A field `f` on `S^n`, evaluated on points of `R^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SphereField {
    Constant {
        value: f64,
    },
    /// The coordinate `x_i`, with `index` counted from 1.
    Coordinate {
        index: usize,
    },
    /// `A·exp(1/s² − 1/(s² − |x − c|²))` on the chordal ball `|x − c| < s`,
    /// zero outside; the peak value at `c` is `A`.
    CapBump {
        center: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
    Sum {
        terms: Vec<SphereField>,
    },
}

/// A closed chordal ball `{x ∈ S^n : |x − center| ≤ radius}` containing
/// part of a field's support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportCap {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl SphereField {
    pub fn cap_bump(center: Vec<f64>, radius: f64, amplitude: f64) -> Self {
        Self::CapBump {
            center,
            radius,
            amplitude,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Coordinate { index } => x[index - 1],
            Self::CapBump {
                center,
                radius,
                amplitude,
            } => {
                let d2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                let s2 = radius * radius;
                if d2 >= s2 {
                    0.0
                } else {
                    amplitude * (1.0 / s2 - 1.0 / (s2 - d2)).exp()
                }
            }
            Self::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// Checks parameters against the ambient dimension.
    pub fn validate(&self, ambient_dim: usize) -> Result<()> {
        sphere_dim(ambient_dim)?;
        match self {
            Self::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            Self::Coordinate { index } => {
                if *index == 0 || *index > ambient_dim {
                    return Err(Error::InvalidArgument(format!(
                        "coordinate index {index} outside 1..={ambient_dim}"
                    )));
                }
            }
            Self::CapBump {
                center,
                radius,
                amplitude,
            } => {
                if center.len() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        got: center.len(),
                    });
                }
                if !all_finite(center) || !radius.is_finite() || !amplitude.is_finite() {
                    return Err(Error::NonFinite);
                }
                if (norm(center) - 1.0).abs() > GEOM_TOL {
                    return Err(Error::InvalidArgument(
                        "cap center must lie on the sphere".into(),
                    ));
                }
                if !(*radius > 0.0 && *radius <= 2.0) {
                    return Err(Error::InvalidArgument(format!(
                        "cap radius {radius} outside (0, 2]"
                    )));
                }
            }
            Self::Sum { terms } => {
                for t in terms {
                    t.validate(ambient_dim)?;
                }
            }
        }
        Ok(())
    }

    /// Caps covering the support, or `None` when the support is the whole
    /// sphere (or not bounded by caps).
    pub fn support_caps(&self) -> Option<Vec<SupportCap>> {
        match self {
            Self::Constant { value } if *value == 0.0 => Some(vec![]),
            Self::Constant { .. } | Self::Coordinate { .. } => None,
            Self::CapBump { amplitude, .. } if *amplitude == 0.0 => Some(vec![]),
            Self::CapBump { center, radius, .. } => Some(vec![SupportCap {
                center: center.clone(),
                radius: *radius,
            }]),
            Self::Sum { terms } => {
                let mut caps = Vec::new();
                for t in terms {
                    caps.extend(t.support_caps()?);
                }
                Some(caps)
            }
        }
    }

    /// Whether the support stays away from a neighborhood of the north pole.
    pub fn c0_compatible(&self, ambient_dim: usize) -> bool {
        let mut pole = vec![0.0; ambient_dim];
        pole[ambient_dim - 1] = 1.0;
        match self.support_caps() {
            Some(caps) => caps.iter().all(|c| distance(&pole, &c.center) > c.radius),
            None => false,
        }
    }
}

/// A field `g` on `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneField {
    Constant {
        value: f64,
    },
    /// `Σ_k coeffs[k]·|x|^{2k}`.
    Radial {
        coeffs: Vec<f64>,
    },
    /// Gaussian `A·exp(−|x − c|²/w²)`.
    Bump {
        center: Vec<f64>,
        width: f64,
        amplitude: f64,
    },
    /// The weighted stereographic pullback of a sphere field.
    Pullback {
        source: SphereField,
    },
}

impl PlaneField {
    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Radial { coeffs } => {
                let q = norm_sq(y);
                coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c)
            }
            Self::Bump {
                center,
                width,
                amplitude,
            } => {
                let d2: f64 = y.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                amplitude * (-d2 / (width * width)).exp()
            }
            Self::Pullback { source } => measure_weight(y) * source.eval(&stereo_inverse_raw(y)),
        }
    }
}

/// `g(y) = measure_weight(y)·f(Λ⁻¹(y))`.
pub fn pullback_field(f: &SphereField) -> PlaneField {
    PlaneField::Pullback { source: f.clone() }
}
