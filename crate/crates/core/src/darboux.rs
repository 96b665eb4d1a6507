// SPDX-License-Identifier: Apache-2.0

//! Normalized spherical means `Q(x, t) = t^{1-n}·Rg(x, t)` on a regular grid
//! and the finite-difference residual of
//! `L[Q] = Q_tt + ((n−1)/t)·Q_t − Δ_x Q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::PlaneField;
use crate::geometry::EuclideanSphere;
use crate::transforms::spherical_mean;

/// Smallest radius a grid may start at.
pub const MIN_GRID_RADIUS: f64 = 1e-3;

/// `Q` sampled on `x_lo + h·i` (each axis) × `t_lo + h·k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanGrid {
    pub x_lo: Vec<f64>,
    pub x_count: usize,
    pub t_lo: f64,
    pub t_count: usize,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl MeanGrid {
    pub fn build(
        g: &PlaneField,
        x_lo: &[f64],
        x_count: usize,
        t_lo: f64,
        t_count: usize,
        spacing: f64,
        nodes: usize,
    ) -> Result<Self> {
        let n = x_lo.len();
        if !(1..=2).contains(&n) {
            return Err(Error::UnsupportedDimension(n + 1));
        }
        if !(spacing > 0.0) || t_lo < spacing.max(MIN_GRID_RADIUS) {
            return Err(Error::InvalidArgument(format!(
                "grid must start at t >= max(h, {MIN_GRID_RADIUS}); got t = {t_lo}, h = {spacing}"
            )));
        }
        if x_count < 3 || t_count < 3 {
            return Err(Error::InvalidArgument(
                "grid needs at least 3 points per axis".into(),
            ));
        }
        let cells = x_count.pow(n as u32);
        let values = (0..cells * t_count)
            .into_par_iter()
            .map(|idx| {
                let k = idx % t_count;
                let cell = idx / t_count;
                let center: Vec<f64> = (0..n)
                    .map(|axis| {
                        let i = (cell / x_count.pow((n - 1 - axis) as u32)) % x_count;
                        x_lo[axis] + spacing * i as f64
                    })
                    .collect();
                let t = t_lo + spacing * k as f64;
                let mean = spherical_mean(g, &EuclideanSphere::new(center, t)?, nodes)?;
                Ok(mean * t.powi(1 - n as i32))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            x_lo: x_lo.to_vec(),
            x_count,
            t_lo,
            t_count,
            spacing,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_lo.len()
    }

    fn index(&self, ix: &[usize], k: usize) -> usize {
        let cell = ix.iter().fold(0, |acc, i| acc * self.x_count + i);
        cell * self.t_count + k
    }

    pub fn value(&self, ix: &[usize], k: usize) -> f64 {
        self.values[self.index(ix, k)]
    }

    /// Second-order central residual of `L[Q]` at an interior grid point.
    pub fn residual_at(&self, ix: &[usize], k: usize) -> f64 {
        let n = self.dim();
        let h = self.spacing;
        let h2 = h * h;
        let q = self.value(ix, k);
        let qp = self.value(ix, k + 1);
        let qm = self.value(ix, k - 1);
        let t = self.t_lo + h * k as f64;
        let mut res = (qp - 2.0 * q + qm) / h2 + (n as f64 - 1.0) / t * (qp - qm) / (2.0 * h);
        let mut shifted = ix.to_vec();
        for axis in 0..n {
            shifted[axis] = ix[axis] + 1;
            let up = self.value(&shifted, k);
            shifted[axis] = ix[axis] - 1;
            let down = self.value(&shifted, k);
            shifted[axis] = ix[axis];
            res -= (up - 2.0 * q + down) / h2;
        }
        res
    }
}

/// Residuals on a box grid with its one-cell margin, and the refinement
/// comparison between spacings `h` and `h/2` at shared points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DarbouxReport {
    pub coarse_spacing: f64,
    pub coarse_max: f64,
    pub fine_max: f64,
    /// `log2(coarse_max / fine_max)`; absent when either residual is zero.
    pub order: Option<f64>,
}

fn box_grid(
    g: &PlaneField,
    n: usize,
    x_range: (f64, f64),
    t_range: (f64, f64),
    h: f64,
    nodes: usize,
) -> Result<(MeanGrid, usize, usize)> {
    let mx = ((x_range.1 - x_range.0) / h).round() as usize;
    let mt = ((t_range.1 - t_range.0) / h).round() as usize;
    let grid = MeanGrid::build(
        g,
        &vec![x_range.0 - h; n],
        mx + 3,
        t_range.0 - h,
        mt + 3,
        h,
        nodes,
    )?;
    Ok((grid, mx, mt))
}

/// Maximum `|L[Q]|` over the box points `x_range^n × t_range` at spacing
/// `stride·h`, read from a grid of spacing `h`.
fn box_max(grid: &MeanGrid, mx: usize, mt: usize, stride: usize) -> f64 {
    let n = grid.dim();
    let per_axis = mx / stride + 1;
    let mut worst: f64 = 0.0;
    for cell in 0..per_axis.pow(n as u32) {
        let ix: Vec<usize> = (0..n)
            .map(|axis| 1 + stride * ((cell / per_axis.pow((n - 1 - axis) as u32)) % per_axis))
            .collect();
        for k in (0..=mt).step_by(stride) {
            worst = worst.max(grid.residual_at(&ix, 1 + k).abs());
        }
    }
    worst
}

/// Residual of the Darboux operator over the box `x_range^n × t_range` at
/// spacings `h` and `h/2`.
pub fn darboux_refinement(
    g: &PlaneField,
    n: usize,
    x_range: (f64, f64),
    t_range: (f64, f64),
    h: f64,
    nodes: usize,
) -> Result<DarbouxReport> {
    let (coarse, mx, mt) = box_grid(g, n, x_range, t_range, h, nodes)?;
    let (fine, fx, ft) = box_grid(g, n, x_range, t_range, h / 2.0, nodes)?;
    let coarse_max = box_max(&coarse, mx, mt, 1);
    let fine_max = box_max(&fine, fx, ft, 2);
    let order = (coarse_max > 0.0 && fine_max > 0.0).then(|| (coarse_max / fine_max).log2());
    Ok(DarbouxReport {
        coarse_spacing: h,
        coarse_max,
        fine_max,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn quadratic_mean_values() {
        let g = PlaneField::Radial {
            coeffs: vec![0.0, 1.0],
        };
        let grid = MeanGrid::build(&g, &[0.1, -0.2], 3, 0.3, 3, 0.1, 128).unwrap();
        let x = [0.2, -0.1];
        let t = 0.4;
        let expected = 2.0 * PI * (x[0] * x[0] + x[1] * x[1] + t * t);
        assert_abs_diff_eq!(grid.value(&[1, 1], 1), expected, epsilon = 1e-13);
        assert!(grid.residual_at(&[1, 1], 1).abs() < 1e-10);
    }

    #[test]
    fn constant_residual_vanishes() {
        let g = PlaneField::Constant { value: 3.0 };
        let r = darboux_refinement(&g, 2, (-0.05, 0.05), (0.3, 0.4), 0.05, 64).unwrap();
        assert!(r.coarse_max < 1e-8);
    }

    #[test]
    fn one_dimensional_wave() {
        // Equal steps in x and t make the discrete wave operator exact on
        // travelling waves g(x ± t).
        let g = PlaneField::Bump {
            center: vec![0.1],
            width: 0.4,
            amplitude: 1.0,
        };
        let r = darboux_refinement(&g, 1, (-0.1, 0.1), (0.3, 0.5), 0.02, 8).unwrap();
        assert!(r.coarse_max < 1e-9);
    }

    #[test]
    fn rejects_small_radius() {
        let g = PlaneField::Constant { value: 1.0 };
        assert!(MeanGrid::build(&g, &[0.0, 0.0], 3, 0.005, 3, 0.01, 32).is_err());
    }
}
