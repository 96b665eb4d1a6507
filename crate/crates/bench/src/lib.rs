// SPDX-License-Identifier: Apache-2.0

//! Deterministic inputs shared by the benchmarks.

use spherex_core::geometry::SubsphereParam;
use spherex_core::surfaces::{ProfileCurve, RevolutionSurface, Surface};
use spherex_core::SphereField;

/// Subspheres with normals on a golden-angle spiral and offsets cycling
/// through `[0, 0.9)`, skipping planes that pass close to the north pole.
pub fn spiral_subspheres(count: usize) -> Vec<SubsphereParam> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let total = 4 * count;
    (0..total)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / total as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            let rho = 0.9 * ((k as f64 * 0.618_033_988_7).fract());
            (vec![r * a.cos(), r * a.sin(), z], rho)
        })
        .filter(|(psi, rho)| (rho - psi[2]).abs() > 0.05)
        .take(count)
        .map(|(psi, rho)| SubsphereParam::new(psi, rho).expect("unit normal"))
        .collect()
}

pub fn smooth_field() -> SphereField {
    SphereField::Sum {
        terms: vec![
            SphereField::Constant { value: 1.0 },
            SphereField::Coordinate { index: 1 },
            SphereField::cap_bump(vec![0.0, 0.0, -1.0], 1.2, 1.0),
        ],
    }
}

pub fn planar_profile() -> Surface {
    Surface::Revolution(RevolutionSurface::new(ProfileCurve::three_lobe(), 2).expect("inside ball"))
}

pub fn revolved_profile() -> Surface {
    Surface::Revolution(
        RevolutionSurface::new(ProfileCurve::three_lobe_lowered(), 3).expect("inside ball"),
    )
}
