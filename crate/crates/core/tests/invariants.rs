// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use proptest::prelude::*;
use spherex_core::geometry::{
    stereo_forward, stereo_inverse, subsphere_image, subsphere_nodes, SubsphereParam,
};
use spherex_core::maps::{h_identity_residual, phi_sigma, psi0_map, psi1_map, psi_map_signed};
use spherex_core::surfaces::{OffsetSphere, ProfileCurve, Surface, SurfaceParam};
use spherex_core::transforms::vanishing_data_check;
use spherex_core::vector::{distance, dot, norm};
use spherex_core::SphereField;

fn unit(v: [f64; 3]) -> Option<Vec<f64>> {
    let len = norm(&v);
    (len > 1e-3).then(|| v.iter().map(|c| c / len).collect())
}

fn subsphere() -> impl Strategy<Value = SubsphereParam> {
    (prop::array::uniform3(-1.0..1.0f64), 0.0..0.95f64).prop_filter_map(
        "degenerate normal or pole",
        |(v, rho)| {
            let psi = unit(v)?;
            ((rho - psi[2]).abs() > 0.05).then(|| SubsphereParam::new(psi, rho).unwrap())
        },
    )
}

proptest! {
    #[test]
    fn stereographic_round_trip(y in prop::array::uniform2(-50.0..50.0f64)) {
        let back = stereo_forward(&stereo_inverse(&y).unwrap()).unwrap();
        prop_assert!(distance(&back, &y) <= 1e-12 * (1.0 + norm(&y)));
    }

    #[test]
    fn nodes_land_on_image_sphere(s in subsphere()) {
        let image = subsphere_image(&s).unwrap();
        for node in subsphere_nodes(&s, 64).unwrap() {
            let y = stereo_forward(&node.point).unwrap();
            prop_assert!((distance(&y, &image.center) - image.radius).abs() < 1e-10 * (1.0 + image.radius));
        }
    }

    #[test]
    fn nodes_lie_in_plane_with_circumference_weights(s in subsphere()) {
        let nodes = subsphere_nodes(&s, 64).unwrap();
        let total: f64 = nodes.iter().map(|n| n.weight).sum();
        prop_assert!((total - 2.0 * PI * s.inner_radius()).abs() < 1e-12);
        for n in &nodes {
            prop_assert!((dot(n.point.coords(), s.psi()) - s.rho()).abs() < 1e-12);
            prop_assert!((n.point.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn image_ignores_plane_orientation(s in subsphere()) {
        let a = psi_map_signed(s.psi(), s.rho()).unwrap();
        let flipped: Vec<f64> = s.psi().iter().map(|c| -c).collect();
        let b = psi_map_signed(&flipped, -s.rho()).unwrap();
        prop_assert!(distance(&a.center, &b.center) < 1e-12 * (1.0 + norm(&a.center)));
        prop_assert!((a.radius - b.radius).abs() < 1e-12 * (1.0 + a.radius));
    }

    #[test]
    fn surface_map_factors_through_foot_point(
        lambda in 0.0..0.3f64,
        r in 0.1..0.6f64,
        theta in -1.5..1.5f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let sphere = Surface::Sphere(OffsetSphere::new(lambda, vec![0.0, 0.0, 1.0], r).unwrap());
        let param = SurfaceParam::new(theta, phi);
        let (Ok(direct), Ok(foot)) = (phi_sigma(&sphere, param), psi0_map(&sphere, param)) else {
            return Ok(());
        };
        let composed = psi1_map(&foot).unwrap();
        let scale = 1.0 + norm(&direct.center) + direct.radius;
        prop_assert!(distance(&direct.center, &composed.center) < 1e-9 * scale);
        prop_assert!((direct.radius - composed.radius).abs() < 1e-9 * scale);
    }

    #[test]
    fn h_identity_on_polar_profiles(
        base in 0.3..0.6f64,
        amp in 0.0..0.2f64,
        freq in 1u32..5,
        phase in -3.0..3.0f64,
        t in -PI..PI,
    ) {
        let curve = ProfileCurve::polar_trig(0.9, base, amp, freq as f64, phase, 0.0).unwrap();
        prop_assert!(h_identity_residual(&curve, t).abs() < 1e-10);
    }
}

#[test]
fn vanishing_check_is_monotone_in_tolerance() {
    let sphere = Surface::Sphere(OffsetSphere::centered(0.5, 3).unwrap());
    let field = SphereField::cap_bump(vec![1.0, 0.0, 0.0], 0.3, 1.0);
    let params: Vec<SurfaceParam> = (0..8)
        .map(|k| SurfaceParam::new(0.2 + 0.1 * k as f64, 0.7 * k as f64))
        .collect();
    let mut was_passing = false;
    for tol in [1e-9, 1e-6, 1e-3, 1e-1, 10.0] {
        let r = vanishing_data_check(&field, &sphere, &params, tol, 1e-4, 128).unwrap();
        assert!(
            !was_passing || r.passed,
            "passed at a smaller tolerance but not at {tol}"
        );
        was_passing = r.passed;
    }
    assert!(was_passing);
}
