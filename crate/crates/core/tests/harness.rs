// SPDX-License-Identifier: Apache-2.0

use spherex_core::harness::{
    emit_figure, hyperboloid_partition_holds, run_suite, support_experiment, ExperimentOptions,
    FigureId, SuiteName, SuiteOptions,
};
use spherex_core::surfaces::{OffsetSphere, Surface};
use spherex_core::{Error, SphereField, SurfaceConfig};

fn centered_sphere() -> Surface {
    Surface::Sphere(OffsetSphere::centered(0.5, 3).unwrap())
}

#[test]
fn suite_names_round_trip() {
    for name in spherex_core::harness::SUITE_NAMES {
        assert_eq!(name.parse::<SuiteName>().unwrap().as_str(), name);
    }
    assert!(matches!(
        "lemma99".parse::<SuiteName>(),
        Err(Error::ConfigInvalid { .. })
    ));
}

#[test]
fn suite_json_is_reproducible() {
    let opts = SuiteOptions {
        seed: 11,
        ..Default::default()
    };
    let a = run_suite(SuiteName::Jacobian, &opts).unwrap();
    let b = run_suite(SuiteName::Jacobian, &opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.overall, a.checks.iter().all(|c| c.passed));
}

#[test]
fn spacelike_suite_on_four_lobe_profile() {
    let surface = SurfaceConfig::three_lobe().build().unwrap();
    let r = run_suite(
        SuiteName::SpacelikeImages,
        &SuiteOptions {
            surface: Some(surface),
            ..Default::default()
        },
    )
    .unwrap();
    assert!(r
        .checks
        .iter()
        .any(|c| c.name == "regular_components_spacelike" && c.passed));
}

#[test]
fn quadric_suite_rejects_revolution_override() {
    let surface = SurfaceConfig::three_lobe().build().unwrap();
    let opts = SuiteOptions {
        surface: Some(surface),
        ..Default::default()
    };
    assert!(matches!(
        run_suite(SuiteName::SphereImages, &opts),
        Err(Error::ConfigInvalid { .. })
    ));
}

#[test]
fn support_experiment_both_arms() {
    let field = SphereField::cap_bump(vec![0.0, 0.0, -1.0], 0.3, 1.0);
    let report =
        support_experiment(&centered_sphere(), &field, &ExperimentOptions::default()).unwrap();
    assert!((report.projection_cap.axis_height - (2.0 * 0.25 - 1.0)).abs() < 1e-9);
    assert!(report.precondition.confirmed);
    assert_eq!(report.sample_params.len(), 64);
    let pass = report.pass_arm.as_ref().unwrap();
    assert!(pass.passed && pass.evaluated == 64);
    let fail = report.fail_arm.as_ref().unwrap();
    assert_eq!(fail.center, vec![1.0, 0.0, 0.0]);
    assert!(fail.violation > 1e-3);
    assert_eq!(report.checks()[0].name, "disjointness_margin");
    assert!(report.passed());
}

#[test]
fn zero_field_passes_trivially() {
    let field = SphereField::Constant { value: 0.0 };
    let report =
        support_experiment(&centered_sphere(), &field, &ExperimentOptions::default()).unwrap();
    assert!(report.pass_arm.unwrap().passed);
    assert!(report.fail_arm.is_none());
}

#[test]
fn straddling_support_fails_precondition() {
    let field = SphereField::cap_bump(vec![1.0, 0.0, 0.0], 0.3, 1.0);
    let report =
        support_experiment(&centered_sphere(), &field, &ExperimentOptions::default()).unwrap();
    assert!(!report.precondition.confirmed);
    assert!(report.pass_arm.is_none());
    assert!(!report.passed());
}

#[test]
fn field_touching_north_pole_is_rejected() {
    let field = SphereField::Constant { value: 1.0 };
    assert!(matches!(
        support_experiment(&centered_sphere(), &field, &ExperimentOptions::default()),
        Err(Error::PreconditionUnmet(_))
    ));
}

#[test]
fn image_figure_has_six_components_and_images() {
    let data = emit_figure(FigureId::Images, None, 64).unwrap();
    assert_eq!(data.series_named("component").count(), 6);
    assert_eq!(data.series_named("image").count(), 6);
    assert!(data.series.iter().all(|s| !s.points.is_empty()));
    assert!(data
        .series
        .iter()
        .flat_map(|s| &s.points)
        .all(|(t, p)| { t.is_finite() && p.iter().all(|c| c.is_finite()) }));
}

#[test]
fn projection_figure_on_centered_sphere() {
    let data = emit_figure(FigureId::ProjectionSet, Some(&centered_sphere()), 32).unwrap();
    let arc = data.series_named("projection_set").next().unwrap();
    let cap = 2.0 * 0.25 - 1.0;
    assert!(arc.points.iter().all(|(_, p)| p[1] <= cap + 1e-12));
    assert!(arc.points.iter().any(|(_, p)| (p[1] - cap).abs() < 1e-12));
    assert_eq!(data.series_named("cone").count(), 2);
}

#[test]
fn revolved_profile_figure_defaults() {
    let data = emit_figure(FigureId::Components, None, 16).unwrap();
    assert!(data.series_named("component").any(|s| s.color == "red"));
}

#[test]
fn hyperboloid_figure_partition() {
    let data = emit_figure(FigureId::Hyperboloid, None, 40).unwrap();
    assert!(
        data.series_named("inside_image")
            .next()
            .unwrap()
            .points
            .len()
            > 100
    );
    assert!(hyperboloid_partition_holds(&data));
}

#[test]
fn csv_layout() {
    let data = emit_figure(FigureId::Hyperboloid, None, 8).unwrap();
    let csv = data.to_csv();
    assert!(csv.starts_with("series,component,param,x1,x2\n"));
    assert!(!csv.contains('\r'));
    let row = csv.lines().nth(1).unwrap();
    assert_eq!(row.split(',').count(), 5);
    assert_eq!(
        csv,
        emit_figure(FigureId::Hyperboloid, None, 8)
            .unwrap()
            .to_csv()
    );
    assert!(matches!(
        "2".parse::<FigureId>(),
        Err(Error::ConfigInvalid { .. })
    ));
}
