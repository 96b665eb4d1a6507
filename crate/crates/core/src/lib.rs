// SPDX-License-Identifier: Apache-2.0

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod darboux;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod harness;
pub mod maps;
pub mod roots;
pub mod surfaces;
pub mod tol;
pub mod transforms;
pub mod vector;

pub use config::{load_field, load_surface, SurfaceConfig, SurfaceSpec};
pub use error::{Error, Result};
pub use fields::{PlaneField, SphereField};
pub use geometry::{AmbientPoint, CapRegion, CapSide, EuclideanSphere, SubsphereParam};
pub use harness::{
    emit_figure, run_suite, support_experiment, Check, ExperimentOptions, FigureDataset, FigureId,
    SuiteName, SuiteOptions, SupportReport, VerifySuiteResult,
};
pub use surfaces::{
    ComponentDecomposition, Interval, OffsetSphere, ProfileCurve, RevolutionSurface, Surface,
    SurfaceParam,
};
