// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;
use spherex_core::harness::{
    emit_figure, run_suite, support_experiment, ExperimentOptions, FigureDataset, FigureId, Series,
    SuiteName, SuiteOptions,
};
use spherex_core::maps::{phi_sigma, sample_component_image, spacelike_verify};
use spherex_core::surfaces::{decompose, regularity_check, surface_projection_set};
use spherex_core::tol::DEFAULT_NODES;
use spherex_core::{load_field, load_surface, Error, SphereField, Surface, SurfaceParam};

#[derive(Parser)]
#[command(
    name = "spherex",
    version,
    about = "Spherical transform verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Vanishing tolerance for the support experiment.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the image of a surface under the tangent-subsphere map as CSV.
    Map {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the singular parameters, components and projection set.
    Singularities {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Check that the image of one component is space-like.
    Spacelike {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        component: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Emit plot data for figure 1, 3, 4 or 5.
    Figure {
        #[arg(long)]
        which: String,
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the support experiment for one surface and field.
    #[command(name = "theorem31")]
    Support {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_error(location: &Path, err: impl ToString) -> Error {
    Error::ConfigInvalid {
        location: location.display().to_string(),
        message: err.to_string(),
    }
}

fn read_config(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).map_err(|e| config_error(path, e))?)
}

/// Prefixes config diagnostics with the file they came from.
fn in_file(path: &Path, err: Error) -> Error {
    match err {
        Error::ConfigInvalid { location, message } => Error::ConfigInvalid {
            location: format!("{}: {location}", path.display()),
            message,
        },
        e => e,
    }
}

fn surface_from(path: &Path) -> Result<Surface> {
    Ok(load_surface(&read_config(path)?).map_err(|e| in_file(path, e))?)
}

fn field_from(path: &Path, dim: usize) -> Result<SphereField> {
    Ok(load_field(&read_config(path)?, dim).map_err(|e| in_file(path, e))?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SPHEREX_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| Error::ConfigInvalid {
        location: "SPHEREX_THREADS".into(),
        message: format!("expected a non-negative integer, got {raw:?}"),
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn image_dataset(surface: &Surface, samples: usize) -> Result<FigureDataset> {
    let dim = surface.ambient_dim();
    let series = if surface.is_axially_symmetric() {
        let d = decompose(surface)?;
        d.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let sampling = sample_component_image(surface, *c, samples)?;
                Ok(Series {
                    name: "image".into(),
                    component: Some(i),
                    color: if d.regular_flags[i] { "red" } else { "gray" }.into(),
                    points: sampling
                        .samples
                        .into_iter()
                        .map(|s| (s.param.theta, s.point))
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        let mut points = Vec::new();
        for k in 0..samples {
            let theta = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * (k as f64 + 0.5) / samples as f64;
            for j in 0..samples {
                let phi = std::f64::consts::TAU * j as f64 / samples as f64;
                if let Ok(image) = phi_sigma(surface, SurfaceParam::new(theta, phi)) {
                    points.push((theta, image.as_point()));
                }
            }
        }
        vec![Series {
            name: "image".into(),
            component: None,
            color: "red".into(),
            points,
        }]
    };
    Ok(FigureDataset {
        figure: FigureId::Images,
        dim,
        series,
    })
}

/// Returns whether the command's checks passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            suite,
            surface,
            field,
            seed,
            tol,
            nodes,
            out,
        } => {
            let name: SuiteName = suite.parse()?;
            let surface = surface.as_deref().map(surface_from).transpose()?;
            let dim = surface.as_ref().map_or(3, Surface::ambient_dim);
            let field = field.as_deref().map(|p| field_from(p, dim)).transpose()?;
            let opts = SuiteOptions {
                seed,
                surface,
                field,
                tol,
                nodes,
            };
            let result = run_suite(name, &opts)?;
            for check in &result.checks {
                eprintln!("{}", check.line());
            }
            eprintln!(
                "{} {} in {} ms",
                if result.overall { "PASS" } else { "FAIL" },
                result.suite,
                result.runtime_ms
            );
            write_output(out.as_deref(), &result.to_json())?;
            Ok(result.overall)
        }
        Command::Map {
            surface,
            samples,
            out,
        } => {
            let surface = surface_from(&surface)?;
            write_output(out.as_deref(), &image_dataset(&surface, samples)?.to_csv())?;
            Ok(true)
        }
        Command::Singularities { surface } => {
            let surface = surface_from(&surface)?;
            let d = decompose(&surface)?;
            let cap = match surface_projection_set(&surface) {
                Ok(cap) => Some(cap),
                Err(Error::EmptyBoundary) => None,
                Err(e) => return Err(e.into()),
            };
            print!(
                "{}",
                pretty(&json!({ "decomposition": d, "projection_set": cap }))
            );
            Ok(true)
        }
        Command::Spacelike {
            surface,
            component,
            samples,
        } => {
            let surface = surface_from(&surface)?;
            let d = decompose(&surface)?;
            let interval = *d
                .components
                .get(component)
                .ok_or_else(|| Error::ConfigInvalid {
                    location: "component".into(),
                    message: format!("{} components, got index {component}", d.components.len()),
                })?;
            let regularity = regularity_check(&surface.section()?, interval);
            let sampling = sample_component_image(&surface, interval, samples)?;
            let report = spacelike_verify(&sampling.samples);
            let passed = regularity.regular && report.passed;
            print!(
                "{}",
                pretty(&json!({
                    "component": component,
                    "interval": interval,
                    "regularity": regularity,
                    "min_defect": report.min_defect,
                    "samples": report.sampled_params.len(),
                    "excluded": sampling.excluded.len(),
                    "not_regular": sampling.not_regular.len(),
                    "passed": passed,
                }))
            );
            Ok(passed)
        }
        Command::Figure {
            which,
            surface,
            resolution,
            out,
        } => {
            let id: FigureId = which.parse()?;
            let surface = surface.as_deref().map(surface_from).transpose()?;
            let data = emit_figure(id, surface.as_ref(), resolution)?;
            write_output(out.as_deref(), &data.to_csv())?;
            Ok(true)
        }
        Command::Support {
            surface,
            field,
            tol,
            nodes,
            out,
        } => {
            let surface = surface_from(&surface)?;
            let field = field_from(&field, surface.ambient_dim())?;
            let mut opts = ExperimentOptions {
                nodes,
                ..Default::default()
            };
            if let Some(tol) = tol {
                opts.tol = tol;
            }
            let report = support_experiment(&surface, &field, &opts)?;
            for check in report.checks() {
                eprintln!("{}", check.line());
            }
            write_output(out.as_deref(), &pretty(&report))?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::ConfigInvalid { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
