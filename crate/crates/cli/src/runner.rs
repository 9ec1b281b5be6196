//! Experiment execution: resolves a validated config (or a figure
//! preset) into a run plan, drives the library with per-degree seed
//! substreams, and writes every artifact with a checksum.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rpzeros::C64;
use rpzeros::basis::{
    gram_of_basis, whitening_residual, OrthonormalBasis, WeightedSpace,
};
use rpzeros::ensembles::CoefficientEnsemble;
use rpzeros::equilibrium::ReferenceMeasure;
use rpzeros::moments::{
    bound_iid, bound_radial, bound_real_gaussian, bound_sphere,
    bound_uniform_cube, log_moment_sweep, random_complex_direction,
    MomentBound,
};
use rpzeros::realzeros::{classical_constant, kac_expected, RealZeroModel};
use rpzeros::rng::{stream_rng, substream};
use rpzeros::stats::{clt_experiment, RadialBump};
use rpzeros::zeros::{sample_zero_sets, EmpiricalMeasure2D, GridSpec};
use serde::Serialize;
use serde_json::json;

use crate::config::{
    EnsembleName, ExperimentConfig, ExperimentKind, SpaceName, DEFAULT_BOUNDS,
    DEFAULT_GRID,
};
use crate::error::{config_error, CliError, Result};
use crate::manifest::{
    sha256_hex, OutputRecord, ResidualRecord, RunManifest, TimingRecord,
};

/// Seed used by the figure presets when `--seed` is not given.
pub const DEFAULT_PRESET_SEED: u64 = 1;

/// Exponents the moments experiment evaluates per direction.
const MOMENT_EXPONENTS: [f64; 2] = [1.0, 2.0];

/// Random directions per coefficient dimension in the moments experiment.
const MOMENT_DIRECTIONS: usize = 5;

/// Bundled zero-gallery reproductions with their published trial
/// schedules (trials × degree is constant within a preset).
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigurePreset {
    /// Square-model gallery: Gaussian coefficients at degrees 4 to 40.
    #[value(name = "figure-1")]
    Figure1,
    /// Spherical-model gallery: uniform coefficients over twelve
    /// doubling degrees, 1 to 2048.
    #[value(name = "figure-3")]
    Figure3,
}

impl std::fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FigurePreset::Figure1 => f.write_str("figure-1"),
            FigurePreset::Figure3 => f.write_str("figure-3"),
        }
    }
}

/// A fully resolved run: what to execute, with which seeds, and where
/// the artifacts go.
pub struct Plan {
    pub kind: ExperimentKind,
    pub space: Option<SpaceName>,
    pub ensemble_name: Option<EnsembleName>,
    pub ensemble: Option<CoefficientEnsemble<f64>>,
    /// `(degree, trials)` pairs in execution order.
    pub schedule: Vec<(usize, usize)>,
    pub seed: u64,
    pub grid: Option<GridSpec<f64>>,
    pub out: PathBuf,
    /// Configuration echo embedded in the manifest.
    pub echo: serde_json::Value,
}

impl Plan {
    /// Resolves a config document plus command-line overrides.
    pub fn from_config(
        config: &ExperimentConfig,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Plan> {
        let mut cfg = config.clone();
        if let Some(seed) = seed {
            cfg.seed = seed;
        }
        if let Some(out) = out {
            cfg.out = out;
        }
        cfg.validate()?;
        let ensemble = match cfg.ensemble {
            Some(_) => Some(cfg.build_ensemble()?),
            None => None,
        };
        let grid = match cfg.experiment {
            ExperimentKind::Zeros | ExperimentKind::Equilibrium => {
                let [nx, ny] = cfg.grid.unwrap_or(DEFAULT_GRID);
                let [x0, x1, y0, y1] = cfg.bounds.unwrap_or(DEFAULT_BOUNDS);
                Some(GridSpec::new(x0, x1, y0, y1, nx, ny)?)
            }
            _ => None,
        };
        let schedule: Vec<(usize, usize)> =
            cfg.degrees.iter().map(|&p| (p, cfg.trials)).collect();
        let echo = serde_json::to_value(&cfg)
            .map_err(|err| config_error(format!("cannot echo config: {err}")))?;
        Ok(Plan {
            kind: cfg.experiment,
            space: cfg.space,
            ensemble_name: cfg.ensemble,
            ensemble,
            schedule,
            seed: cfg.seed,
            grid,
            out: cfg.out,
            echo,
        })
    }

    /// Builds the plan for a bundled zero-gallery preset.
    pub fn from_preset(
        preset: FigurePreset,
        columns: Option<usize>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Plan> {
        let out = out
            .ok_or_else(|| config_error("presets need --out for their artifacts"))?;
        let seed = seed.unwrap_or(DEFAULT_PRESET_SEED);
        let (space, ensemble_name, schedule, bounds) = match preset {
            FigurePreset::Figure1 => {
                if columns.is_some() {
                    return Err(config_error(
                        "--columns only applies to the figure-3 preset",
                    ));
                }
                let schedule = vec![(4, 5000), (12, 1667), (24, 833), (40, 500)];
                (
                    SpaceName::UnitSquare,
                    EnsembleName::ComplexGaussian,
                    schedule,
                    [-1.0, 1.0, -1.0, 1.0],
                )
            }
            FigurePreset::Figure3 => {
                let columns = columns.unwrap_or(12);
                if columns == 0 || columns > 12 {
                    return Err(config_error(format!(
                        "--columns must be between 1 and 12, got {columns}"
                    )));
                }
                let schedule: Vec<(usize, usize)> = (1..=columns)
                    .map(|j| (1usize << (j - 1), 5usize << (13 - j)))
                    .collect();
                (
                    SpaceName::FubiniStudy,
                    EnsembleName::UniformCube,
                    schedule,
                    [-2.0, 2.0, -2.0, 2.0],
                )
            }
        };
        let grid = GridSpec::new(
            bounds[0], bounds[1], bounds[2], bounds[3], 256, 256,
        )?;
        let ensemble = match ensemble_name {
            EnsembleName::ComplexGaussian => CoefficientEnsemble::ComplexGaussian,
            EnsembleName::UniformCube => CoefficientEnsemble::UniformUnitCube,
            other => {
                return Err(config_error(format!(
                    "preset ensembles are fixed; {other} is not one of them"
                )))
            }
        };
        let echo = json!({
            "preset": preset.to_string(),
            "experiment": "zeros",
            "space": space.to_string(),
            "ensemble": ensemble_name.to_string(),
            "schedule": schedule,
            "seed": seed,
            "grid": [256, 256],
            "box": bounds,
            "out": out.display().to_string(),
        });
        Ok(Plan {
            kind: ExperimentKind::Zeros,
            space: Some(space),
            ensemble_name: Some(ensemble_name),
            ensemble: Some(ensemble),
            schedule,
            seed,
            grid: Some(grid),
            out,
            echo,
        })
    }
}

/// Executes the plan and writes `manifest.json` last, so a manifest on
/// disk means the run completed.
pub fn run(plan: &Plan) -> Result<RunManifest> {
    fs::create_dir_all(&plan.out).map_err(|err| {
        config_error(format!(
            "cannot create output directory {}: {err}",
            plan.out.display()
        ))
    })?;
    let mut ctx = RunContext {
        sink: Sink {
            dir: plan.out.clone(),
            outputs: Vec::new(),
        },
        residuals: Vec::new(),
        timings: Vec::new(),
    };
    let total = Instant::now();
    match plan.kind {
        ExperimentKind::Onb => run_onb(plan, &mut ctx)?,
        ExperimentKind::Zeros => run_zeros(plan, &mut ctx)?,
        ExperimentKind::Equilibrium => run_equilibrium(plan, &mut ctx)?,
        ExperimentKind::Realzeros => run_realzeros(plan, &mut ctx)?,
        ExperimentKind::Moments => run_moments(plan, &mut ctx)?,
        ExperimentKind::Clt => run_clt(plan, &mut ctx)?,
    }
    ctx.timings.push(TimingRecord {
        label: "total".into(),
        seconds: total.elapsed().as_secs_f64(),
    });
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        experiment: plan.kind.to_string(),
        config: plan.echo.clone(),
        outputs: ctx.sink.outputs,
        residuals: ctx.residuals,
        timings: ctx.timings,
    };
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|err| config_error(format!("cannot encode manifest: {err}")))?;
    text.push('\n');
    fs::write(plan.out.join("manifest.json"), text).map_err(|err| {
        config_error(format!("cannot write manifest.json: {err}"))
    })?;
    Ok(manifest)
}

struct RunContext {
    sink: Sink,
    residuals: Vec<ResidualRecord>,
    timings: Vec<TimingRecord>,
}

impl RunContext {
    fn residual(&mut self, label: String, value: f64) {
        self.residuals.push(ResidualRecord { label, value });
    }

    fn timing(&mut self, label: String, start: Instant) {
        self.timings.push(TimingRecord {
            label,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

struct Sink {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
}

impl Sink {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        fs::write(self.dir.join(name), bytes).map_err(|err| {
            config_error(format!("cannot write {name}: {err}"))
        })?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }
}

fn require_space(plan: &Plan) -> Result<SpaceName> {
    plan.space
        .ok_or_else(|| config_error("this experiment needs a space"))
}

fn require_ensemble(plan: &Plan) -> Result<&CoefficientEnsemble<f64>> {
    plan.ensemble
        .as_ref()
        .ok_or_else(|| config_error("this experiment needs an ensemble"))
}

fn require_grid(plan: &Plan) -> Result<GridSpec<f64>> {
    plan.grid
        .ok_or_else(|| config_error("this experiment needs a grid"))
}

/// Closed-form bases where they exist, whitened Cholesky for the square.
fn build_basis(space: SpaceName, degree: usize) -> Result<OrthonormalBasis<f64>> {
    let weighted = WeightedSpace::new(space.kind(), degree)?;
    let basis = match space {
        SpaceName::UnitSquare => OrthonormalBasis::cholesky(weighted)?,
        _ => OrthonormalBasis::closed_form(weighted)?,
    };
    Ok(basis)
}

/// Orthonormality diagnostics: whitening residual against the assembled
/// Gram matrix and an independent re-quadrature residual, per degree.
fn run_onb(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let space = require_space(plan)?;
    let mut csv = String::from(
        "space,degree,scaled_condition,whitening_residual,requadrature_residual\n",
    );
    for &(degree, _) in &plan.schedule {
        let start = Instant::now();
        let weighted = WeightedSpace::new(space.kind(), degree)?;
        let gram = weighted.gram_matrix::<f64>()?;
        let basis = OrthonormalBasis::from_gram(weighted, &gram)?;
        let triangular = basis.triangular_matrix().ok_or_else(|| {
            CliError::Numeric("whitened basis lost its triangular factor".into())
        })?;
        let whitening = whitening_residual(triangular, &gram);
        let requadrature = gram_of_basis(&basis)?.max_deviation_from_identity();
        ctx.timing(format!("onb degree {degree}"), start);
        let condition = basis
            .scaled_condition
            .map(|c| c.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            csv,
            "{space},{degree},{condition},{whitening:e},{requadrature:e}"
        );
        ctx.residual(format!("whitening_residual_p{degree}"), whitening);
        ctx.residual(format!("requadrature_residual_p{degree}"), requadrature);
    }
    ctx.sink.write("onb.csv", csv.as_bytes())
}

/// Zero dumps (`trial,re,im`, one row per zero) plus a max-normalized
/// histogram raster per degree.
fn run_zeros(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let space = require_space(plan)?;
    let grid = require_grid(plan)?;
    for &(degree, trials) in &plan.schedule {
        let start = Instant::now();
        let basis = build_basis(space, degree)?;
        let sets = sample_zero_sets(
            &basis,
            require_ensemble(plan)?,
            trials,
            substream(plan.seed, degree as u64),
        )?;
        ctx.timing(format!("zeros degree {degree}"), start);
        let mut csv = String::from("trial,re,im\n");
        let mut measure = EmpiricalMeasure2D::new(grid);
        let mut worst = 0.0f64;
        for (trial, set) in sets.iter().enumerate() {
            for z in &set.zeros {
                let _ = writeln!(csv, "{trial},{},{}", z.re, z.im);
            }
            measure.accumulate(set)?;
            worst = worst.max(set.max_backward_error);
        }
        ctx.sink
            .write(&format!("zeros_p{degree}.csv"), csv.as_bytes())?;
        ctx.sink
            .write(&format!("raster_p{degree}.pgm"), &render_pgm(&measure)?)?;
        ctx.residual(format!("max_backward_error_p{degree}"), worst);
    }
    Ok(())
}

/// Empirical zero measures against the space's equilibrium reference.
fn run_equilibrium(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let space = require_space(plan)?;
    let grid = require_grid(plan)?;
    let reference_kind = match space {
        SpaceName::UnitSquare => ReferenceMeasure::SquareBoundary,
        SpaceName::PlaneGaussian => ReferenceMeasure::UnitDiskUniform,
        SpaceName::FubiniStudy => ReferenceMeasure::FubiniStudyMeasure,
    };
    let start = Instant::now();
    let reference = reference_kind.bin_reference(grid)?;
    ctx.timing("reference quadrature".into(), start);
    let mut csv = String::from("degree,trials,tv_distance,in_box_fraction\n");
    for &(degree, trials) in &plan.schedule {
        let start = Instant::now();
        let basis = build_basis(space, degree)?;
        let sets = sample_zero_sets(
            &basis,
            require_ensemble(plan)?,
            trials,
            substream(plan.seed, degree as u64),
        )?;
        let mut measure = EmpiricalMeasure2D::new(grid);
        let mut worst = 0.0f64;
        for set in &sets {
            measure.accumulate(set)?;
            worst = worst.max(set.max_backward_error);
        }
        let tv = measure.tv_distance(&reference)?;
        let in_box = measure.in_box_fraction()?;
        ctx.timing(format!("equilibrium degree {degree}"), start);
        let _ = writeln!(csv, "{degree},{trials},{tv},{in_box}");
        ctx.residual(format!("max_backward_error_p{degree}"), worst);
    }
    ctx.sink.write("equilibrium.csv", csv.as_bytes())
}

/// Empirical real-zero counts against the model's reference expectation:
/// the logarithmic-growth quadrature for the monomial model, the
/// classical `√p` laws for the closed-form spaces.
fn run_realzeros(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let mut csv =
        String::from("degree,trials,reference,empirical_mean,standard_error\n");
    for &(degree, trials) in &plan.schedule {
        let start = Instant::now();
        let (basis, reference) = match plan.space {
            None => (
                OrthonormalBasis::monomial(degree),
                kac_expected::<f64>(degree)?,
            ),
            Some(SpaceName::PlaneGaussian) => (
                build_basis(SpaceName::PlaneGaussian, degree)?,
                classical_constant::<f64>(RealZeroModel::Weyl, degree)?.expected,
            ),
            Some(SpaceName::FubiniStudy) => (
                build_basis(SpaceName::FubiniStudy, degree)?,
                classical_constant::<f64>(RealZeroModel::Elliptic, degree)?
                    .expected,
            ),
            Some(SpaceName::UnitSquare) => {
                return Err(config_error(
                    "no real-zero reference is available for the unit-square \
                     space",
                ))
            }
        };
        let sets = sample_zero_sets(
            &basis,
            require_ensemble(plan)?,
            trials,
            substream(plan.seed, degree as u64),
        )?;
        let counts: Vec<f64> =
            sets.iter().map(|s| s.real_zero_count as f64).collect();
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let se = if counts.len() > 1 {
            let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>()
                / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        let worst = sets
            .iter()
            .map(|s| s.max_backward_error)
            .fold(0.0f64, f64::max);
        ctx.timing(format!("realzeros degree {degree}"), start);
        let _ = writeln!(csv, "{degree},{trials},{reference},{mean},{se}");
        ctx.residual(format!("max_backward_error_p{degree}"), worst);
    }
    ctx.sink.write("realzeros.csv", csv.as_bytes())
}

#[derive(Serialize)]
struct MomentRecord {
    ensemble: String,
    dimension: usize,
    exponent: f64,
    direction: usize,
    trials: usize,
    kept: usize,
    discarded: usize,
    clamped: usize,
    estimate: f64,
    standard_error: f64,
    bound: &'static str,
    bound_value: f64,
    holds: bool,
}

fn moment_bound(
    ensemble: &CoefficientEnsemble<f64>,
    dimension: usize,
    exponent: f64,
) -> Result<MomentBound<f64>> {
    let bound = match ensemble {
        CoefficientEnsemble::RealGaussian => bound_real_gaussian(exponent)?,
        CoefficientEnsemble::RadialDensity { alpha } => {
            bound_radial(*alpha, exponent)?
        }
        CoefficientEnsemble::SphereUniform => bound_sphere(dimension, exponent)?,
        CoefficientEnsemble::IIDDensity(table) => bound_iid(
            dimension,
            exponent,
            table.tail_rho,
            table.tail_c,
            table.bound_m,
        )?,
        CoefficientEnsemble::UniformUnitCube => {
            bound_uniform_cube(dimension, exponent)?
        }
        CoefficientEnsemble::ComplexGaussian => {
            return Err(config_error(
                "no logarithmic moment bound ships for the complex-gaussian \
                 ensemble",
            ))
        }
    };
    Ok(bound)
}

/// Shared-sample moment estimates over random directions, with the
/// ensemble's logarithmic moment bound attached to every record.
fn run_moments(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let ensemble = require_ensemble(plan)?;
    let name = plan
        .ensemble_name
        .ok_or_else(|| config_error("this experiment needs an ensemble"))?;
    let mut records = Vec::new();
    for &(dimension, trials) in &plan.schedule {
        let start = Instant::now();
        let mut direction_rng =
            stream_rng(substream(plan.seed, 2 * dimension as u64));
        let directions: Vec<Vec<C64>> = (0..MOMENT_DIRECTIONS)
            .map(|_| random_complex_direction(dimension, &mut direction_rng))
            .collect::<rpzeros::Result<_>>()?;
        let table = log_moment_sweep(
            ensemble,
            &directions,
            &MOMENT_EXPONENTS,
            trials,
            substream(plan.seed, 2 * dimension as u64 + 1),
        )?;
        for (exponent_index, &exponent) in MOMENT_EXPONENTS.iter().enumerate() {
            let bound = moment_bound(ensemble, dimension, exponent)?;
            for (direction, row) in table.iter().enumerate() {
                let estimate = row[exponent_index];
                records.push(MomentRecord {
                    ensemble: name.to_string(),
                    dimension,
                    exponent,
                    direction,
                    trials,
                    kept: estimate.kept,
                    discarded: estimate.discarded,
                    clamped: estimate.clamped,
                    estimate: estimate.mean,
                    standard_error: estimate.se,
                    bound: bound.name,
                    bound_value: bound.value,
                    holds: estimate.mean <= bound.value + 3.0 * estimate.se,
                });
            }
        }
        ctx.timing(format!("moments dimension {dimension}"), start);
    }
    let mut text = serde_json::to_string_pretty(&records)
        .map_err(|err| config_error(format!("cannot encode records: {err}")))?;
    text.push('\n');
    ctx.sink.write("moments.json", text.as_bytes())
}

/// Normalized linear-statistic fluctuations of the plane-Gaussian model
/// with a fixed bump test function in the unit-disk bulk.
fn run_clt(plan: &Plan, ctx: &mut RunContext) -> Result<()> {
    let bump = RadialBump::new(C64::new(0.0, 0.0), 0.5)?;
    let mut csv =
        String::from("degree,trials,mean,variance,ks_distance,degenerate\n");
    for &(degree, trials) in &plan.schedule {
        let start = Instant::now();
        let report = clt_experiment(
            &bump,
            degree,
            trials,
            1.0,
            substream(plan.seed, degree as u64),
        )?;
        ctx.timing(format!("clt degree {degree}"), start);
        let ks = report.ks.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{degree},{trials},{},{},{ks},{}",
            report.mean, report.variance, report.degenerate
        );
        let mut normalized = String::from("trial,normalized\n");
        for (trial, value) in report.normalized.iter().enumerate() {
            let _ = writeln!(normalized, "{trial},{value}");
        }
        ctx.sink.write(
            &format!("clt_normalized_p{degree}.csv"),
            normalized.as_bytes(),
        )?;
        if let Some(ks) = report.ks {
            ctx.residual(format!("ks_distance_p{degree}"), ks);
        }
    }
    ctx.sink.write("clt.csv", csv.as_bytes())
}

/// Binary PGM (P5) raster of the binned counts, max-normalized per
/// image, top row at the grid's largest imaginary part.
fn render_pgm(measure: &EmpiricalMeasure2D<f64>) -> Result<Vec<u8>> {
    let (bins, _) = measure.counts().ok_or_else(|| {
        CliError::Numeric("rasters need integer count data".into())
    })?;
    let grid = measure.grid();
    let (nx, ny) = (grid.nx, grid.ny);
    let max = bins.iter().copied().max().unwrap_or(0).max(1);
    let mut data = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    data.reserve(nx * ny);
    for row in 0..ny {
        let iy = ny - 1 - row;
        for ix in 0..nx {
            let count = bins[iy * nx + ix];
            data.push(((255 * count + max / 2) / max) as u8);
        }
    }
    Ok(data)
}
