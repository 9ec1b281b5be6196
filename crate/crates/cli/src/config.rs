//! Experiment configuration: a single flat JSON document with unknown
//! keys rejected, plus the validation that decides which keys each
//! experiment kind accepts.

use std::fmt;
use std::path::PathBuf;

use rpzeros::basis::{SpaceKind, MAX_SQUARE_DEGREE};
use rpzeros::ensembles::{CoefficientEnsemble, TabulatedDensity};
use serde::{Deserialize, Serialize};

use crate::error::{config_error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Onb,
    Zeros,
    Equilibrium,
    Realzeros,
    Moments,
    Clt,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ExperimentKind::Onb => "onb",
            ExperimentKind::Zeros => "zeros",
            ExperimentKind::Equilibrium => "equilibrium",
            ExperimentKind::Realzeros => "realzeros",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Clt => "clt",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceName {
    UnitSquare,
    PlaneGaussian,
    FubiniStudy,
}

impl SpaceName {
    pub fn kind(self) -> SpaceKind {
        match self {
            SpaceName::UnitSquare => SpaceKind::UnitSquareQ,
            SpaceName::PlaneGaussian => SpaceKind::PlaneGaussian,
            SpaceName::FubiniStudy => SpaceKind::FubiniStudy,
        }
    }
}

impl fmt::Display for SpaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SpaceName::UnitSquare => "unit-square",
            SpaceName::PlaneGaussian => "plane-gaussian",
            SpaceName::FubiniStudy => "fubini-study",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleName {
    ComplexGaussian,
    RealGaussian,
    Radial,
    Sphere,
    IidDensity,
    UniformCube,
}

impl fmt::Display for EnsembleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EnsembleName::ComplexGaussian => "complex-gaussian",
            EnsembleName::RealGaussian => "real-gaussian",
            EnsembleName::Radial => "radial",
            EnsembleName::Sphere => "sphere",
            EnsembleName::IidDensity => "iid-density",
            EnsembleName::UniformCube => "uniform-cube",
        };
        f.write_str(name)
    }
}

/// One experiment, one flat document. Optional keys are only accepted
/// by the experiment kinds that consume them.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleName>,
    /// Radial coefficient density exponent (radial ensemble only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Tabulated coefficient density as (x, value) pairs (iid-density
    /// ensemble only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<(f64, f64)>>,
    /// Tail constant `c` with `∫_{|x|>e^R} density ≤ c R^{-ρ}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_c: Option<f64>,
    /// Tail exponent `ρ` in the same bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_rho: Option<f64>,
    /// Uniform density bound `M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_m: Option<f64>,
    /// Polynomial degrees, or coefficient-vector dimensions for the
    /// moments experiment.
    pub degrees: Vec<usize>,
    /// Monte Carlo repetitions per degree.
    pub trials: usize,
    pub seed: u64,
    /// Histogram bins `[nx, ny]` (zeros and equilibrium only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    /// Histogram window `[x_min, x_max, y_min, y_max]`.
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 4]>,
    pub out: PathBuf,
}

pub const DEFAULT_GRID: [usize; 2] = [64, 64];
pub const DEFAULT_BOUNDS: [f64; 4] = [-2.0, 2.0, -2.0, 2.0];

impl ExperimentConfig {
    /// Parses a config document, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)
            .map_err(|err| config_error(format!("invalid config: {err}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Cross-field validation: global invariants first, then the
    /// per-experiment key contracts.
    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(config_error("degrees must list at least one entry"));
        }
        if self.degrees.contains(&0) {
            return Err(config_error("degrees must all be at least 1"));
        }
        let mut sorted = self.degrees.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.degrees.len() {
            return Err(config_error(
                "degrees must be distinct; duplicate entries would \
                 overwrite each other's output files",
            ));
        }
        if self.trials == 0 {
            return Err(config_error("trials must be at least 1"));
        }
        if let Some([nx, ny]) = self.grid {
            if nx < 2 || ny < 2 {
                return Err(config_error(format!(
                    "grid dimensions must both be at least 2, got [{nx}, {ny}]"
                )));
            }
        }
        if let Some([x0, x1, y0, y1]) = self.bounds {
            let finite = [x0, x1, y0, y1].iter().all(|v| v.is_finite());
            if !finite || x0 >= x1 || y0 >= y1 {
                return Err(config_error(format!(
                    "box must be finite with x_min < x_max and y_min < y_max, \
                     got [{x0}, {x1}, {y0}, {y1}]"
                )));
            }
        }
        if self.out.as_os_str().is_empty() {
            return Err(config_error("out must name an output directory"));
        }
        self.validate_ensemble_keys()?;
        match self.experiment {
            ExperimentKind::Onb => {
                self.require_space()?;
                self.forbid_ensemble()?;
                self.forbid_window()?;
            }
            ExperimentKind::Zeros | ExperimentKind::Equilibrium => {
                self.require_space()?;
                self.require_ensemble()?;
            }
            ExperimentKind::Realzeros => {
                self.forbid_window()?;
                let ensemble = self.require_ensemble()?;
                if !self.build_ensemble()?.is_real_supported() {
                    return Err(config_error(format!(
                        "realzeros needs real coefficients; the {ensemble} \
                         ensemble draws complex ones"
                    )));
                }
                if self.space == Some(SpaceName::UnitSquare) {
                    return Err(config_error(
                        "no real-zero reference is available for the \
                         unit-square space; use plane-gaussian, fubini-study, \
                         or omit space for the monomial model",
                    ));
                }
            }
            ExperimentKind::Moments => {
                self.forbid_window()?;
                if self.space.is_some() {
                    return Err(config_error(
                        "moments runs on coefficient vectors; space does not \
                         apply",
                    ));
                }
                let ensemble = self.require_ensemble()?;
                if ensemble == EnsembleName::ComplexGaussian {
                    return Err(config_error(
                        "no logarithmic moment bound ships for the \
                         complex-gaussian ensemble",
                    ));
                }
                if ensemble == EnsembleName::Sphere
                    && self.degrees.iter().any(|&k| k < 3)
                {
                    return Err(config_error(
                        "the sphere moment bound needs dimension at least 3",
                    ));
                }
            }
            ExperimentKind::Clt => {
                self.forbid_window()?;
                if let Some(space) = self.space {
                    if space != SpaceName::PlaneGaussian {
                        return Err(config_error(format!(
                            "the fluctuation experiment is pinned to the \
                             plane-gaussian space, got {space}"
                        )));
                    }
                }
                if let Some(ensemble) = self.ensemble {
                    if ensemble != EnsembleName::ComplexGaussian {
                        return Err(config_error(format!(
                            "the fluctuation experiment is pinned to \
                             complex-gaussian coefficients, got {ensemble}"
                        )));
                    }
                }
            }
        }
        if self.space == Some(SpaceName::UnitSquare) {
            if let Some(&p) = self.degrees.iter().find(|&&p| p > MAX_SQUARE_DEGREE) {
                return Err(config_error(format!(
                    "unit-square degrees are capped at {MAX_SQUARE_DEGREE} \
                     (quadrature certification limit), got {p}"
                )));
            }
        }
        Ok(())
    }

    /// Builds the coefficient ensemble, treating construction failures
    /// (a bad tabulated density, a non-positive alpha) as config errors.
    pub fn build_ensemble(&self) -> Result<CoefficientEnsemble<f64>> {
        let name = self.require_ensemble()?;
        let ensemble = match name {
            EnsembleName::ComplexGaussian => CoefficientEnsemble::ComplexGaussian,
            EnsembleName::RealGaussian => CoefficientEnsemble::RealGaussian,
            EnsembleName::Radial => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| config_error("the radial ensemble needs alpha"))?;
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(config_error(format!(
                        "alpha must be a positive finite number, got {alpha}"
                    )));
                }
                CoefficientEnsemble::RadialDensity { alpha }
            }
            EnsembleName::Sphere => CoefficientEnsemble::SphereUniform,
            EnsembleName::UniformCube => CoefficientEnsemble::UniformUnitCube,
            EnsembleName::IidDensity => {
                let points = self.density.as_ref().ok_or_else(|| {
                    config_error("the iid-density ensemble needs a density table")
                })?;
                let (tail_c, tail_rho, bound_m) =
                    match (self.tail_c, self.tail_rho, self.bound_m) {
                        (Some(c), Some(rho), Some(m)) => (c, rho, m),
                        _ => {
                            return Err(config_error(
                                "the iid-density ensemble needs tail_c, \
                                 tail_rho, and bound_m",
                            ))
                        }
                    };
                let table = TabulatedDensity::new(points, tail_c, tail_rho, bound_m)
                    .map_err(|err| {
                        config_error(format!("invalid density table: {err}"))
                    })?;
                CoefficientEnsemble::IIDDensity(table)
            }
        };
        Ok(ensemble)
    }

    fn require_space(&self) -> Result<SpaceName> {
        self.space.ok_or_else(|| {
            config_error(format!("the {} experiment needs a space", self.experiment))
        })
    }

    fn require_ensemble(&self) -> Result<EnsembleName> {
        self.ensemble.ok_or_else(|| {
            config_error(format!(
                "the {} experiment needs an ensemble",
                self.experiment
            ))
        })
    }

    fn forbid_ensemble(&self) -> Result<()> {
        if self.ensemble.is_some() {
            return Err(config_error(format!(
                "the {} experiment takes no ensemble",
                self.experiment
            )));
        }
        Ok(())
    }

    fn forbid_window(&self) -> Result<()> {
        if self.grid.is_some() || self.bounds.is_some() {
            return Err(config_error(format!(
                "the {} experiment takes no grid or box",
                self.experiment
            )));
        }
        Ok(())
    }

    /// Ensemble parameter keys may only appear with the ensemble that
    /// consumes them, so a typo cannot silently change an experiment.
    fn validate_ensemble_keys(&self) -> Result<()> {
        let radial = self.ensemble == Some(EnsembleName::Radial);
        if self.alpha.is_some() && !radial {
            return Err(config_error("alpha only applies to the radial ensemble"));
        }
        let tabulated = self.ensemble == Some(EnsembleName::IidDensity);
        if !tabulated
            && (self.density.is_some()
                || self.tail_c.is_some()
                || self.tail_rho.is_some()
                || self.bound_m.is_some())
        {
            return Err(config_error(
                "density, tail_c, tail_rho, and bound_m only apply to the \
                 iid-density ensemble",
            ));
        }
        Ok(())
    }
}
