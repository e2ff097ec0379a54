//! Run configuration: the JSON schema accepted via `--config` and the
//! merge with command-line overrides.

use crate::error::{Error, Result};
use crate::geometry::{OrientedLine, TripleConfig};
use crate::surface::Window;
use crate::trinoid::TrinoidSpec;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const DEFAULT_RESOLUTION: usize = 64;
pub const DEFAULT_R_EXCL: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 17;

/// The command to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum Mode {
    Classify,
    Solve,
    BuildSurface,
    BuildTrinoid,
    Verify,
}

/// Tolerances used by the verification checks; every field has the
/// module-level default and is echoed into the report.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Wronskian identity, relative.
    pub wronskian: f64,
    /// Connection-coefficient product identities.
    pub connection: f64,
    /// Chart continuation overlap, relative.
    pub overlap: f64,
    /// Period-system residual.
    pub residual: f64,
    /// Invariants after a line-classification round trip, relative.
    pub round_trip: f64,
    /// Log-linear weights Λ̂(0), Λ̂(1) of the selected period solution.
    pub hat_lambda: f64,
    /// Frame determinant drift along a sample path.
    pub det_drift: f64,
    /// Growth read-off against the requested end data.
    pub growth: f64,
    /// Pairwise distance of the fitted boundary planes.
    pub plane: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            wronskian: 1e-9,
            connection: 1e-12,
            overlap: 1e-10,
            residual: 1e-10,
            round_trip: 1e-9,
            hat_lambda: 1e-10,
            det_drift: 1e-8,
            growth: 1e-8,
            plane: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("wronskian", self.wronskian),
            ("connection", self.connection),
            ("overlap", self.overlap),
            ("residual", self.residual),
            ("round_trip", self.round_trip),
            ("hat_lambda", self.hat_lambda),
            ("det_drift", self.det_drift),
            ("growth", self.growth),
            ("plane", self.plane),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A full run description. Exactly one of `lines`, `config`, `mu` supplies
/// the input; everything else is optional with module defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Three oriented lines (classify / solve-from-lines input).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<[OrientedLine; 3]>,
    /// A seven-invariant configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<TripleConfig>,
    /// Trinoid end data μ = (μ0, μ1, μ∞).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<[f64; 3]>,
    /// Lift override for the angle invariants (congruent mod 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<[f64; 3]>,
    /// Verify this period triple instead of the solver's output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pqr: Option<[f64; 3]>,
    /// Which period solution the surface build uses (sorted order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_excl: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    /// Apply the rotation by π about the x3-axis, (λ, μ) → (−iλ, iμ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_reflection: Option<bool>,
    /// Classify output also reproduces a representative line triple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emit_lines: Option<bool>,
    /// Seed for the randomized sampled checks (recorded in reports).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    /// Output directory for meshes, reports and CSV samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Command-line values that override the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub mu: Option<[f64; 3]>,
    pub out: Option<PathBuf>,
    pub resolution: Option<usize>,
    pub r_excl: Option<f64>,
    pub flip_reflection: bool,
    pub emit_lines: bool,
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Merge a config file (if any) with command-line overrides and
    /// validate the result.
    pub fn from_sources(file: Option<RunConfig>, ov: Overrides) -> Result<RunConfig> {
        let mut cfg = file.unwrap_or(RunConfig {
            mode: None,
            lines: None,
            config: None,
            mu: None,
            lifts: None,
            pqr: None,
            solution_index: None,
            resolution: None,
            r_excl: None,
            window: None,
            flip_reflection: None,
            emit_lines: None,
            seed: None,
            tolerances: None,
            out: None,
        });
        cfg.mode = ov.mode.or(cfg.mode);
        cfg.mu = ov.mu.or(cfg.mu);
        cfg.out = ov.out.or(cfg.out);
        cfg.resolution = ov.resolution.or(cfg.resolution);
        cfg.r_excl = ov.r_excl.or(cfg.r_excl);
        if ov.flip_reflection {
            cfg.flip_reflection = Some(true);
        }
        if ov.emit_lines {
            cfg.emit_lines = Some(true);
        }
        cfg.seed = ov.seed.or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode.is_none() {
            return Err(Error::invalid(
                "no mode: pass one of classify, solve, build-surface, build-trinoid, verify",
            ));
        }
        let forms =
            self.lines.is_some() as u8 + self.config.is_some() as u8 + self.mu.is_some() as u8;
        if forms != 1 {
            return Err(Error::invalid(format!(
                "exactly one input form (lines, config, mu) must be supplied, got {forms}"
            )));
        }
        if let Some(r) = self.resolution {
            if r < 2 {
                return Err(Error::invalid("resolution must be at least 2"));
            }
        }
        if let Some(r) = self.r_excl {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::invalid("r_excl must be positive"));
            }
        }
        self.tolerances.unwrap_or_default().validate()?;
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode.expect("validated")
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    pub fn r_excl(&self) -> f64 {
        self.r_excl.unwrap_or(DEFAULT_R_EXCL)
    }

    pub fn window(&self) -> Window {
        self.window.unwrap_or_default()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn flip(&self) -> bool {
        self.flip_reflection.unwrap_or(false)
    }
}

/// The resolved input of a run.
#[derive(Debug, Clone)]
pub enum InputForm {
    Lines([OrientedLine; 3]),
    Config(TripleConfig),
    Mu(TrinoidSpec),
}

/// Extract and validate the single input form.
pub fn input_form(run: &RunConfig) -> Result<InputForm> {
    if let Some(lines) = run.lines {
        return Ok(InputForm::Lines(lines));
    }
    if let Some(cfg) = run.config {
        return Ok(InputForm::Config(cfg));
    }
    if let Some([a, b, c]) = run.mu {
        return Ok(InputForm::Mu(TrinoidSpec::new(a, b, c)?));
    }
    Err(Error::invalid("no input form supplied"))
}
