//! Run configuration: a JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use feq_core::feq::{Mode, SamplePlan};
use feq_core::mellin::QuadratureParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Which files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Quadrature settings a run may override.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub target_tol: Option<f64>,
    pub level_max: Option<u32>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
}

impl QuadratureOverrides {
    pub fn apply(&self, mut p: QuadratureParams) -> QuadratureParams {
        if let Some(t) = self.target_tol {
            p.target_tol = t;
        }
        if let Some(l) = self.level_max {
            p.level_max = l;
        }
        if let Some(x) = self.x_min {
            p.x_min = x;
        }
        if let Some(x) = self.x_max {
            p.x_max = x;
        }
        p
    }
}

/// Everything a run needs. Field names follow the flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// Case ids; empty selects the whole registry.
    #[serde(default)]
    pub cases: Vec<String>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Replaces the per-route default tolerances.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub format: Format,
    /// Worker threads; `0` uses every core.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub no_timestamp: bool,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    /// Replaces the sample plan of every selected case.
    #[serde(default)]
    pub sample_plan: Option<SamplePlan>,
}

fn default_out() -> PathBuf {
    PathBuf::from("feq-reports")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: Vec::new(),
            out: default_out(),
            tol: None,
            mode: None,
            format: Format::default(),
            jobs: 0,
            no_timestamp: false,
            quadrature: QuadratureOverrides::default(),
            sample_plan: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn quadrature_params(&self) -> QuadratureParams {
        self.quadrature.apply(QuadratureParams::default())
    }

    /// Reject values no run could use.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        self.quadrature_params()
            .validate()
            .map_err(|e| CliError::Usage(format!("quadrature settings: {e}")))
    }
}
