//! Job descriptions: JSON configuration schema, validation, and the
//! translation into core-library objects.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;
use shellspec_core::curve::{CurveFamily, CurveSpec, SampledCurve};
use shellspec_core::dirac::InteractionParams;

/// Failure modes with distinct process exit codes: a malformed or
/// inconsistent job description (exit 2) versus a numerical failure during
/// a well-formed job (exit 3).
#[derive(Debug)]
pub enum JobError {
    Config(String),
    Numerics(String),
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JobError::Config(msg) => write!(f, "configuration error: {msg}"),
            JobError::Numerics(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for JobError {}

pub fn config_err(msg: impl Into<String>) -> JobError {
    JobError::Config(msg.into())
}

/// Which job to run; mirrored by the CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Bands,
    Scan,
    Certify,
    Nonrel,
    Selfcheck,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CommandKind::Bands => "bands",
            CommandKind::Scan => "scan",
            CommandKind::Certify => "certify",
            CommandKind::Nonrel => "nonrel",
            CommandKind::Selfcheck => "selfcheck",
        };
        f.write_str(name)
    }
}

/// Top-level job description.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: CommandKind,
    #[serde(default)]
    pub params: Option<InteractionParams>,
    #[serde(default)]
    pub curve: Option<CurveConfig>,
    #[serde(default)]
    pub numerics: Option<NumericsConfig>,
    #[serde(default)]
    pub certificate: Option<CertificateConfig>,
}

/// Curve geometry: the core curve family plus an optional base point.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    #[serde(flatten)]
    pub family: CurveFamily,
    #[serde(default)]
    pub base_point: Option<[f64; 2]>,
}

/// Discretization and scan controls, plus artifact paths (resolved
/// relative to the output directory).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    pub nodes_per_unit: f64,
    pub truncation_halflength: f64,
    #[serde(default = "default_scan_steps")]
    pub scan_steps: usize,
    /// Spectral window for scans; defaults to the hull of the scannable
    /// gap complement.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    /// Light-speed grid for the nonrelativistic-limit experiment.
    #[serde(default)]
    pub light_speeds: Option<Vec<f64>>,
    /// Off-curve points at which to reconstruct the leading eigenfunction.
    #[serde(default)]
    pub field_grid: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub json_path: Option<PathBuf>,
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub field_csv_path: Option<PathBuf>,
}

fn default_scan_steps() -> usize {
    40
}

/// Certificate-specific inputs. With both `support_scale` and `half_angle`
/// present the certificate is evaluated at that point; otherwise the
/// admissible-angle search selects them.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    #[serde(default = "default_target_count")]
    pub target_count: u32,
    #[serde(default)]
    pub support_scale: Option<f64>,
    #[serde(default)]
    pub half_angle: Option<f64>,
}

fn default_target_count() -> u32 {
    1
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, JobError> {
        let cfg: JobConfig = serde_json::from_str(text)
            .map_err(|e| config_err(format!("cannot parse job description: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), JobError> {
        if let Some(p) = &self.params {
            for (name, v) in [
                ("eta", p.eta),
                ("tau", p.tau),
                ("lambda", p.lambda),
                ("mass", p.mass),
                ("light_speed", p.light_speed),
            ] {
                if !v.is_finite() {
                    return Err(config_err(format!("params.{name} must be finite, got {v}")));
                }
            }
        }
        if let Some(n) = &self.numerics {
            if !(n.nodes_per_unit > 0.0 && n.nodes_per_unit.is_finite()) {
                return Err(config_err(format!(
                    "numerics.nodes_per_unit must be positive, got {}",
                    n.nodes_per_unit
                )));
            }
            if !(n.truncation_halflength > 0.0 && n.truncation_halflength.is_finite()) {
                return Err(config_err(format!(
                    "numerics.truncation_halflength must be positive, got {}",
                    n.truncation_halflength
                )));
            }
            if n.scan_steps < 2 {
                return Err(config_err(format!(
                    "numerics.scan_steps must be at least 2, got {}",
                    n.scan_steps
                )));
            }
            if let Some([lo, hi]) = n.window {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(config_err(format!(
                        "numerics.window must be a finite increasing pair, got [{lo}, {hi}]"
                    )));
                }
            }
            if let Some(cs) = &n.light_speeds {
                if cs.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
                    return Err(config_err("numerics.light_speeds must all be positive"));
                }
            }
        }
        if let Some(cert) = &self.certificate {
            if let Some(l) = cert.support_scale {
                if !(l > 0.0 && l.is_finite()) {
                    return Err(config_err(format!(
                        "certificate.support_scale must be positive, got {l}"
                    )));
                }
            }
            if let Some(w) = cert.half_angle {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(config_err(format!(
                        "certificate.half_angle must be positive, got {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn require_params(&self) -> Result<InteractionParams, JobError> {
        let raw = self
            .params
            .as_ref()
            .ok_or_else(|| config_err(format!("command '{}' needs a params section", self.command)))?;
        InteractionParams::new(raw.eta, raw.tau, raw.lambda, raw.mass, raw.light_speed)
            .map_err(|e| config_err(format!("invalid params: {e}")))
    }

    pub fn require_numerics(&self) -> Result<&NumericsConfig, JobError> {
        self.numerics.as_ref().ok_or_else(|| {
            config_err(format!("command '{}' needs a numerics section", self.command))
        })
    }

    pub fn require_curve(&self) -> Result<SampledCurve, JobError> {
        let cc = self
            .curve
            .as_ref()
            .ok_or_else(|| config_err(format!("command '{}' needs a curve section", self.command)))?;
        let numerics = self.require_numerics()?;
        let spec = CurveSpec::build(cc.family.clone(), cc.base_point.unwrap_or([0.0, 0.0]))
            .map_err(|e| config_err(format!("invalid curve: {e}")))?;
        spec.sample(numerics.nodes_per_unit, numerics.truncation_halflength)
            .map_err(|e| config_err(format!("cannot sample curve: {e}")))
    }
}
