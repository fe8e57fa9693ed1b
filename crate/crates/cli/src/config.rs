//! Experiment configuration files and the compiled-in presets.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hqa_core::mip::{MipDriver, MipInstance};
use hqa_core::model::HybridProblemSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MipAnneal,
    AppendixLabVsEff,
    EnergyDiagram,
    OracleOnly,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MipAnneal => "mip-anneal",
            Mode::AppendixLabVsEff => "appendix-lab-vs-eff",
            Mode::EnergyDiagram => "energy-diagram",
            Mode::OracleOnly => "oracle-only",
        })
    }
}

/// Pass/fail limits written into `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Checks {
    /// `|final ⟨H_P⟩ − E₀|`.
    pub energy_tol: f64,
    pub y_tol: f64,
    pub x_tol: f64,
    /// Targets for the final `y`/`x`; the oracle optimum when absent.
    pub expected_y: Option<Vec<f64>>,
    pub expected_x: Option<Vec<f64>>,
    pub adiabaticity_max: f64,
    pub adiabaticity_points: usize,
    /// Largest change allowed by the convergence report.
    pub convergence_tol: f64,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            energy_tol: 1e-2,
            y_tol: 0.05,
            x_tol: 0.02,
            expected_y: None,
            expected_x: None,
            adiabaticity_max: 0.1,
            adiabaticity_points: 101,
            convergence_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagramOptions {
    pub grid_points: usize,
    pub levels: usize,
}

impl Default for DiagramOptions {
    fn default() -> Self {
        Self {
            grid_points: 200,
            levels: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppendixOptions {
    /// Lab-frame tolerance; `integrator_tol` when absent.
    pub lab_tol: Option<f64>,
    pub period_stride: usize,
    /// Uniform samples for the continuous curves, on top of the stroboscopic ones.
    pub extra_samples: usize,
}

impl Default for AppendixOptions {
    fn default() -> Self {
        Self {
            lab_tol: None,
            period_stride: 1,
            extra_samples: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub mode: Mode,
    /// Fock levels per resonator.
    pub truncation: usize,
    pub total_time: f64,
    pub integrator_tol: f64,
    /// Uniform trajectory samples, endpoints included.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_true")]
    pub plots: bool,
    #[serde(default)]
    pub mip: Option<MipInstance>,
    #[serde(default)]
    pub driver: Option<MipDriver>,
    #[serde(default)]
    pub hybrid: Option<HybridProblemSpec>,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub diagram: DiagramOptions,
    #[serde(default)]
    pub appendix: AppendixOptions,
}

fn default_samples() -> usize {
    401
}

fn default_true() -> bool {
    true
}

pub const PRESETS: [&str; 2] = ["paper-fig1-3", "paper-appendix"];

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        "paper-fig1-3" => ExperimentConfig {
            name: name.into(),
            mode: Mode::MipAnneal,
            truncation: 8,
            total_time: 4000.0,
            integrator_tol: 1e-8,
            samples: 401,
            out: None,
            plots: true,
            mip: Some(MipInstance::production_planning()),
            driver: Some(MipDriver::uniform(2, 1.0, 1.0)),
            hybrid: None,
            checks: Checks {
                expected_y: Some(vec![1.0, 0.0]),
                expected_x: Some(vec![1.07, 0.69]),
                ..Checks::default()
            },
            diagram: DiagramOptions::default(),
            appendix: AppendixOptions::default(),
        },
        "paper-appendix" => ExperimentConfig {
            name: name.into(),
            mode: Mode::AppendixLabVsEff,
            truncation: 10,
            total_time: 408.2,
            integrator_tol: 1e-9,
            samples: 401,
            out: None,
            plots: true,
            mip: None,
            driver: None,
            hybrid: Some(HybridProblemSpec::single_pair(
                153.9, 153.7, 154.1, 0.55, 0.30, 0.15, 0.25,
            )),
            checks: Checks::default(),
            diagram: DiagramOptions::default(),
            appendix: AppendixOptions {
                lab_tol: Some(1e-9),
                period_stride: 1,
                extra_samples: 4001,
            },
        },
        other => bail!(
            "unknown preset {other:?}; available: {}",
            PRESETS.join(", ")
        ),
    };
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            bail!("truncation must be at least 2, got {}", self.truncation);
        }
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            bail!("total_time must be positive, got {}", self.total_time);
        }
        if !(self.integrator_tol > 0.0 && self.integrator_tol < 1.0) {
            bail!("integrator_tol must be in (0, 1), got {}", self.integrator_tol);
        }
        if self.samples < 2 {
            bail!("samples must be at least 2");
        }
        match self.mode {
            Mode::MipAnneal => {
                self.mip_parts()?;
            }
            Mode::OracleOnly => {
                self.mip.as_ref().context("mode oracle-only needs a [mip] section")?.validate()?;
            }
            Mode::AppendixLabVsEff => {
                let h = self
                    .hybrid
                    .as_ref()
                    .context("mode appendix-lab-vs-eff needs a [hybrid] section")?;
                h.validate()?;
                if h.drive_frequency.is_none() {
                    bail!("[hybrid] needs drive_frequency for mode appendix-lab-vs-eff");
                }
                if self.appendix.period_stride == 0 {
                    bail!("[appendix] period_stride must be at least 1");
                }
            }
            Mode::EnergyDiagram => {
                if let Some(h) = &self.hybrid {
                    h.validate()?;
                } else {
                    self.mip_parts()?;
                }
                if self.diagram.grid_points < 2 {
                    bail!("[diagram] grid_points must be at least 2");
                }
            }
        }
        Ok(())
    }

    pub fn mip_parts(&self) -> Result<(&MipInstance, &MipDriver)> {
        let inst = self
            .mip
            .as_ref()
            .with_context(|| format!("mode {} needs a [mip] section", self.mode))?;
        let driver = self
            .driver
            .as_ref()
            .with_context(|| format!("mode {} needs a [driver] section", self.mode))?;
        inst.validate()?;
        Ok((inst, driver))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_through_toml() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
            let text = cfg.to_toml().unwrap();
            assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
        }
    }

    #[test]
    fn parse_error_names_the_field() {
        let mut text = preset("paper-fig1-3").unwrap().to_toml().unwrap();
        text = text.replace("truncation = 8", "truncation = \"eight\"");
        let err = format!("{:#}", ExperimentConfig::from_toml(&text).unwrap_err());
        assert!(err.contains("truncation"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn mode_specific_sections_required() {
        let mut cfg = preset("paper-fig1-3").unwrap();
        cfg.mode = Mode::AppendixLabVsEff;
        assert!(cfg.validate().is_err());
        let mut cfg = preset("paper-appendix").unwrap();
        cfg.mode = Mode::OracleOnly;
        assert!(cfg.validate().is_err());
        cfg.mode = Mode::EnergyDiagram;
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_numbers() {
        let mut cfg = preset("paper-fig1-3").unwrap();
        cfg.truncation = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = preset("paper-fig1-3").unwrap();
        cfg.total_time = 0.0;
        assert!(cfg.validate().is_err());
    }
}
