//! Experiment configuration: one TOML file holding the degradation, patching
//! and ISP settings.
//!
//! ```toml
//! noise_registry = "profiles.txt"   # optional, relative to this file
//!
//! [degradation]
//! level = "IV"
//! scale = 2
//! seed = 1
//!
//! [patch]
//! size = 248
//!
//! [isp]
//! gamma = "srgb"
//! ```
//!
//! A `noise_registry` file replaces any profiles given inline under
//! `[degradation.noise]`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isp::IspParams;
use crate::noise::ProfileRegistry;
use crate::pipeline::{DegradationConfig, PatchConfig, SynthConfig};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub noise_registry: Option<PathBuf>,
    pub degradation: DegradationConfig,
    pub patch: PatchConfig,
    pub isp: IspParams,
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::format("config", e.to_string()))?;
        if let Some(reg) = &cfg.noise_registry {
            let path = base_dir.join(reg);
            cfg.degradation.noise = ProfileRegistry::load(&path)?;
        }
        cfg.degradation.kernels.psf_files = cfg
            .degradation
            .kernels
            .psf_files
            .iter()
            .map(|p| base_dir.join(p))
            .collect();
        cfg.degradation.validate()?;
        cfg.isp.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn synth(&self) -> SynthConfig {
        SynthConfig {
            degradation: self.degradation.clone(),
            patch: self.patch.clone(),
        }
    }
}
