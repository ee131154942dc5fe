use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    default_disk_size, default_gaussian_size, default_motion_size, KernelSpec,
};
use crate::noise::ProfileRegistry;
use crate::photometric::{ResampleFilter, MAX_EXPOSURE_FACTOR};

/// Degradation level, from classical restoration (I) to the full stochastic
/// pipeline (IV).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    /// Blur and noise.
    I,
    /// Blur, downsampling and noise.
    II,
    /// Level II plus exposure change.
    III,
    /// Level III plus a second kernel and an extra resampling round trip,
    /// every stage gated by its probability.
    IV,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::I, Level::II, Level::III, Level::IV];

    pub fn downsamples(self) -> bool {
        self >= Level::II
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::I => "I",
            Level::II => "II",
            Level::III => "III",
            Level::IV => "IV",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Level::I),
            "II" | "2" => Ok(Level::II),
            "III" | "3" => Ok(Level::III),
            "IV" | "4" => Ok(Level::IV),
            other => Err(Error::invalid(format!("unknown degradation level `{other}`"))),
        }
    }
}

/// Selection weights and parameter ranges for the blur kernel pool.
/// Parameters are drawn uniformly within their ranges; angles uniformly in
/// `[0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelPool {
    pub iso_gaussian_weight: f64,
    pub aniso_gaussian_weight: f64,
    pub disk_weight: f64,
    pub motion_weight: f64,
    /// Only counts when `psf_files` is nonempty.
    pub psf_weight: f64,
    /// Range for the isotropic σ and for each anisotropic axis.
    pub sigma: [f64; 2],
    pub disk_radius: [f64; 2],
    pub motion_length: [f64; 2],
    pub psf_files: Vec<PathBuf>,
}

impl Default for KernelPool {
    fn default() -> Self {
        KernelPool {
            iso_gaussian_weight: 1.0,
            aniso_gaussian_weight: 1.0,
            disk_weight: 1.0,
            motion_weight: 1.0,
            psf_weight: 1.0,
            sigma: [0.2, 2.0],
            disk_radius: [0.5, 2.5],
            motion_length: [1.0, 7.0],
            psf_files: Vec::new(),
        }
    }
}

fn uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    lo + u * (hi - lo)
}

fn check_range(label: &str, [lo, hi]: [f64; 2], min_exclusive: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo > min_exclusive && lo <= hi) {
        return Err(Error::invalid(format!(
            "{label} range [{lo}, {hi}] must be ordered and above {min_exclusive}"
        )));
    }
    Ok(())
}

fn check_probability(label: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{label} probability {p} outside [0, 1]")));
    }
    Ok(())
}

impl KernelPool {
    /// Pool holding only a fixed isotropic Gaussian.
    pub fn fixed_gaussian(sigma: f64) -> Self {
        KernelPool {
            iso_gaussian_weight: 1.0,
            aniso_gaussian_weight: 0.0,
            disk_weight: 0.0,
            motion_weight: 0.0,
            psf_weight: 0.0,
            sigma: [sigma, sigma],
            ..KernelPool::default()
        }
    }

    fn effective_weights(&self) -> [f64; 5] {
        let psf = if self.psf_files.is_empty() { 0.0 } else { self.psf_weight };
        [
            self.iso_gaussian_weight,
            self.aniso_gaussian_weight,
            self.disk_weight,
            self.motion_weight,
            psf,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let weights = self.effective_weights();
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("kernel pool weights must be nonnegative"));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid("kernel pool has no selectable kind"));
        }
        check_range("sigma", self.sigma, 0.0)?;
        check_range("disk_radius", self.disk_radius, 0.0)?;
        check_range("motion_length", self.motion_length, 0.0)?;
        if self.motion_length[0] < 1.0 {
            return Err(Error::invalid("motion_length must be at least 1"));
        }
        Ok(())
    }

    pub fn sample(&self, rng: &mut impl Rng) -> KernelSpec {
        let weights = self.effective_weights();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut kind = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 && u < w {
                kind = i;
                break;
            }
            u -= w;
        }
        match kind {
            0 => {
                let sigma = uniform(rng, self.sigma);
                KernelSpec::IsoGaussian {
                    sigma,
                    size: default_gaussian_size(sigma),
                }
            }
            1 => {
                let sigma_x = uniform(rng, self.sigma);
                let sigma_y = uniform(rng, self.sigma);
                let theta = uniform(rng, [0.0, std::f64::consts::PI]);
                KernelSpec::AnisoGaussian {
                    sigma_x,
                    sigma_y,
                    theta,
                    size: default_gaussian_size(sigma_x.max(sigma_y)),
                }
            }
            2 => {
                let radius = uniform(rng, self.disk_radius);
                KernelSpec::Disk {
                    radius,
                    size: default_disk_size(radius),
                }
            }
            3 => self.sample_motion(rng),
            _ => {
                let i = rng.random_range(0..self.psf_files.len());
                KernelSpec::MeasuredPsf {
                    path: self.psf_files[i].clone(),
                }
            }
        }
    }

    pub fn sample_motion(&self, rng: &mut impl Rng) -> KernelSpec {
        let length = uniform(rng, self.motion_length);
        let angle = uniform(rng, [0.0, std::f64::consts::PI]);
        KernelSpec::Motion {
            length,
            angle,
            size: default_motion_size(length),
        }
    }
}

/// Where the optional level-IV second kernel comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SecondKernelSource {
    /// A motion trajectory drawn from the pool's motion ranges.
    #[default]
    Motion,
    /// Any kind from the pool, allowing two PSFs in sequence.
    Pool,
}

/// Level-IV stage gates. Levels I–III apply their stages unconditionally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageProbabilities {
    pub blur: f64,
    pub exposure: f64,
    pub second_kernel: f64,
    pub resample: f64,
}

impl Default for StageProbabilities {
    fn default() -> Self {
        StageProbabilities {
            blur: 1.0,
            exposure: 1.0,
            second_kernel: 0.3,
            resample: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegradationConfig {
    pub level: Level,
    /// Downsampling factor for levels II–IV; ignored by level I.
    pub scale: usize,
    pub filter: ResampleFilter,
    pub seed: u64,
    pub exposure: [f64; 2],
    pub kernels: KernelPool,
    pub noise: ProfileRegistry,
    pub probabilities: StageProbabilities,
    pub second_kernel: SecondKernelSource,
}

impl Default for DegradationConfig {
    fn default() -> Self {
        DegradationConfig {
            level: Level::IV,
            scale: 2,
            filter: ResampleFilter::Bicubic,
            seed: 0,
            exposure: [0.25, 1.0],
            kernels: KernelPool::default(),
            noise: ProfileRegistry::default(),
            probabilities: StageProbabilities::default(),
            second_kernel: SecondKernelSource::Motion,
        }
    }
}

impl DegradationConfig {
    pub fn validate(&self) -> Result<()> {
        if ![1, 2, 4].contains(&self.scale) {
            return Err(Error::invalid(format!("scale {} not in {{1, 2, 4}}", self.scale)));
        }
        if self.level.downsamples() && self.scale < 2 {
            return Err(Error::invalid(format!(
                "level {} requires scale >= 2",
                self.level
            )));
        }
        check_range("exposure", self.exposure, 0.0)?;
        if self.exposure[1] > MAX_EXPOSURE_FACTOR {
            return Err(Error::invalid(format!(
                "exposure factors above {MAX_EXPOSURE_FACTOR} are not supported"
            )));
        }
        let p = &self.probabilities;
        check_probability("blur", p.blur)?;
        check_probability("exposure", p.exposure)?;
        check_probability("second_kernel", p.second_kernel)?;
        check_probability("resample", p.resample)?;
        self.kernels.validate()?;
        self.noise.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn defaults_are_valid() {
        DegradationConfig::default().validate().unwrap();
    }

    #[test]
    #[allow(clippy::field_reassign_with_default)]
    fn invalid_configs() {
        let mut c = DegradationConfig::default();
        c.scale = 1;
        assert!(c.validate().is_err());
        c.level = Level::I;
        c.validate().unwrap();
        c.scale = 3;
        assert!(c.validate().is_err());

        let mut c = DegradationConfig::default();
        c.probabilities.second_kernel = 1.5;
        assert!(c.validate().is_err());

        let mut c = DegradationConfig::default();
        c.exposure = [0.8, 0.2];
        assert!(c.validate().is_err());

        let mut c = DegradationConfig::default();
        c.kernels = KernelPool {
            iso_gaussian_weight: 0.0,
            aniso_gaussian_weight: 0.0,
            disk_weight: 0.0,
            motion_weight: 0.0,
            ..KernelPool::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn level_parsing() {
        assert_eq!("iv".parse::<Level>().unwrap(), Level::IV);
        assert_eq!("2".parse::<Level>().unwrap(), Level::II);
        assert!("V".parse::<Level>().is_err());
    }

    #[test]
    fn pool_samples_every_enabled_kind() {
        let pool = KernelPool::default();
        let mut rng = rng::stream(3);
        let mut kinds = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let spec = pool.sample(&mut rng);
            spec.build().unwrap().check_invariants().unwrap();
            kinds.insert(spec.kind_name());
        }
        assert_eq!(kinds.len(), 4, "{kinds:?}");
        assert!(!kinds.contains("measured_psf"));
    }

    #[test]
    fn config_parses_from_toml() {
        let text = r#"
            level = "II"
            scale = 4
            filter = "box"
            seed = 9
            [kernels]
            disk_weight = 0.0
            sigma = [0.5, 1.0]
            [probabilities]
            second_kernel = 0.0
            [noise]
            profiles = [{ name = "a", lambda_shot = [0.01, 0.02], lambda_read = [0.001, 0.001] }]
        "#;
        let c: DegradationConfig = toml::from_str(text).unwrap();
        assert_eq!(c.level, Level::II);
        assert_eq!(c.filter, ResampleFilter::Box);
        assert_eq!(c.kernels.sigma, [0.5, 1.0]);
        assert_eq!(c.kernels.motion_weight, 1.0);
        assert_eq!(c.noise.profiles().len(), 1);
        c.validate().unwrap();
    }
}
