use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::NoiseProfile;
use crate::error::{Error, Result};
use crate::{kv, rng};

/// A named sensor with log-uniform sampling ranges for both lambdas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRange {
    pub name: String,
    pub lambda_shot: [f64; 2],
    pub lambda_read: [f64; 2],
}

impl ProfileRange {
    pub fn fixed(p: &NoiseProfile) -> Self {
        ProfileRange {
            name: p.name.clone(),
            lambda_shot: [p.lambda_shot; 2],
            lambda_read: [p.lambda_read; 2],
        }
    }

    fn validate(&self) -> Result<()> {
        for (label, [lo, hi]) in [("lambda_s", self.lambda_shot), ("lambda_r", self.lambda_read)] {
            let ok = lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi && (lo > 0.0 || hi == 0.0);
            if !ok {
                return Err(Error::invalid(format!(
                    "profile `{}`: {label} range [{lo}, {hi}] must be positive and ordered (or exactly zero)",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

fn log_uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRegistry {
    profiles: Vec<ProfileRange>,
}

impl ProfileRegistry {
    pub fn new(profiles: Vec<ProfileRange>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::invalid("noise registry is empty"));
        }
        for p in &profiles {
            p.validate()?;
        }
        Ok(ProfileRegistry { profiles })
    }

    pub fn single(profile: &NoiseProfile) -> Self {
        ProfileRegistry {
            profiles: vec![ProfileRange::fixed(profile)],
        }
    }

    pub fn profiles(&self) -> &[ProfileRange] {
        &self.profiles
    }

    pub fn validate(&self) -> Result<()> {
        if self.profiles.is_empty() {
            return Err(Error::invalid("noise registry is empty"));
        }
        self.profiles.iter().try_for_each(ProfileRange::validate)
    }

    /// Parses the `key = value` registry format: one `[profile]` section per
    /// entry with keys `name`, `lambda_s_min`, `lambda_s_max`, `lambda_r_min`
    /// and `lambda_r_max`.
    pub fn parse(text: &str) -> Result<Self> {
        const WHAT: &str = "noise registry";
        let sections = kv::parse(text, WHAT)?;
        let mut profiles = Vec::new();
        for s in sections.iter().filter(|s| s.name.is_some()) {
            if s.name.as_deref() != Some("profile") {
                return Err(Error::format(
                    WHAT,
                    format!("unknown section [{}]", s.name.as_deref().unwrap_or_default()),
                ));
            }
            profiles.push(ProfileRange {
                name: s.require("name", WHAT)?.to_string(),
                lambda_shot: [s.parse_num("lambda_s_min", WHAT)?, s.parse_num("lambda_s_max", WHAT)?],
                lambda_read: [s.parse_num("lambda_r_min", WHAT)?, s.parse_num("lambda_r_max", WHAT)?],
            });
        }
        Self::new(profiles).map_err(|e| Error::format(WHAT, e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.profiles {
            let _ = write!(
                out,
                "[profile]\nname = {}\nlambda_s_min = {:e}\nlambda_s_max = {:e}\nlambda_r_min = {:e}\nlambda_r_max = {:e}\n\n",
                p.name, p.lambda_shot[0], p.lambda_shot[1], p.lambda_read[0], p.lambda_read[1]
            );
        }
        out
    }
}

impl Default for ProfileRegistry {
    /// Four sensor classes from noisy small-pixel phones to clean full-frame
    /// bodies, in normalized `[0, 1]` signal units.
    fn default() -> Self {
        let entry = |name: &str, shot: [f64; 2], read: [f64; 2]| ProfileRange {
            name: name.into(),
            lambda_shot: shot,
            lambda_read: read,
        };
        ProfileRegistry {
            profiles: vec![
                entry("smartphone-high", [3e-3, 1.2e-2], [5e-5, 5e-4]),
                entry("smartphone-mid", [1e-3, 4e-3], [1e-5, 1e-4]),
                entry("dslr-mid", [3e-4, 1.5e-3], [2e-6, 2e-5]),
                entry("dslr-low", [1e-4, 5e-4], [1e-7, 5e-6]),
            ],
        }
    }
}

/// Picks a profile uniformly, then draws both lambdas log-uniformly within
/// its ranges.
pub fn draw_profile(reg: &ProfileRegistry, seed: u64) -> NoiseProfile {
    let mut rng = rng::stream(seed);
    draw_profile_with(reg, &mut rng)
}

pub(crate) fn draw_profile_with(reg: &ProfileRegistry, rng: &mut impl Rng) -> NoiseProfile {
    let entry = &reg.profiles[rng.random_range(0..reg.profiles.len())];
    let lambda_shot = log_uniform(rng, entry.lambda_shot);
    let lambda_read = log_uniform(rng, entry.lambda_read);
    NoiseProfile {
        name: entry.name.clone(),
        lambda_shot,
        lambda_read,
    }
}
