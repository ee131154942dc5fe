use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Index of each color plane in a packed image.
pub const R: usize = 0;
pub const G1: usize = 1;
pub const G2: usize = 2;
pub const B: usize = 3;

/// 2×2 color filter layout, named in raster order of the top-left tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CfaPattern {
    Rggb,
    Bggr,
    Grbg,
    Gbrg,
}

impl CfaPattern {
    pub const ALL: [CfaPattern; 4] = [
        CfaPattern::Rggb,
        CfaPattern::Bggr,
        CfaPattern::Grbg,
        CfaPattern::Gbrg,
    ];

    /// Packed channel (R, G1, G2, B) sampled at tile offset `(dy, dx)`.
    ///
    /// G1 is the green that comes first in raster order within the tile.
    pub fn channel_at(self, dy: usize, dx: usize) -> usize {
        let layout = match self {
            CfaPattern::Rggb => [[R, G1], [G2, B]],
            CfaPattern::Bggr => [[B, G1], [G2, R]],
            CfaPattern::Grbg => [[G1, R], [B, G2]],
            CfaPattern::Gbrg => [[G1, B], [R, G2]],
        };
        layout[dy & 1][dx & 1]
    }

    /// Tile offset `(dy, dx)` holding packed channel `c`.
    pub fn offset_of(self, c: usize) -> (usize, usize) {
        for dy in 0..2 {
            for dx in 0..2 {
                if self.channel_at(dy, dx) == c {
                    return (dy, dx);
                }
            }
        }
        unreachable!("every CFA holds all four packed channels")
    }

    /// RGB color index (0 = R, 1 = G, 2 = B) at mosaic position `(y, x)`.
    pub fn color_at(self, y: usize, x: usize) -> usize {
        match self.channel_at(y, x) {
            R => 0,
            G1 | G2 => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CfaPattern::Rggb => "RGGB",
            CfaPattern::Bggr => "BGGR",
            CfaPattern::Grbg => "GRBG",
            CfaPattern::Gbrg => "GBRG",
        }
    }
}

impl fmt::Display for CfaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CfaPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RGGB" => Ok(CfaPattern::Rggb),
            "BGGR" => Ok(CfaPattern::Bggr),
            "GRBG" => Ok(CfaPattern::Grbg),
            "GBRG" => Ok(CfaPattern::Gbrg),
            other => Err(Error::format("cfa", format!("unknown pattern `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_pattern_is_a_permutation() {
        for cfa in CfaPattern::ALL {
            let mut seen = [false; 4];
            for dy in 0..2 {
                for dx in 0..2 {
                    seen[cfa.channel_at(dy, dx)] = true;
                }
            }
            assert!(seen.iter().all(|&s| s), "{cfa}");
            for c in 0..4 {
                let (dy, dx) = cfa.offset_of(c);
                assert_eq!(cfa.channel_at(dy, dx), c);
            }
        }
    }

    #[test]
    fn parse_is_case_insensitive() {
        assert_eq!("bggr".parse::<CfaPattern>().unwrap(), CfaPattern::Bggr);
        assert!("RGBG".parse::<CfaPattern>().is_err());
    }
}
