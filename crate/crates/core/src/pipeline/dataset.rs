//! Paired dataset synthesis from a directory of mosaics.
//!
//! Each input `name.pgm` (with `name.meta`) is normalized, packed, cut into
//! patches and degraded. Patch `k` of the `i`-th input in sorted file-name
//! order uses image index `(i << 32) | k`, so outputs do not depend on how
//! many workers run or in which order they finish. For every pair the
//! output directory receives
//!
//! ```text
//! name_kkkk_hr.praw   clean patch
//! name_kkkk_lr.praw   degraded patch
//! name_kkkk.json      degradation record
//! ```
//!
//! and `manifest.tsv` gets one line, in input order:
//! `clean path \t degraded path \t image index \t level \t record digest`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{degrade, DegradationConfig, DegradationRecord, Level};
use crate::error::{Error, Result};
use crate::raw::{self, extract_patches, io, PackedRaw, DEFAULT_PATCH_SIZE};

pub const MANIFEST_NAME: &str = "manifest.tsv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatchConfig {
    pub enabled: bool,
    pub size: usize,
    pub stride: usize,
}

impl Default for PatchConfig {
    fn default() -> Self {
        PatchConfig {
            enabled: true,
            size: DEFAULT_PATCH_SIZE,
            stride: DEFAULT_PATCH_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub degradation: DegradationConfig,
    pub patch: PatchConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub clean: String,
    pub degraded: String,
    pub image_index: u64,
    pub level: Level,
    pub digest: String,
}

impl ManifestEntry {
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.clean, self.degraded, self.image_index, self.level, self.digest
        )
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        const WHAT: &str = "manifest line";
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 5 {
            return Err(Error::format(WHAT, format!("expected 5 columns, got {}", cols.len())));
        }
        Ok(ManifestEntry {
            clean: cols[0].to_string(),
            degraded: cols[1].to_string(),
            image_index: cols[2]
                .parse()
                .map_err(|_| Error::format(WHAT, format!("bad image index `{}`", cols[2])))?,
            level: cols[3].parse().map_err(|e: Error| Error::format(WHAT, e.to_string()))?,
            digest: cols[4].to_string(),
        })
    }
}

#[derive(Debug, Default)]
pub struct SynthReport {
    pub entries: Vec<ManifestEntry>,
    /// Inputs that could not be processed, with the reason.
    pub failures: Vec<(PathBuf, Error)>,
}

/// Sorted list of `*.pgm` files directly inside `dir`.
pub fn discover_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .collect();
    files.sort();
    Ok(files)
}

fn crop_to_multiple(p: &PackedRaw, m: usize) -> Result<PackedRaw> {
    let (w, h) = (p.width() / m * m, p.height() / m * m);
    if w == 0 || h == 0 {
        return Err(Error::invalid(format!(
            "{}x{} image is smaller than scale {m}",
            p.width(),
            p.height()
        )));
    }
    if (w, h) == (p.width(), p.height()) {
        Ok(p.clone())
    } else {
        p.crop(0, 0, w, h)
    }
}

fn process_input(
    ordinal: usize,
    path: &Path,
    out_dir: &Path,
    cfg: &SynthConfig,
) -> Result<Vec<ManifestEntry>> {
    let mosaic = io::read_mosaic(path)?;
    let packed = raw::pack_rggb(&raw::normalize_mosaic(&mosaic)?, mosaic.meta.cfa)?;
    let scale = if cfg.degradation.level.downsamples() {
        cfg.degradation.scale
    } else {
        1
    };
    let patches: Vec<PackedRaw> = if cfg.patch.enabled {
        if !cfg.patch.size.is_multiple_of(scale) {
            return Err(Error::invalid(format!(
                "patch size {} not divisible by scale {scale}",
                cfg.patch.size
            )));
        }
        extract_patches(&packed, cfg.patch.size, cfg.patch.stride)?
            .into_iter()
            .map(|p| p.image)
            .collect()
    } else {
        vec![crop_to_multiple(&packed, scale)?]
    };

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("input{ordinal}"));
    let mut entries = Vec::with_capacity(patches.len());
    for (k, clean) in patches.iter().enumerate() {
        let image_index = ((ordinal as u64) << 32) | k as u64;
        let (degraded, record) = degrade(clean, &cfg.degradation, image_index)?;
        let base = format!("{stem}_{k:04}");
        let clean_name = format!("{base}_hr.praw");
        let degraded_name = format!("{base}_lr.praw");
        io::write_praw(out_dir.join(&clean_name), clean)?;
        io::write_praw(out_dir.join(&degraded_name), &degraded)?;
        let record_path = out_dir.join(format!("{base}.json"));
        fs::write(&record_path, record.to_bytes()).map_err(|e| Error::io(&record_path, e))?;
        entries.push(ManifestEntry {
            clean: clean_name,
            degraded: degraded_name,
            image_index,
            level: record.level,
            digest: record.digest(),
        });
    }
    Ok(entries)
}

/// Synthesizes degraded/clean pairs for every mosaic in `input_dir`.
///
/// Inputs are processed on the current rayon pool. Unreadable inputs are
/// skipped and listed in the report; the call fails only when every input
/// fails (or there are none).
pub fn synth_dataset(input_dir: &Path, output_dir: &Path, cfg: &SynthConfig) -> Result<SynthReport> {
    cfg.degradation.validate()?;
    let inputs = discover_inputs(input_dir)?;
    if inputs.is_empty() {
        return Err(Error::invalid(format!(
            "no .pgm inputs in {}",
            input_dir.display()
        )));
    }
    fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;

    let results: Vec<Result<Vec<ManifestEntry>>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, path)| process_input(i, path, output_dir, cfg))
        .collect();

    let mut report = SynthReport::default();
    for (path, result) in inputs.into_iter().zip(results) {
        match result {
            Ok(entries) => report.entries.extend(entries),
            Err(e) => report.failures.push((path, e)),
        }
    }
    if report.entries.is_empty() {
        let (path, first) = report.failures.swap_remove(0);
        return Err(Error::invalid(format!(
            "all inputs failed; first: {}: {first}",
            path.display()
        )));
    }
    let mut manifest = String::new();
    for e in &report.entries {
        manifest.push_str(&e.to_line());
        manifest.push('\n');
    }
    let manifest_path = output_dir.join(MANIFEST_NAME);
    fs::write(&manifest_path, manifest).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(report)
}

/// Reads a record written by [`synth_dataset`].
pub fn read_record(path: &Path) -> Result<DegradationRecord> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    DegradationRecord::from_bytes(&bytes)
}
