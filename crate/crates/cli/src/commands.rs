use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rawforge::config::ExperimentConfig;
use rawforge::isp::{render_rgb, write_ppm, IspParams};
use rawforge::metrics::{aggregate, evaluate_pair, format_metric, PairReport};
use rawforge::noise::{estimate_profile, estimate_profile_weighted, frame_stats, LevelStats};
use rawforge::photometric::upsample_bicubic;
use rawforge::pipeline::{self, Level, ManifestEntry};
use rawforge::raw::{self, io, PackedRaw};

use crate::UsageError;

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    ExperimentConfig::load(path).map_err(|e| match e.kind() {
        rawforge::ErrorKind::Io => anyhow::Error::new(e),
        _ => UsageError(format!("{}: {e}", path.display())).into(),
    })
}

fn apply_overrides(cfg: &mut ExperimentConfig, seed: Option<u64>, level: Option<&str>) -> Result<()> {
    if let Some(seed) = seed {
        cfg.degradation.seed = seed;
    }
    if let Some(level) = level {
        cfg.degradation.level = level
            .parse::<Level>()
            .map_err(|e| UsageError(e.to_string()))?;
    }
    cfg.degradation
        .validate()
        .map_err(|e| UsageError(format!("configuration: {e}")))?;
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn degrade(
    input: &Path,
    output: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    index: u64,
    level: Option<&str>,
) -> Result<()> {
    let mut cfg = load_config(config)?;
    apply_overrides(&mut cfg, seed, level)?;
    let mosaic = io::read_mosaic(input)?;
    let clean = raw::pack_rggb(&raw::normalize_mosaic(&mosaic)?, mosaic.meta.cfa)?;
    let (degraded, record) = pipeline::degrade(&clean, &cfg.degradation, index)?;
    io::write_praw(with_suffix(output, "_hr.praw"), &clean)?;
    io::write_praw(with_suffix(output, "_lr.praw"), &degraded)?;
    let record_path = with_suffix(output, ".json");
    fs::write(&record_path, record.to_bytes())
        .with_context(|| format!("writing {}", record_path.display()))?;
    println!(
        "{}x{} -> {}x{}\tlevel {}\tdigest {}",
        clean.width(),
        clean.height(),
        degraded.width(),
        degraded.height(),
        record.level,
        record.digest()
    );
    Ok(())
}

pub fn synth_dataset(
    input_dir: &Path,
    output_dir: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    level: Option<&str>,
    jobs: Option<usize>,
) -> Result<()> {
    let mut cfg = load_config(config)?;
    apply_overrides(&mut cfg, seed, level)?;
    let jobs = match jobs {
        Some(0) => return Err(UsageError("--jobs must be at least 1".into()).into()),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")?;
    let synth = cfg.synth();
    let report = pool.install(|| pipeline::synth_dataset(input_dir, output_dir, &synth))?;
    for (path, err) in &report.failures {
        eprintln!("skipped {}: {err}", path.display());
    }
    println!(
        "{} pairs written to {} ({} inputs skipped)",
        report.entries.len(),
        output_dir.display(),
        report.failures.len()
    );
    Ok(())
}

pub fn render(input: &Path, output: &Path, config: Option<&Path>) -> Result<()> {
    let cfg = load_config(config)?;
    let packed = io::read_praw(input)?;
    let rgb = render_rgb(&packed, &cfg.isp)?;
    let is_png = output
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if is_png {
        image::save_buffer(
            output,
            &rgb.data,
            rgb.width as u32,
            rgb.height as u32,
            image::ColorType::Rgb8,
        )
        .with_context(|| format!("writing {}", output.display()))?;
    } else {
        write_ppm(output, &rgb)?;
    }
    Ok(())
}

/// Brings `restored` to the reference size with the bicubic baseline when it
/// is an integer factor smaller.
fn match_reference(clean: &PackedRaw, restored: PackedRaw) -> Result<(PackedRaw, usize)> {
    if clean.same_shape(&restored) {
        return Ok((restored, 1));
    }
    let (cw, ch, rw, rh) = (clean.width(), clean.height(), restored.width(), restored.height());
    if rw > 0 && rh > 0 && cw % rw == 0 && ch % rh == 0 && cw / rw == ch / rh {
        let s = cw / rw;
        return Ok((upsample_bicubic(&restored, s)?, s));
    }
    bail!(rawforge::Error::Shape {
        expected: format!("{cw}x{ch} or an integer fraction of it"),
        got: format!("{rw}x{rh}"),
    })
}

fn evaluate_one(clean: &Path, restored: &Path, isp: &IspParams) -> Result<(PairReport, usize)> {
    let clean = io::read_praw(clean)?;
    let restored = io::read_praw(restored)?;
    let (restored, scale) = match_reference(&clean, restored)?;
    Ok((evaluate_pair(&clean, &restored, isp)?, scale))
}

pub fn evaluate(manifest: Option<&Path>, pair: Option<(&Path, &Path)>, config: Option<&Path>) -> Result<()> {
    let cfg = load_config(config)?;
    let pairs: Vec<(PathBuf, PathBuf)> = match (manifest, pair) {
        (Some(m), _) => {
            let text = fs::read_to_string(m)
                .map_err(|e| rawforge::Error::Io { path: m.to_path_buf(), source: e })?;
            let base = m.parent().unwrap_or(Path::new("."));
            text.lines()
                .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
                .map(|l| {
                    let e = ManifestEntry::parse_line(l)?;
                    Ok((base.join(e.clean), base.join(e.degraded)))
                })
                .collect::<rawforge::Result<_>>()?
        }
        (None, Some((c, r))) => vec![(c.to_path_buf(), r.to_path_buf())],
        (None, None) => return Err(UsageError("pass --manifest or --clean/--restored".into()).into()),
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "# ssim: single-scale, 11x11 gaussian window, sigma 1.5")?;
    writeln!(out, "clean\trestored\tupscale\t{}", PairReport::HEADER)?;
    let mut reports = Vec::with_capacity(pairs.len());
    for (clean, restored) in &pairs {
        let (report, scale) = evaluate_one(clean, restored, &cfg.isp)?;
        let upscale = if scale == 1 { "none".to_string() } else { format!("bicubic_x{scale}") };
        writeln!(
            out,
            "{}\t{}\t{upscale}\t{}",
            clean.display(),
            restored.display(),
            report.to_tsv()
        )?;
        reports.push(report);
    }
    if let Some((mean, std)) = aggregate(&reports) {
        let row = |v: [f64; 4]| v.map(format_metric).join("\t");
        writeln!(out, "mean\t{}\t\t{}", reports.len(), row(mean))?;
        writeln!(out, "std\t{}\t\t{}", reports.len(), row(std))?;
    }
    Ok(())
}

fn read_flat(path: &Path) -> Result<PackedRaw> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext.eq_ignore_ascii_case("pgm") {
        let m = io::read_mosaic(path)?;
        Ok(raw::pack_rggb(&raw::normalize_mosaic(&m)?, m.meta.cfa)?)
    } else {
        Ok(io::read_praw(path)?)
    }
}

pub fn estimate_noise(dir: &Path, ols: bool) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| rawforge::Error::Io { path: dir.to_path_buf(), source: e })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("praw") || e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        bail!(UsageError(format!("no .praw or .pgm flat frames in {}", dir.display())));
    }
    // Each color plane of a flat frame is one calibration level.
    let mut points: Vec<LevelStats> = Vec::new();
    for f in &files {
        let frame = read_flat(f).with_context(|| format!("reading {}", f.display()))?;
        points.extend(frame.planes().map(frame_stats));
    }
    let profile = if ols {
        estimate_profile(&points)?
    } else {
        estimate_profile_weighted(&points)?
    };
    println!("frames\t{}", files.len());
    println!("lambda_s\t{:.6e}", profile.lambda_shot);
    println!("lambda_r\t{:.6e}", profile.lambda_read);
    Ok(())
}
