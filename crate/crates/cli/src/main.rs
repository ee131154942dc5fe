//! `rawforge` batch front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
//! 3 data-format error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rawforge::ErrorKind;

#[derive(Parser)]
#[command(name = "rawforge", version, about = "RAW degradation pipeline, canonical ISP and metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArg {
    /// Experiment configuration (TOML). Defaults apply when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Degrade one mosaic and write the clean/degraded pair plus its record.
    Degrade {
        /// Input PGM mosaic; its `.meta` sidecar must sit next to it.
        input: PathBuf,
        /// Output prefix: writes PREFIX_hr.praw, PREFIX_lr.praw and PREFIX.json.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
        /// Overrides the configured master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Image index used to derive per-image random streams.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Overrides the configured level (I, II, III or IV).
        #[arg(long)]
        level: Option<String>,
    },
    /// Synthesize degraded/clean pairs for every mosaic in a directory.
    SynthDataset {
        input_dir: PathBuf,
        output_dir: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        level: Option<String>,
        /// Worker threads; never changes the output bytes.
        #[arg(short, long, env = "RAWFORGE_THREADS")]
        jobs: Option<usize>,
    },
    /// Render a packed image through the fixed ISP to PPM (or PNG by extension).
    Render {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Report RAW and RGB PSNR/SSIM for a pair or every line of a manifest.
    ///
    /// A restored image smaller than its reference by an integer factor is
    /// first upscaled with bicubic interpolation (the baseline reconstruction).
    Evaluate {
        #[arg(long, conflicts_with_all = ["clean", "restored"], required_unless_present = "clean")]
        manifest: Option<PathBuf>,
        #[arg(long, requires = "restored")]
        clean: Option<PathBuf>,
        #[arg(long, requires = "clean")]
        restored: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Fit shot/read noise parameters from flat-field frames (.praw or .pgm).
    EstimateNoise {
        dir: PathBuf,
        /// Plain least squares instead of the variance-weighted fit.
        #[arg(long)]
        ols: bool,
    },
}

/// Error raised for bad invocations or configuration files.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    if let Some(e) = err.downcast_ref::<rawforge::Error>() {
        return match e.kind() {
            ErrorKind::Io => 2,
            ErrorKind::Format | ErrorKind::Invalid => 3,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Degrade {
            input,
            output,
            config,
            seed,
            index,
            level,
        } => commands::degrade(&input, &output, config.config.as_deref(), seed, index, level.as_deref()),
        Command::SynthDataset {
            input_dir,
            output_dir,
            config,
            seed,
            level,
            jobs,
        } => commands::synth_dataset(
            &input_dir,
            &output_dir,
            config.config.as_deref(),
            seed,
            level.as_deref(),
            jobs,
        ),
        Command::Render {
            input,
            output,
            config,
        } => commands::render(&input, &output, config.config.as_deref()),
        Command::Evaluate {
            manifest,
            clean,
            restored,
            config,
        } => commands::evaluate(
            manifest.as_deref(),
            clean.as_deref().zip(restored.as_deref()),
            config.config.as_deref(),
        ),
        Command::EstimateNoise { dir, ols } => commands::estimate_noise(&dir, ols),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
