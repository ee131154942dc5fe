//! Synthesis of realistically degraded low-resolution RAW images from clean
//! high-resolution mosaics, plus a fixed canonical ISP and fidelity metrics
//! for evaluating reconstructions.
//!
//! All image operations work on [`raw::PackedRaw`], a half-resolution
//! 4-channel (R, G1, G2, B) image normalized to `[0, 1]`. A typical flow:
//!
//! ```no_run
//! use rawforge::{pipeline, raw};
//!
//! let mosaic = raw::io::read_mosaic("scene.pgm")?;
//! let packed = raw::pack_rggb(&raw::normalize_mosaic(&mosaic)?, mosaic.meta.cfa)?;
//! let cfg = pipeline::DegradationConfig::default();
//! let (low_res, record) = pipeline::degrade(&packed, &cfg, 0)?;
//! assert_eq!(pipeline::replay(&packed, &record)?, low_res);
//! # Ok::<(), rawforge::Error>(())
//! ```

// Negated comparisons such as `!(x > 0.0)` are used deliberately so NaN is
// rejected along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod isp;
pub mod kernels;
mod kv;
pub mod metrics;
pub mod noise;
pub mod photometric;
pub mod pipeline;
pub mod raw;
pub mod rng;

pub use error::{Error, ErrorKind, Result};
