//! Dataset IO, reports and the `gazecenter` command line on top of
//! `gazecenter-core`.
//!
//! - [`annotations`], [`fixations`]: input files.
//! - [`mapio`]: `SMAP1` float binary, CSV and 16-bit PGM maps.
//! - [`sources`]: stimulus images and saliency providers.
//! - [`pipeline`]: parallel dataset pipelines.
//! - [`report`], [`svg`]: CSV, JSON and SVG output.
//! - [`cli`]: argument handling and subcommands.

pub mod annotations;
pub mod cli;
pub mod error;
pub mod fixations;
pub mod mapio;
pub mod pipeline;
pub mod report;
pub mod sources;
pub mod svg;

pub use error::{Error, Result};
