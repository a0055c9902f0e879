#![no_std]
//! Object center-bias analysis for eye-fixation data.
//!
//! Objects are rasterized from their boundary polygons, split into
//! equal-area rings grown from the center of mass, and turned into an
//! object map `O` whose weights fall off from the center outward. `O` is
//! blended with a bottom-up saliency map `S` as `(1 - beta) S + beta O` and
//! scored against human fixations with NSS.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, images and
//! the command-line front end live in the `gazecenter` crate.
//!
//! - [`geometry`] – rasterization, center of mass, ring partitions.
//! - [`maps`] – object maps, fixation maps, smoothing, combination.
//! - [`saliency`] – external map preparation and a built-in baseline.
//! - [`metrics`] – NSS, ring profiles and the center-bias index.
//! - [`stats`] – paired t-test.
//! - [`eval`] – beta sweeps, model comparison, fixation sampling.
//! - [`dataset`] – annotation/fixation records and dataset summaries.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod grid;
pub mod maps;
pub mod metrics;
pub mod saliency;
pub mod stats;

pub use dataset::{
    dataset_stats, DatasetStats, Fixation, FixationSet, ImageAnnotation, ObjectAnnotation, StatsOptions,
};
pub use error::{Error, Result};
pub use eval::{
    compare_models, default_betas, sample_fixations, score_image, sweep_beta, ComparisonResult, ImageScores,
    ScoringInput, SweepConfig, SweepResult,
};
pub use geometry::{
    center_of_mass, rasterize_polygon, ring_partition, PixelSet, Point, Polygon, RegionMode, RingPartition,
};
pub use grid::{DenseGrid, Dims};
pub use maps::{build_fixation_map, build_object_map, combine, smooth_map, CombinedMap, ObjectMapConfig, WeightScheme};
pub use metrics::{nss, nss_detailed, ring_fixation_profile, ring_saliency_profile, NssScore, RingProfile};
pub use saliency::{builtin_saliency, prepare_external, RgbImage, SaliencySource};
pub use stats::{paired_t_test, TestResult};
