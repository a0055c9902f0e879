use alloc::string::String;
use core::fmt;

use crate::grid::Dims;

/// Every failure the core can report.
///
/// [`Error::code`] yields a stable upper-case tag that the command-line
/// front end prints verbatim, so downstream tooling can match on it.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    FewerThan3Vertices {
        got: usize,
    },
    NonFiniteVertex,
    EmptyRaster,
    OutOfBounds,
    EmptySet,
    KNonPositive,
    ZeroDims,
    NoObjects,
    /// A geometry error raised while building the map of one object.
    Object {
        object_id: String,
        source: alloc::boxed::Box<Error>,
    },
    /// An error raised while scoring one image.
    Image {
        image_id: String,
        source: alloc::boxed::Box<Error>,
    },
    NoInBoundsFixations,
    NoObjectFixations,
    NegativeSigma(f64),
    DimMismatch {
        expected: Dims,
        got: Dims,
    },
    BetaOutOfRange(f64),
    InvalidBetaGrid,
    AllZero,
    EmptyImage,
    LengthMismatch {
        a: usize,
        b: usize,
    },
    TooFewSamples(usize),
    UnnormalizedMap {
        sum: f64,
    },
    NonFiniteValue,
    NegativeValue,
    MissingImage(String),
    EmptyDataset,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::FewerThan3Vertices { .. } => "FEWER_THAN_3_VERTICES",
            Error::NonFiniteVertex => "INVALID_POLYGON",
            Error::EmptyRaster => "EMPTY_RASTER",
            Error::OutOfBounds => "OUT_OF_BOUNDS",
            Error::EmptySet => "EMPTY_SET",
            Error::KNonPositive => "K_NONPOSITIVE",
            Error::ZeroDims => "ZERO_DIMS",
            Error::NoObjects => "NO_OBJECTS",
            Error::Object { source, .. } | Error::Image { source, .. } => source.code(),
            Error::NoInBoundsFixations => "NO_IN_BOUNDS_FIXATIONS",
            Error::NoObjectFixations => "NO_OBJECT_FIXATIONS",
            Error::NegativeSigma(_) => "NEGATIVE_SIGMA",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::BetaOutOfRange(_) => "BETA_OUT_OF_RANGE",
            Error::InvalidBetaGrid => "INVALID_BETA_GRID",
            Error::AllZero => "ALL_ZERO",
            Error::EmptyImage => "EMPTY_IMAGE",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::TooFewSamples(_) => "TOO_FEW_SAMPLES",
            Error::UnnormalizedMap { .. } => "UNNORMALIZED_MAP",
            Error::NonFiniteValue => "NON_FINITE_VALUE",
            Error::NegativeValue => "NEGATIVE_VALUE",
            Error::MissingImage(_) => "MISSING_IMAGE",
            Error::EmptyDataset => "EMPTY_DATASET",
        }
    }

    pub fn in_image(self, image_id: &str) -> Error {
        Error::Image { image_id: image_id.into(), source: alloc::boxed::Box::new(self) }
    }

    pub(crate) fn in_object(self, object_id: &str) -> Error {
        Error::Object { object_id: object_id.into(), source: alloc::boxed::Box::new(self) }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FewerThan3Vertices { got } => {
                write!(f, "polygon needs at least 3 vertices, got {got}")
            }
            Error::NonFiniteVertex => f.write_str("polygon has a non-finite vertex"),
            Error::EmptyRaster => f.write_str("polygon encloses no pixel center"),
            Error::OutOfBounds => f.write_str("polygon lies entirely outside the image"),
            Error::EmptySet => f.write_str("pixel set is empty"),
            Error::KNonPositive => f.write_str("ring count must be at least 1"),
            Error::ZeroDims => f.write_str("grid dimensions must be positive"),
            Error::NoObjects => f.write_str("image has no annotated objects"),
            Error::Object { object_id, source } => write!(f, "object {object_id}: {source}"),
            Error::Image { image_id, source } => write!(f, "image {image_id}: {source}"),
            Error::NoInBoundsFixations => f.write_str("no fixation falls inside the image"),
            Error::NoObjectFixations => f.write_str("no fixation falls inside the object"),
            Error::NegativeSigma(s) => write!(f, "smoothing sigma must be >= 0, got {s}"),
            Error::DimMismatch { expected, got } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.width, expected.height, got.width, got.height
            ),
            Error::BetaOutOfRange(b) => write!(f, "beta {b} outside [0, 1]"),
            Error::InvalidBetaGrid => f.write_str("beta grid must be non-empty, strictly increasing and within [0, 1]"),
            Error::AllZero => f.write_str("map carries no mass after shifting to a zero minimum"),
            Error::EmptyImage => f.write_str("image has no pixels"),
            Error::LengthMismatch { a, b } => write!(f, "paired samples differ in length: {a} vs {b}"),
            Error::TooFewSamples(n) => write!(f, "need at least 2 paired samples, got {n}"),
            Error::UnnormalizedMap { sum } => write!(f, "map must sum to 1, sums to {sum}"),
            Error::NonFiniteValue => f.write_str("grid contains a non-finite value"),
            Error::NegativeValue => f.write_str("grid contains a negative value"),
            Error::MissingImage(id) => write!(f, "fixations reference unknown image {id}"),
            Error::EmptyDataset => f.write_str("dataset has no scorable images"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
