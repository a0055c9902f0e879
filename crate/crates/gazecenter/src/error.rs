use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error at line {line}, field `{field}`: {message}")]
    Parse { path: PathBuf, line: usize, field: String, message: String },
    #[error("duplicate image id `{0}`")]
    DuplicateImageId(String),
    #[error("image `{image_id}`: duplicate object id `{object_id}`")]
    DuplicateObjectId { image_id: String, object_id: String },
    #[error("image `{image_id}`: object `{object_id}` has an invalid polygon: {source}")]
    InvalidPolygon {
        image_id: String,
        object_id: String,
        #[source]
        source: gazecenter_core::Error,
    },
    #[error("{path}: unknown column `{column}`")]
    UnknownColumn { path: PathBuf, column: String },
    #[error("{path}: missing required column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: bad magic, expected {expected}")]
    MagicMismatch { path: PathBuf, expected: &'static str },
    #[error("{path}: expected {expected_w}x{expected_h}, found {got_w}x{got_h}")]
    DimMismatch { path: PathBuf, expected_w: usize, expected_h: usize, got_w: usize, got_h: usize },
    #[error("{path}: unsupported map format (use .smap, .csv or .pgm)")]
    UnknownFormat { path: PathBuf },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("fixations reference unknown image(s): {}", .0.join(", "))]
    MissingImages(Vec<String>),
    #[error("no saliency map for image `{image_id}` (looked for {path})")]
    MissingSaliency { image_id: String, path: PathBuf },
    #[error(transparent)]
    Core(#[from] gazecenter_core::Error),
}

impl Error {
    /// Stable upper-case reason tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "IO_ERROR",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::DuplicateImageId(_) => "DUPLICATE_IMAGE_ID",
            Error::DuplicateObjectId { .. } => "DUPLICATE_OBJECT_ID",
            Error::InvalidPolygon { .. } => "INVALID_POLYGON",
            Error::UnknownColumn { .. } => "UNKNOWN_COLUMN",
            Error::MissingColumn { .. } => "MISSING_COLUMN",
            Error::MagicMismatch { .. } => "MAGIC_MISMATCH",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::UnknownFormat { .. } => "UNKNOWN_FORMAT",
            Error::Image { .. } => "IMAGE_ERROR",
            Error::MissingImages(_) => "MISSING_IMAGE",
            Error::MissingSaliency { .. } => "MISSING_SALIENCY",
            Error::Core(e) => e.code(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
