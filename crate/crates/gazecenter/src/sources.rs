//! Loading of images and saliency maps from disk.

use std::path::{Path, PathBuf};

use gazecenter_core::saliency::{builtin_saliency, prepare_external, RgbImage, SaliencySource};
use gazecenter_core::{DenseGrid, Dims};

use crate::error::{Error, Result};
use crate::mapio::read_map;

/// Image extensions tried, in order, when looking up `<image_id>.<ext>`.
pub const IMAGE_EXTENSIONS: [&str; 4] = ["png", "ppm", "pnm", "PNG"];

/// Reads an 8-bit PNG or PPM as RGB.
pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| Error::Image { path: path.to_path_buf(), source })?;
    let rgb = img.to_rgb8();
    let dims = Dims::new(rgb.width() as usize, rgb.height() as usize);
    Ok(RgbImage::new(dims, rgb.into_raw())?)
}

/// External saliency map, min-shifted and normalized, resampled to
/// `expected` when sizes differ and `resample` is set.
pub fn load_external_saliency(path: impl AsRef<Path>, expected: Dims, resample: bool) -> Result<DenseGrid> {
    let raw = read_map(path, None)?;
    Ok(prepare_external(&raw, expected, resample)?)
}

pub fn find_image(dir: &Path, image_id: &str) -> Option<PathBuf> {
    IMAGE_EXTENSIONS.iter().map(|ext| dir.join(format!("{image_id}.{ext}"))).find(|p| p.is_file())
}

/// Saliency provider used by the dataset pipelines.
#[derive(Clone, Debug)]
pub enum SaliencyProvider {
    /// `<dir>/<image_id>.smap`, computed elsewhere.
    External { dir: PathBuf, resample: bool },
    /// Built-in center-surround baseline on `<dir>/<image_id>.png|ppm`.
    Builtin { image_dir: PathBuf },
}

impl SaliencyProvider {
    pub fn source(&self) -> SaliencySource {
        match self {
            SaliencyProvider::External { dir, .. } => {
                let name = dir.file_name().and_then(|n| n.to_str()).unwrap_or("external");
                SaliencySource::external(name)
            }
            SaliencyProvider::Builtin { .. } => SaliencySource::builtin(),
        }
    }

    pub fn path_for(&self, image_id: &str) -> PathBuf {
        match self {
            SaliencyProvider::External { dir, .. } => dir.join(format!("{image_id}.smap")),
            SaliencyProvider::Builtin { image_dir } => {
                find_image(image_dir, image_id).unwrap_or_else(|| image_dir.join(format!("{image_id}.png")))
            }
        }
    }

    pub fn load(&self, image_id: &str, dims: Dims) -> Result<DenseGrid> {
        let path = self.path_for(image_id);
        if !path.is_file() {
            return Err(Error::MissingSaliency { image_id: image_id.to_string(), path });
        }
        match self {
            SaliencyProvider::External { resample, .. } => load_external_saliency(&path, dims, *resample),
            SaliencyProvider::Builtin { .. } => {
                let img = load_rgb(&path)?;
                let out = builtin_saliency(&img)?;
                if out.uniform_fallback {
                    log::warn!("{image_id}: image has no contrast, using a uniform saliency map");
                }
                Ok(gazecenter_core::saliency::resample_bilinear(&out.map, dims).normalized()?)
            }
        }
    }
}
