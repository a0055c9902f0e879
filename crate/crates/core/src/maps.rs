//! Object center-bias maps, fixation maps, Gaussian smoothing and the
//! convex saliency/object combination.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{ImageAnnotation, ObjectAnnotation};
use crate::error::{Error, Result};
use crate::geometry::{center_of_mass, rasterize_polygon, ring_partition, Point, RegionMode, RingPartition};
use crate::grid::{DenseGrid, Dims};

/// Default spread of the Gaussian ring weighting, in rings.
pub const DEFAULT_GAUSSIAN_SIGMA_RINGS: f64 = 3.0;

/// Per-ring weighting of an object's pixels.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum WeightScheme {
    /// `w_i = (k + 1 - i) / k`: full weight at the center, `1/k` at the rim.
    #[default]
    Linear,
    /// Every object pixel weighs the same.
    Constant,
    /// `w_i = exp(-(i - 1)^2 / (2 sigma^2))` over ring index.
    Gaussian { sigma_rings: f64 },
}

impl WeightScheme {
    pub fn gaussian() -> Self {
        WeightScheme::Gaussian { sigma_rings: DEFAULT_GAUSSIAN_SIGMA_RINGS }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::Linear => "linear",
            WeightScheme::Constant => "constant",
            WeightScheme::Gaussian { .. } => "gaussian",
        }
    }

    /// Weight of ring `ring` (1-based) out of `k`.
    pub fn weight(&self, ring: usize, k: usize) -> f64 {
        match *self {
            WeightScheme::Linear => (k + 1 - ring) as f64 / k as f64,
            WeightScheme::Constant => 1.0,
            WeightScheme::Gaussian { sigma_rings } => {
                let d = (ring - 1) as f64;
                libm::exp(-d * d / (2.0 * sigma_rings * sigma_rings))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            WeightScheme::Gaussian { sigma_rings } if !(sigma_rings > 0.0 && sigma_rings.is_finite()) => {
                Err(Error::NegativeSigma(sigma_rings))
            }
            _ => Ok(()),
        }
    }
}

/// Everything that determines an object map besides the annotation itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectMapConfig {
    pub scheme: WeightScheme,
    pub region_mode: RegionMode,
    pub k: usize,
}

impl Default for ObjectMapConfig {
    fn default() -> Self {
        Self { scheme: WeightScheme::Linear, region_mode: RegionMode::Polygon, k: crate::geometry::DEFAULT_RINGS }
    }
}

/// Rasterizes one object and splits it into rings around its center of mass.
pub fn object_rings(obj: &ObjectAnnotation, dims: Dims, mode: RegionMode, k: usize) -> Result<RingPartition> {
    let build = || {
        let ps = rasterize_polygon(&obj.polygon, dims, mode)?;
        let com = center_of_mass(&ps)?;
        ring_partition(&ps, com, k)
    };
    build().map_err(|e| e.in_object(&obj.object_id))
}

/// Unnormalized object map: each object pixel carries its ring weight,
/// overlapping objects keep the larger weight.
pub fn object_weights(img: &ImageAnnotation, cfg: &ObjectMapConfig) -> Result<DenseGrid> {
    if img.objects.is_empty() {
        return Err(Error::NoObjects);
    }
    if cfg.k == 0 {
        return Err(Error::KNonPositive);
    }
    cfg.scheme.validate()?;
    let mut grid = DenseGrid::zeros(img.dims);
    for obj in &img.objects {
        let part = object_rings(obj, img.dims, cfg.region_mode, cfg.k)?;
        for (c, r, ring) in part.iter() {
            let w = cfg.scheme.weight(ring, cfg.k);
            if w > grid.get(c, r) {
                grid.set(c, r, w);
            }
        }
    }
    Ok(grid)
}

/// Object center-bias map, normalized to sum 1.
pub fn build_object_map(img: &ImageAnnotation, cfg: &ObjectMapConfig) -> Result<DenseGrid> {
    object_weights(img, cfg)?.normalized()
}

/// Smoothed, normalized histogram of the in-bounds fixations.
pub fn build_fixation_map(fixations: &[Point], dims: Dims, sigma_px: f64) -> Result<DenseGrid> {
    if dims.is_empty() {
        return Err(Error::ZeroDims);
    }
    let mut hist = DenseGrid::zeros(dims);
    let mut hits = 0usize;
    for p in fixations {
        if let Some((c, r)) = dims.pixel_of(p.x, p.y) {
            let i = dims.index(c, r);
            hist.values_mut()[i] += 1.0;
            hits += 1;
        }
    }
    if hits == 0 {
        return Err(Error::NoInBoundsFixations);
    }
    smooth_map(&hist, sigma_px)?.normalized()
}

/// Normalized 1-D Gaussian truncated at `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (libm::ceil(3.0 * sigma) as usize).max(1);
    let mut k: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            libm::exp(-d * d / (2.0 * sigma * sigma))
        })
        .collect();
    let total: f64 = k.iter().sum();
    for v in &mut k {
        *v /= total;
    }
    k
}

/// Separable Gaussian blur with zero padding; the result is rescaled to
/// the input's total mass. `sigma_px == 0` returns the input unchanged.
pub fn smooth_map(grid: &DenseGrid, sigma_px: f64) -> Result<DenseGrid> {
    if sigma_px.is_nan() || sigma_px < 0.0 {
        return Err(Error::NegativeSigma(sigma_px));
    }
    if sigma_px == 0.0 {
        return Ok(grid.clone());
    }
    let kernel = gaussian_kernel(sigma_px);
    let radius = (kernel.len() / 2) as isize;
    let dims = grid.dims();
    let (w, h) = (dims.width as isize, dims.height as isize);

    let mut tmp = vec![0.0; dims.len()];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (j, kv) in kernel.iter().enumerate() {
                let cc = c + j as isize - radius;
                if (0..w).contains(&cc) {
                    acc += kv * grid.values()[(r * w + cc) as usize];
                }
            }
            tmp[(r * w + c) as usize] = acc;
        }
    }
    let mut out = DenseGrid::zeros(dims);
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (j, kv) in kernel.iter().enumerate() {
                let rr = r + j as isize - radius;
                if (0..h).contains(&rr) {
                    acc += kv * tmp[(rr * w + c) as usize];
                }
            }
            out.values_mut()[(r * w + c) as usize] = acc;
        }
    }

    let (before, after) = (grid.sum(), out.sum());
    if after > 0.0 {
        let scale = before / after;
        for v in out.values_mut() {
            *v *= scale;
        }
    }
    Ok(out)
}

/// `(1 - beta) * S + beta * O`, pointwise.
pub fn combine(saliency: &DenseGrid, object: &DenseGrid, beta: f64) -> Result<DenseGrid> {
    object.ensure_dims(saliency.dims())?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    let values = saliency.values().iter().zip(object.values()).map(|(&s, &o)| (1.0 - beta) * s + beta * o).collect();
    DenseGrid::from_vec(saliency.dims(), values)
}

/// A combined map together with what produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedMap {
    pub grid: DenseGrid,
    pub beta: f64,
    pub saliency_source: String,
    pub object_config: ObjectMapConfig,
}

impl CombinedMap {
    pub fn build(
        saliency: &DenseGrid,
        object: &DenseGrid,
        beta: f64,
        saliency_source: &str,
        object_config: ObjectMapConfig,
    ) -> Result<Self> {
        Ok(Self {
            grid: combine(saliency, object, beta)?,
            beta,
            saliency_source: saliency_source.into(),
            object_config,
        })
    }
}
