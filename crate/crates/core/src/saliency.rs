//! Bottom-up saliency sources: externally computed maps and a small
//! built-in center-surround contrast baseline.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{DenseGrid, Dims};

/// Box radii, in pixels, of the surround windows.
pub const BUILTIN_SCALES: [usize; 3] = [2, 4, 8];

/// Largest summed response still treated as a contrast-free image.
const FLAT_RESPONSE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaliencyKind {
    External,
    Builtin,
}

/// Where a saliency map came from; `id` names the model for provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaliencySource {
    pub kind: SaliencyKind,
    pub id: String,
}

impl SaliencySource {
    pub fn external(id: &str) -> Self {
        Self { kind: SaliencyKind::External, id: id.into() }
    }

    pub fn builtin() -> Self {
        Self { kind: SaliencyKind::Builtin, id: "builtin-center-surround".into() }
    }
}

/// 8-bit interleaved RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    dims: Dims,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(dims: Dims, data: Vec<u8>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyImage);
        }
        if data.len() != dims.len() * 3 {
            return Err(Error::DimMismatch { expected: dims, got: Dims::new(data.len() / 3, 1) });
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(dims.len() * 3);
        for r in 0..dims.height {
            for c in 0..dims.width {
                data.extend_from_slice(&f(c, r));
            }
        }
        Self { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn pixel(&self, col: usize, row: usize) -> [u8; 3] {
        let i = 3 * self.dims.index(col, row);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// Intensity plus red-green and blue-yellow opponency, scaled to unit range.
    pub fn feature_channels(&self) -> [DenseGrid; 3] {
        let px = |c, r| {
            let [red, g, b] = self.pixel(c, r);
            (red as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0)
        };
        [
            DenseGrid::from_fn(self.dims, |c, r| {
                let (red, g, b) = px(c, r);
                (red + g + b) / 3.0
            }),
            DenseGrid::from_fn(self.dims, |c, r| {
                let (red, g, _) = px(c, r);
                red - g
            }),
            DenseGrid::from_fn(self.dims, |c, r| {
                let (red, g, b) = px(c, r);
                b - (red + g) / 2.0
            }),
        ]
    }
}

/// Output of the built-in model.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltinSaliency {
    pub map: DenseGrid,
    /// The image had no contrast at all and the map fell back to uniform.
    pub uniform_fallback: bool,
}

/// Multiscale center-surround contrast: for every feature channel and
/// every radius in [`BUILTIN_SCALES`], `|value - mean of the box around it|`,
/// with boxes clipped at the image border. Responses are summed and
/// normalized to one.
pub fn builtin_saliency(image: &RgbImage) -> Result<BuiltinSaliency> {
    let dims = image.dims();
    if dims.is_empty() {
        return Err(Error::EmptyImage);
    }
    let mut response = DenseGrid::zeros(dims);
    for channel in image.feature_channels() {
        let sat = SummedArea::new(&channel);
        for &s in &BUILTIN_SCALES {
            for r in 0..dims.height {
                for c in 0..dims.width {
                    let m = sat.box_mean(c, r, s);
                    let i = dims.index(c, r);
                    response.values_mut()[i] += libm::fabs(channel.values()[i] - m);
                }
            }
        }
    }
    // summed-area rounding leaves ~1e-16 residue on flat images
    if response.min_max().1 <= FLAT_RESPONSE {
        return Ok(BuiltinSaliency { map: DenseGrid::uniform(dims), uniform_fallback: true });
    }
    Ok(BuiltinSaliency { map: response.normalized()?, uniform_fallback: false })
}

/// Summed-area table with a zero row and column in front.
struct SummedArea {
    dims: Dims,
    table: Vec<f64>,
}

impl SummedArea {
    fn new(g: &DenseGrid) -> Self {
        let dims = g.dims();
        let stride = dims.width + 1;
        let mut table = alloc::vec![0.0; stride * (dims.height + 1)];
        for r in 0..dims.height {
            let mut row_sum = 0.0;
            for c in 0..dims.width {
                row_sum += g.get(c, r);
                table[(r + 1) * stride + c + 1] = table[r * stride + c + 1] + row_sum;
            }
        }
        Self { dims, table }
    }

    fn box_mean(&self, col: usize, row: usize, radius: usize) -> f64 {
        let stride = self.dims.width + 1;
        let c0 = col.saturating_sub(radius);
        let r0 = row.saturating_sub(radius);
        let c1 = (col + radius + 1).min(self.dims.width);
        let r1 = (row + radius + 1).min(self.dims.height);
        let sum = self.table[r1 * stride + c1] - self.table[r0 * stride + c1] - self.table[r1 * stride + c0]
            + self.table[r0 * stride + c0];
        sum / ((c1 - c0) * (r1 - r0)) as f64
    }
}

/// Bilinear resampling with pixel-center alignment and clamped borders.
pub fn resample_bilinear(g: &DenseGrid, to: Dims) -> DenseGrid {
    let from = g.dims();
    if from == to {
        return g.clone();
    }
    let coord = |dst: usize, n_from: usize, n_to: usize| {
        let s = (dst as f64 + 0.5) * n_from as f64 / n_to as f64 - 0.5;
        let s = s.clamp(0.0, (n_from - 1) as f64);
        let i0 = libm::floor(s) as usize;
        let i1 = (i0 + 1).min(n_from - 1);
        (i0, i1, s - i0 as f64)
    };
    DenseGrid::from_fn(to, |c, r| {
        let (x0, x1, fx) = coord(c, from.width, to.width);
        let (y0, y1, fy) = coord(r, from.height, to.height);
        let top = g.get(x0, y0) * (1.0 - fx) + g.get(x1, y0) * fx;
        let bottom = g.get(x0, y1) * (1.0 - fx) + g.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    })
}

/// Turns a raw external map into a normalized saliency map on `expected`.
///
/// Negative maps are shifted to a zero minimum. A constant map carries no
/// information and is rejected as [`Error::AllZero`]. When `resample` is
/// false a size difference is an error, otherwise the map is resampled
/// bilinearly.
pub fn prepare_external(raw: &DenseGrid, expected: Dims, resample: bool) -> Result<DenseGrid> {
    if raw.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue);
    }
    if raw.dims() != expected && !resample {
        return Err(Error::DimMismatch { expected, got: raw.dims() });
    }
    let (lo, hi) = raw.min_max();
    if lo == hi {
        return Err(Error::AllZero);
    }
    let mut g = raw.clone();
    if lo < 0.0 {
        for v in g.values_mut() {
            *v -= lo;
        }
    }
    resample_bilinear(&g, expected).normalized()
}
