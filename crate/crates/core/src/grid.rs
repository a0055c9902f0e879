//! Dense row-major grids of non-negative reals.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerance used whenever a grid is expected to sum to one.
pub const NORMALIZED_TOL: f64 = 1e-9;

/// Image extent in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dims {
    pub width: usize,
    pub height: usize,
}

impl Dims {
    pub const fn new(width: usize, height: usize) -> Self {
        Self { width, height }
    }

    #[inline]
    pub const fn len(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub const fn is_empty(&self) -> bool {
        self.width == 0 || self.height == 0
    }

    #[inline]
    pub const fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    /// Pixel whose cell contains the real-valued point, if inside the image.
    #[inline]
    pub fn pixel_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(x.is_finite() && y.is_finite()) || x < 0.0 || y < 0.0 {
            return None;
        }
        let col = libm::floor(x) as usize;
        let row = libm::floor(y) as usize;
        (col < self.width && row < self.height).then_some((col, row))
    }
}

/// Row-major 2-D array. Used for saliency maps, object maps, combined
/// maps and fixation maps alike.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseGrid {
    dims: Dims,
    values: Vec<f64>,
}

impl DenseGrid {
    pub fn zeros(dims: Dims) -> Self {
        Self { dims, values: vec![0.0; dims.len()] }
    }

    pub fn filled(dims: Dims, value: f64) -> Self {
        Self { dims, values: vec![value; dims.len()] }
    }

    /// Uniform grid summing to one.
    pub fn uniform(dims: Dims) -> Self {
        Self::filled(dims, 1.0 / dims.len() as f64)
    }

    /// Wraps raw values, checking length only. Use [`DenseGrid::validate`]
    /// to enforce the finite/non-negative invariant.
    pub fn from_vec(dims: Dims, values: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::ZeroDims);
        }
        if values.len() != dims.len() {
            return Err(Error::DimMismatch { expected: dims, got: Dims::new(values.len(), 1) });
        }
        Ok(Self { dims, values })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(dims.len());
        for row in 0..dims.height {
            for col in 0..dims.width {
                values.push(f(col, row));
            }
        }
        Self { dims, values }
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.dims.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.dims.height
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[self.dims.index(col, row)]
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, v: f64) {
        let i = self.dims.index(col, row);
        self.values[i] = v;
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Position of the largest value; first in row-major order on ties.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (best % self.dims.width, best / self.dims.width)
    }

    /// Checks the finite, non-negative invariant.
    pub fn validate(&self) -> Result<()> {
        for &v in &self.values {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue);
            }
            if v < 0.0 {
                return Err(Error::NegativeValue);
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        libm::fabs(self.sum() - 1.0) <= NORMALIZED_TOL
    }

    /// Scales the grid to sum to one. Fails on an all-zero grid.
    pub fn normalize(&mut self) -> Result<()> {
        let total = self.sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::AllZero);
        }
        for v in &mut self.values {
            *v /= total;
        }
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    pub(crate) fn ensure_dims(&self, expected: Dims) -> Result<()> {
        if self.dims != expected {
            return Err(Error::DimMismatch { expected, got: self.dims });
        }
        Ok(())
    }
}
