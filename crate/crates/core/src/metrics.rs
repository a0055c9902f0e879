//! Scoring of maps against fixations and per-ring object profiles.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Point, RingPartition};
use crate::grid::DenseGrid;

/// NSS together with how many fixations were usable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NssScore {
    pub value: f64,
    pub in_bounds: usize,
    pub dropped: usize,
}

/// Normalized scanpath saliency: the map is z-scored over all pixels
/// (population standard deviation) and the z-values under the in-bounds
/// fixations are averaged. A constant map scores 0.
pub fn nss_detailed(map: &DenseGrid, fixations: &[Point]) -> Result<NssScore> {
    let dims = map.dims();
    let pixels: Vec<usize> =
        fixations.iter().filter_map(|p| dims.pixel_of(p.x, p.y)).map(|(c, r)| dims.index(c, r)).collect();
    if pixels.is_empty() {
        return Err(Error::NoInBoundsFixations);
    }
    let dropped = fixations.len() - pixels.len();
    let (lo, hi) = map.min_max();
    if lo == hi {
        return Ok(NssScore { value: 0.0, in_bounds: pixels.len(), dropped });
    }
    let values = map.values();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    let total: f64 = pixels.iter().map(|&i| (values[i] - mean) / std).sum();
    Ok(NssScore { value: total / pixels.len() as f64, in_bounds: pixels.len(), dropped })
}

pub fn nss(map: &DenseGrid, fixations: &[Point]) -> Result<f64> {
    nss_detailed(map, fixations).map(|s| s.value)
}

/// How fixations distribute over the rings of one object.
#[derive(Clone, Debug, PartialEq)]
pub struct RingProfile {
    /// Fixations per ring, innermost first.
    pub counts: Vec<usize>,
    /// Fixation density per ring; sums to one.
    pub p: Vec<f64>,
    pub n_fix: usize,
    /// Share of the object's fixations in the inner `ceil(k/2)` rings.
    pub obj_cnt_idx: f64,
    /// Mean saliency per ring, when a saliency map was supplied.
    pub mean_sal: Option<Vec<f64>>,
}

/// Counts fixations per ring. Fixations outside the object are ignored.
pub fn ring_fixation_profile(part: &RingPartition, fixations: &[Point]) -> Result<RingProfile> {
    let k = part.k();
    let mut counts = vec![0usize; k];
    for p in fixations {
        if let Some(ring) = part.ring_of_point(*p) {
            counts[ring - 1] += 1;
        }
    }
    let n_fix: usize = counts.iter().sum();
    if n_fix == 0 {
        return Err(Error::NoObjectFixations);
    }
    let inner: usize = counts[..k.div_ceil(2)].iter().sum();
    Ok(RingProfile {
        p: counts.iter().map(|&c| c as f64 / n_fix as f64).collect(),
        obj_cnt_idx: inner as f64 / n_fix as f64,
        counts,
        n_fix,
        mean_sal: None,
    })
}

/// Object center-bias index of a density vector: inner `ceil(k/2)` mass
/// over total mass.
pub fn center_bias_index(p: &[f64]) -> f64 {
    let (inner, outer) = p.split_at(p.len().div_ceil(2));
    let inner: f64 = inner.iter().sum();
    inner / (inner + outer.iter().sum::<f64>())
}

/// Mean map value over each ring's pixels.
pub fn ring_saliency_profile(part: &RingPartition, map: &DenseGrid) -> Result<Vec<f64>> {
    map.ensure_dims(part.dims())?;
    let k = part.k();
    let mut sums = vec![0.0; k];
    for (c, r, ring) in part.iter() {
        sums[ring - 1] += map.get(c, r);
    }
    Ok(sums.into_iter().zip(part.counts()).map(|(s, &n)| if n == 0 { 0.0 } else { s / n as f64 }).collect())
}

impl RingProfile {
    pub fn with_saliency(mut self, part: &RingPartition, map: &DenseGrid) -> Result<Self> {
        self.mean_sal = Some(ring_saliency_profile(part, map)?);
        Ok(self)
    }
}
