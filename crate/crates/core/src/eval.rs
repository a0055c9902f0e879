//! Beta sweeps over a dataset, pairwise model comparison and a seeded
//! fixation sampler.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, RegionMode};
use crate::grid::DenseGrid;
use crate::maps::{combine, WeightScheme};
use crate::metrics::nss;
use crate::stats::{paired_t_test, TestResult};

/// Beta grid 0.0, 0.1, ..., 1.0.
pub fn default_betas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

pub fn validate_betas(betas: &[f64]) -> Result<()> {
    let in_range = betas.iter().all(|b| (0.0..=1.0).contains(b));
    let increasing = betas.windows(2).all(|w| w[0] < w[1]);
    if betas.is_empty() || !in_range || !increasing {
        return Err(Error::InvalidBetaGrid);
    }
    Ok(())
}

/// Everything the sweep needs for one image.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoringInput {
    pub image_id: String,
    /// Normalized saliency map.
    pub saliency: DenseGrid,
    /// Normalized object map; `None` for images without annotated objects.
    pub object: Option<DenseGrid>,
    pub fixations: Vec<Point>,
}

/// Provenance recorded with a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub scheme: WeightScheme,
    pub region_mode: RegionMode,
    pub k: usize,
    pub saliency_source: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub betas: Vec<f64>,
    /// Images scored at every beta, in input order.
    pub image_ids: Vec<String>,
    /// `per_image_nss[i][j]`: image `i` at `betas[j]`.
    pub per_image_nss: Vec<Vec<f64>>,
    pub mean_nss: Vec<f64>,
    pub sem: Vec<f64>,
    /// Beta with the highest mean NSS; the smaller beta wins ties.
    pub beta_opt: f64,
    pub best_mean_nss: f64,
    /// Images without objects, scored on saliency alone.
    pub saliency_only: Vec<(String, f64)>,
    pub config: SweepConfig,
}

/// Outcome of scoring one image.
#[derive(Clone, Debug, PartialEq)]
pub enum ImageScores {
    /// NSS at each beta of the grid.
    Full(Vec<f64>),
    /// Image has no object map; NSS of the saliency map only.
    SaliencyOnly(f64),
}

/// NSS of `combine(S, O, beta)` for each beta.
pub fn score_image(input: &ScoringInput, betas: &[f64]) -> Result<ImageScores> {
    let wrap = |e: Error| e.in_image(&input.image_id);
    match &input.object {
        None => nss(&input.saliency, &input.fixations).map(ImageScores::SaliencyOnly).map_err(wrap),
        Some(object) => betas
            .iter()
            .map(|&b| nss(&combine(&input.saliency, object, b)?, &input.fixations))
            .collect::<Result<Vec<f64>>>()
            .map(ImageScores::Full)
            .map_err(wrap),
    }
}

/// Sequential beta sweep over a dataset.
pub fn sweep_beta(inputs: &[ScoringInput], betas: &[f64], config: SweepConfig) -> Result<SweepResult> {
    validate_betas(betas)?;
    let scored =
        inputs.iter().map(|inp| Ok((inp.image_id.clone(), score_image(inp, betas)?))).collect::<Result<Vec<_>>>()?;
    SweepResult::from_scores(betas, scored, config)
}

/// Sample standard error of the mean; zero for fewer than two values.
pub fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    libm::sqrt(var / nf)
}

impl SweepResult {
    /// Aggregates per-image scores, keeping their order.
    pub fn from_scores(betas: &[f64], scored: Vec<(String, ImageScores)>, config: SweepConfig) -> Result<Self> {
        validate_betas(betas)?;
        let mut image_ids = Vec::new();
        let mut per_image_nss = Vec::new();
        let mut saliency_only = Vec::new();
        for (id, s) in scored {
            match s {
                ImageScores::Full(row) => {
                    if row.len() != betas.len() {
                        return Err(Error::LengthMismatch { a: row.len(), b: betas.len() });
                    }
                    image_ids.push(id);
                    per_image_nss.push(row);
                }
                ImageScores::SaliencyOnly(v) => saliency_only.push((id, v)),
            }
        }
        if per_image_nss.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = per_image_nss.len() as f64;
        let columns: Vec<Vec<f64>> =
            (0..betas.len()).map(|j| per_image_nss.iter().map(|row| row[j]).collect()).collect();
        let mean_nss: Vec<f64> = columns.iter().map(|c| c.iter().sum::<f64>() / n).collect();
        let sem: Vec<f64> = columns.iter().map(|c| standard_error(c)).collect();
        let mut best = 0;
        for (j, &m) in mean_nss.iter().enumerate() {
            if m > mean_nss[best] {
                best = j;
            }
        }
        Ok(Self {
            betas: betas.to_vec(),
            image_ids,
            per_image_nss,
            beta_opt: betas[best],
            best_mean_nss: mean_nss[best],
            mean_nss,
            sem,
            saliency_only,
            config,
        })
    }

    /// Per-image NSS at the beta with index `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.per_image_nss.iter().map(|row| row[j]).collect()
    }

    pub fn beta_index(&self, beta: f64) -> Option<usize> {
        self.betas.iter().position(|&b| libm::fabs(b - beta) < 1e-12)
    }

    /// Per-image NSS at the optimal beta.
    pub fn optimal_column(&self) -> Vec<f64> {
        self.column(self.beta_index(self.beta_opt).unwrap_or(0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonResult {
    /// Share of images where `a` strictly beats `b`.
    pub win_rate_a_over_b: f64,
    pub wins: usize,
    pub tie_count: usize,
    pub n: usize,
    pub test: TestResult,
}

pub fn compare_models(scores_a: &[f64], scores_b: &[f64]) -> Result<ComparisonResult> {
    let test = paired_t_test(scores_a, scores_b)?;
    let wins = scores_a.iter().zip(scores_b).filter(|(a, b)| a > b).count();
    let ties = scores_a.iter().zip(scores_b).filter(|(a, b)| a == b).count();
    let n = scores_a.len();
    Ok(ComparisonResult { win_rate_a_over_b: wins as f64 / n as f64, wins, tie_count: ties, n, test })
}

/// Draws `n` pixels independently with probability equal to the map value
/// and returns their centers. Deterministic for a given seed.
pub fn sample_fixations(map: &DenseGrid, n: usize, seed: u64) -> Result<Vec<Point>> {
    map.validate()?;
    let total = map.sum();
    if libm::fabs(total - 1.0) > 1e-6 {
        return Err(Error::UnnormalizedMap { sum: total });
    }
    let mut cumulative = Vec::with_capacity(map.values().len());
    let mut acc = 0.0;
    for &v in map.values() {
        acc += v;
        cumulative.push(acc);
    }
    let last_positive = map.values().iter().rposition(|&v| v > 0.0).unwrap_or(0);
    let width = map.width();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let i = cumulative.partition_point(|&c| c <= u).min(last_positive);
            Point::new((i % width) as f64 + 0.5, (i / width) as f64 + 0.5)
        })
        .collect())
}
