//! Dataset-level pipelines: map preparation, beta sweeps, model
//! comparisons and ring profiles. Per-image work runs on a rayon pool whose
//! size can be capped with `GAZECENTER_THREADS`; results keep annotation
//! order, so output does not depend on scheduling.

use std::collections::BTreeMap;

use gazecenter_core::eval::{score_image, ImageScores, SweepConfig};
use gazecenter_core::maps::object_rings;
use gazecenter_core::metrics::ring_fixation_profile;
use gazecenter_core::{
    build_object_map, combine, compare_models, nss, ComparisonResult, FixationSet, ImageAnnotation, ObjectMapConfig,
    Point, RingProfile, ScoringInput, SweepResult,
};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sources::SaliencyProvider;

pub const THREADS_ENV: &str = "GAZECENTER_THREADS";

/// Runs `f` on a pool sized by `GAZECENTER_THREADS` (all cores if unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Rejects fixations on images that are not annotated.
pub fn check_image_ids(annotations: &[ImageAnnotation], fixations: &FixationSet) -> Result<()> {
    let missing = fixations.missing_images(annotations);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingImages(missing))
    }
}

/// Builds S, O and the fixation list of every annotated image that has
/// fixations. Images without any fixation record are skipped with a warning.
pub fn prepare_inputs(
    annotations: &[ImageAnnotation],
    fixations: &FixationSet,
    provider: &SaliencyProvider,
    cfg: &ObjectMapConfig,
) -> Result<Vec<ScoringInput>> {
    check_image_ids(annotations, fixations)?;
    let mut by_image: BTreeMap<&str, Vec<Point>> = fixations.by_image();
    let work: Vec<(&ImageAnnotation, Vec<Point>)> = annotations
        .iter()
        .filter_map(|img| match by_image.remove(img.image_id.as_str()) {
            Some(pts) => Some((img, pts)),
            None => {
                log::warn!("{}: no fixations, image skipped", img.image_id);
                None
            }
        })
        .collect();
    with_pool(|| {
        work.into_par_iter()
            .map(|(img, fixations)| {
                let saliency = provider.load(&img.image_id, img.dims)?;
                let object = if img.objects.is_empty() {
                    log::warn!("{}: no annotated objects, scored on saliency only", img.image_id);
                    None
                } else {
                    Some(build_object_map(img, cfg).map_err(|e| e.in_image(&img.image_id))?)
                };
                Ok(ScoringInput { image_id: img.image_id.clone(), saliency, object, fixations })
            })
            .collect()
    })
}

/// Beta sweep over prepared inputs, scored in parallel.
pub fn sweep_inputs(inputs: &[ScoringInput], betas: &[f64], config: SweepConfig) -> Result<SweepResult> {
    gazecenter_core::eval::validate_betas(betas)?;
    let scored: Vec<(String, ImageScores)> = with_pool(|| {
        inputs
            .par_iter()
            .map(|inp| Ok((inp.image_id.clone(), score_image(inp, betas)?)))
            .collect::<std::result::Result<_, gazecenter_core::Error>>()
    })?;
    Ok(SweepResult::from_scores(betas, scored, config)?)
}

/// Per-image NSS of the saliency map, the object map and their blend.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelScores {
    pub beta: f64,
    pub image_ids: Vec<String>,
    pub saliency: Vec<f64>,
    pub object: Vec<f64>,
    pub combined: Vec<f64>,
}

pub fn model_scores(inputs: &[ScoringInput], beta: f64) -> Result<ModelScores> {
    let rows: Vec<(String, f64, f64, f64)> = with_pool(|| {
        inputs
            .par_iter()
            .filter_map(|inp| inp.object.as_ref().map(|o| (inp, o)))
            .map(|(inp, o)| {
                let f = &inp.fixations;
                let score = || -> gazecenter_core::Result<_> {
                    Ok((
                        inp.image_id.clone(),
                        nss(&inp.saliency, f)?,
                        nss(o, f)?,
                        nss(&combine(&inp.saliency, o, beta)?, f)?,
                    ))
                };
                score().map_err(|e| e.in_image(&inp.image_id))
            })
            .collect::<std::result::Result<_, gazecenter_core::Error>>()
    })?;
    if rows.is_empty() {
        return Err(gazecenter_core::Error::EmptyDataset.into());
    }
    let mut out = ModelScores { beta, image_ids: vec![], saliency: vec![], object: vec![], combined: vec![] };
    for (id, s, o, c) in rows {
        out.image_ids.push(id);
        out.saliency.push(s);
        out.object.push(o);
        out.combined.push(c);
    }
    Ok(out)
}

/// The comparisons reported for a dataset, as `(name, a, b, result)`.
pub fn standard_comparisons(scores: &ModelScores) -> Result<Vec<(&'static str, ComparisonResult)>> {
    Ok(vec![
        ("combined_vs_saliency", compare_models(&scores.combined, &scores.saliency)?),
        ("combined_vs_object", compare_models(&scores.combined, &scores.object)?),
        ("object_vs_saliency", compare_models(&scores.object, &scores.saliency)?),
    ])
}

/// Ring profile of one object; `profile` is `None` when no fixation lands
/// on the object.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectRings {
    pub image_id: String,
    pub object_id: String,
    pub label: Option<String>,
    pub pixel_count: usize,
    pub radii: Vec<f64>,
    pub profile: Option<RingProfile>,
    pub mean_saliency: Option<Vec<f64>>,
}

pub fn ring_profiles(
    annotations: &[ImageAnnotation],
    fixations: &FixationSet,
    cfg: &ObjectMapConfig,
    saliency: Option<&SaliencyProvider>,
) -> Result<Vec<ObjectRings>> {
    check_image_ids(annotations, fixations)?;
    let by_image = fixations.by_image();
    let per_image: Vec<Vec<ObjectRings>> = with_pool(|| {
        annotations
            .par_iter()
            .map(|img| -> Result<Vec<ObjectRings>> {
                let pts: &[Point] = by_image.get(img.image_id.as_str()).map_or(&[], Vec::as_slice);
                let sal = match saliency {
                    Some(p) if !img.objects.is_empty() => Some(p.load(&img.image_id, img.dims)?),
                    _ => None,
                };
                img.objects
                    .iter()
                    .map(|obj| {
                        let part = object_rings(obj, img.dims, cfg.region_mode, cfg.k)
                            .map_err(|e| e.in_image(&img.image_id))?;
                        let profile = match ring_fixation_profile(&part, pts) {
                            Ok(p) => Some(p),
                            Err(gazecenter_core::Error::NoObjectFixations) => None,
                            Err(e) => return Err(e.into()),
                        };
                        let mean_saliency =
                            sal.as_ref().map(|s| gazecenter_core::ring_saliency_profile(&part, s)).transpose()?;
                        Ok(ObjectRings {
                            image_id: img.image_id.clone(),
                            object_id: obj.object_id.clone(),
                            label: obj.label.clone(),
                            pixel_count: part.pixels().len(),
                            radii: part.radii().to_vec(),
                            profile,
                            mean_saliency,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()
    })?;
    Ok(per_image.into_iter().flatten().collect())
}

/// Mean of equal-length vectors; `None` when there are none.
pub fn mean_vector<'a>(vs: impl IntoIterator<Item = &'a [f64]>) -> Option<Vec<f64>> {
    let mut acc: Option<Vec<f64>> = None;
    let mut n = 0usize;
    for v in vs {
        let a = acc.get_or_insert_with(|| vec![0.0; v.len()]);
        for (x, y) in a.iter_mut().zip(v) {
            *x += y;
        }
        n += 1;
    }
    acc.map(|mut a| {
        for x in &mut a {
            *x /= n as f64;
        }
        a
    })
}
