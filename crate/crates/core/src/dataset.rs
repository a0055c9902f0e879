//! Annotation and fixation records plus dataset-level summary statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{rasterize_polygon, Point, Polygon, RegionMode};
use crate::grid::{DenseGrid, Dims};
use crate::maps::{build_fixation_map, smooth_map};
use crate::saliency::resample_bilinear;

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectAnnotation {
    pub object_id: String,
    pub polygon: Polygon,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageAnnotation {
    pub image_id: String,
    pub dims: Dims,
    pub objects: Vec<ObjectAnnotation>,
}

/// One fixation of one observer on one image.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixation {
    pub image_id: String,
    pub observer_id: String,
    /// 1-based position within the observer's scanpath.
    pub index: u32,
    pub x: f64,
    pub y: f64,
    pub duration_ms: Option<f64>,
}

impl Fixation {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FixationSet {
    pub records: Vec<Fixation>,
}

impl FixationSet {
    pub fn new(records: Vec<Fixation>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Fixation points of one image, in file order.
    pub fn points_for(&self, image_id: &str) -> Vec<Point> {
        self.records.iter().filter(|f| f.image_id == image_id).map(Fixation::point).collect()
    }

    /// Points grouped by image id.
    pub fn by_image(&self) -> BTreeMap<&str, Vec<Point>> {
        let mut out: BTreeMap<&str, Vec<Point>> = BTreeMap::new();
        for f in &self.records {
            out.entry(f.image_id.as_str()).or_default().push(f.point());
        }
        out
    }

    /// Image ids referenced by fixations but absent from `annotations`.
    pub fn missing_images(&self, annotations: &[ImageAnnotation]) -> Vec<String> {
        let known: BTreeSet<&str> = annotations.iter().map(|a| a.image_id.as_str()).collect();
        let missing: BTreeSet<&str> =
            self.records.iter().map(|f| f.image_id.as_str()).filter(|id| !known.contains(id)).collect();
        missing.into_iter().map(String::from).collect()
    }

    /// Indices of records that fall outside their image. They stay in the
    /// set and are dropped only when scoring.
    pub fn out_of_bounds(&self, annotations: &[ImageAnnotation]) -> Vec<usize> {
        let dims: BTreeMap<&str, Dims> = annotations.iter().map(|a| (a.image_id.as_str(), a.dims)).collect();
        self.records
            .iter()
            .enumerate()
            .filter(|(_, f)| match dims.get(f.image_id.as_str()) {
                Some(d) => d.pixel_of(f.x, f.y).is_none(),
                None => false,
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Fixed-width histogram over `[0, 1]`. Bin 0 is `[0, w]`, bin `j > 0` is
/// `(j*w, (j+1)*w]`, so bin 0 counts exactly the values `<= w`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitHistogram {
    pub counts: Vec<usize>,
}

impl UnitHistogram {
    pub fn from_values(values: impl IntoIterator<Item = f64>, bins: usize) -> Self {
        let mut counts = vec![0usize; bins];
        for v in values {
            let b = (libm::ceil(v * bins as f64) as isize - 1).clamp(0, bins as isize - 1);
            counts[b as usize] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn edges(&self) -> Vec<f64> {
        let n = self.counts.len();
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectStats {
    pub image_id: String,
    pub object_id: String,
    pub label: Option<String>,
    /// Object pixels over image pixels.
    pub normalized_size: f64,
    /// Share of the image's fixations landing on this object.
    pub fixation_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageStats {
    pub image_id: String,
    pub object_count: usize,
    pub fixation_count: usize,
    /// Object with the largest fixation fraction; ties go to the smaller id.
    pub most_salient_object: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetStats {
    pub objects: Vec<ObjectStats>,
    pub images: Vec<ImageStats>,
    pub size_histogram: UnitHistogram,
    pub fraction_histogram: UnitHistogram,
    /// `objects_per_image_histogram[n]` = images with exactly `n` objects.
    pub objects_per_image_histogram: Vec<usize>,
    /// Share of objects with normalized size `<= 0.10`.
    pub small_object_share: f64,
    pub mean_objects_per_image: f64,
    pub median_objects_per_image: f64,
    pub total_fixations: usize,
    pub average_annotation_map: Option<DenseGrid>,
    pub average_fixation_map: Option<DenseGrid>,
    /// Images whose object fractions were undefined and reported as zero.
    pub images_without_fixations: Vec<String>,
}

/// Options for [`dataset_stats`].
#[derive(Clone, Copy, Debug)]
pub struct StatsOptions {
    pub smoothing_sigma_px: f64,
    pub histogram_bins: usize,
    /// Resolution of the average maps. Defaults to the first image's dims.
    pub average_dims: Option<Dims>,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self { smoothing_sigma_px: 0.0, histogram_bins: 10, average_dims: None }
    }
}

pub fn dataset_stats(
    annotations: &[ImageAnnotation],
    fixations: &FixationSet,
    opts: &StatsOptions,
) -> Result<DatasetStats> {
    if annotations.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(id) = fixations.missing_images(annotations).into_iter().next() {
        return Err(Error::MissingImage(id));
    }
    if opts.smoothing_sigma_px < 0.0 {
        return Err(Error::NegativeSigma(opts.smoothing_sigma_px));
    }
    let avg_dims = opts.average_dims.unwrap_or(annotations[0].dims);
    if avg_dims.is_empty() {
        return Err(Error::ZeroDims);
    }
    let by_image = fixations.by_image();

    let mut objects = Vec::new();
    let mut images = Vec::new();
    let mut images_without_fixations = Vec::new();
    let mut ann_acc = DenseGrid::zeros(avg_dims);
    let mut fix_acc = DenseGrid::zeros(avg_dims);
    let mut fix_maps = 0usize;

    for img in annotations {
        let pts: &[Point] = by_image.get(img.image_id.as_str()).map_or(&[], Vec::as_slice);
        let mut mask = DenseGrid::zeros(img.dims);
        let mut fracs: Vec<(usize, f64)> = Vec::with_capacity(img.objects.len());
        for obj in &img.objects {
            let ps = rasterize_polygon(&obj.polygon, img.dims, RegionMode::Polygon)
                .map_err(|e| e.in_object(&obj.object_id))?;
            for (c, r) in ps.iter() {
                mask.set(c, r, 1.0);
            }
            let fraction = if pts.is_empty() {
                0.0
            } else {
                pts.iter().filter(|p| ps.contains_point(**p)).count() as f64 / pts.len() as f64
            };
            fracs.push((objects.len(), fraction));
            objects.push(ObjectStats {
                image_id: img.image_id.clone(),
                object_id: obj.object_id.clone(),
                label: obj.label.clone(),
                normalized_size: ps.len() as f64 / img.dims.len() as f64,
                fixation_fraction: fraction,
            });
        }
        if pts.is_empty() {
            images_without_fixations.push(img.image_id.clone());
        }
        let most_salient_object = if pts.is_empty() {
            None
        } else {
            fracs
                .iter()
                .map(|&(i, f)| (f, &objects[i].object_id))
                .reduce(|best, cand| if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) { cand } else { best })
                .map(|(_, id)| id.clone())
        };
        images.push(ImageStats {
            image_id: img.image_id.clone(),
            object_count: img.objects.len(),
            fixation_count: pts.len(),
            most_salient_object,
        });

        accumulate(&mut ann_acc, &resample_nearest(&mask, avg_dims));
        if let Ok(fm) = build_fixation_map(pts, img.dims, 0.0) {
            let fm = smooth_map(&resample_bilinear(&fm, avg_dims), opts.smoothing_sigma_px)?;
            if let Ok(fm) = fm.normalized() {
                accumulate(&mut fix_acc, &fm);
                fix_maps += 1;
            }
        }
    }

    let counts: Vec<usize> = images.iter().map(|i| i.object_count).collect();
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let mut objects_per_image_histogram = vec![0usize; max_count + 1];
    for &c in &counts {
        objects_per_image_histogram[c] += 1;
    }
    let n_obj = objects.len();
    let small = objects.iter().filter(|o| o.normalized_size <= 0.10).count();

    Ok(DatasetStats {
        size_histogram: UnitHistogram::from_values(objects.iter().map(|o| o.normalized_size), opts.histogram_bins),
        fraction_histogram: UnitHistogram::from_values(
            objects.iter().map(|o| o.fixation_fraction),
            opts.histogram_bins,
        ),
        objects_per_image_histogram,
        small_object_share: if n_obj == 0 { 0.0 } else { small as f64 / n_obj as f64 },
        mean_objects_per_image: counts.iter().sum::<usize>() as f64 / counts.len() as f64,
        median_objects_per_image: median(&counts),
        total_fixations: fixations.len(),
        average_annotation_map: ann_acc.normalized().ok(),
        average_fixation_map: if fix_maps == 0 { None } else { fix_acc.normalized().ok() },
        images_without_fixations,
        objects,
        images,
    })
}

fn accumulate(acc: &mut DenseGrid, g: &DenseGrid) {
    for (a, v) in acc.values_mut().iter_mut().zip(g.values()) {
        *a += v;
    }
}

fn median(xs: &[usize]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

/// Nearest-neighbour resampling by pixel center; used for binary masks.
pub fn resample_nearest(g: &DenseGrid, to: Dims) -> DenseGrid {
    if g.dims() == to {
        return g.clone();
    }
    let from = g.dims();
    DenseGrid::from_fn(to, |c, r| {
        let sc = ((c as f64 + 0.5) * from.width as f64 / to.width as f64) as usize;
        let sr = ((r as f64 + 0.5) * from.height as f64 / to.height as f64) as usize;
        g.get(sc.min(from.width - 1), sr.min(from.height - 1))
    })
}
