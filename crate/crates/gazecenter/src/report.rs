//! Result files: flat CSV tables, pretty JSON and SVG charts.
//!
//! CSV cells and chart annotations share [`num`], so a number printed in a
//! chart is byte-for-byte the value in the matching CSV cell. JSON numbers
//! are written by `serde_json`; non-finite values become `null`.

use std::fs;
use std::path::{Path, PathBuf};

use gazecenter_core::dataset::UnitHistogram;
use gazecenter_core::{ComparisonResult, DatasetStats, ObjectMapConfig, SweepResult, WeightScheme};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mapio::{write_map_as, MapFormat};
use crate::pipeline::{mean_vector, ModelScores, ObjectRings};
use crate::svg;
pub use crate::svg::num;

/// Which report files to write.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self { csv: true, json: true, svg: true }
    }
}

impl Formats {
    /// Parses a comma-separated subset of `csv,json,svg`.
    pub fn parse(list: &str) -> std::result::Result<Self, String> {
        let mut f = Formats { csv: false, json: false, svg: false };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown report format `{other}` (expected csv, json or svg)")),
            }
        }
        if f == (Formats { csv: false, json: false, svg: false }) {
            return Err("no report format selected".into());
        }
        Ok(f)
    }
}

/// Collects written paths so the CLI can list them.
#[derive(Debug)]
pub struct Writer {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        s.push('\n');
        self.text(name, &s)
    }

    pub fn map(&mut self, name: &str, format: MapFormat, grid: &gazecenter_core::DenseGrid) -> Result<()> {
        let path = self.dir.join(format!("{name}.{}", format.extension()));
        write_map_as(&path, format, grid)?;
        self.written.push(path);
        Ok(())
    }
}

/// Comma-joined CSV line with minimal quoting.
fn row<I, S>(cells: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = cells
        .into_iter()
        .map(|c| {
            let c = c.as_ref();
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn scheme_json(scheme: &WeightScheme) -> Value {
    match scheme {
        WeightScheme::Gaussian { sigma_rings } => json!({ "name": "gaussian", "sigma_rings": sigma_rings }),
        s => json!({ "name": s.name() }),
    }
}

pub fn region_mode_name(mode: gazecenter_core::RegionMode) -> &'static str {
    match mode {
        gazecenter_core::RegionMode::Polygon => "polygon",
        gazecenter_core::RegionMode::BBox => "bbox",
    }
}

pub fn object_config_json(cfg: &ObjectMapConfig) -> Value {
    json!({ "scheme": scheme_json(&cfg.scheme), "region_mode": region_mode_name(cfg.region_mode), "k": cfg.k })
}

/// `sweep.csv` has one `image_id,beta,nss` row per image and beta.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = row(["image_id", "beta", "nss"]);
    for (id, scores) in result.image_ids.iter().zip(&result.per_image_nss) {
        for (b, s) in result.betas.iter().zip(scores) {
            out.push_str(&row([id.as_str(), &num(*b), &num(*s)]));
        }
    }
    out
}

pub fn sweep_summary_csv(result: &SweepResult) -> String {
    let mut out = row(["beta", "mean_nss", "sem"]);
    for ((b, m), s) in result.betas.iter().zip(&result.mean_nss).zip(&result.sem) {
        out.push_str(&row([num(*b), num(*m), num(*s)]));
    }
    out
}

pub fn sweep_json(result: &SweepResult) -> Value {
    let images: Vec<Value> = result
        .image_ids
        .iter()
        .zip(&result.per_image_nss)
        .map(|(id, nss)| json!({ "image_id": id, "nss": nss }))
        .collect();
    let saliency_only: Vec<Value> =
        result.saliency_only.iter().map(|(id, s)| json!({ "image_id": id, "nss_beta0": s })).collect();
    json!({
        "betas": result.betas,
        "mean_nss": result.mean_nss,
        "sem": result.sem,
        "beta_opt": result.beta_opt,
        "best_mean_nss": result.best_mean_nss,
        "images": images,
        "saliency_only": saliency_only,
        "config": {
            "scheme": scheme_json(&result.config.scheme),
            "region_mode": region_mode_name(result.config.region_mode),
            "k": result.config.k,
            "saliency_source": result.config.saliency_source,
        },
    })
}

pub fn sweep_svg(result: &SweepResult) -> String {
    svg::line_with_errors(
        &format!("Combined model NSS ({} scheme), optimal beta {}", result.config.scheme.name(), num(result.beta_opt)),
        "beta",
        "mean NSS",
        &result.betas,
        &result.mean_nss,
        &result.sem,
        Some((result.beta_opt, result.best_mean_nss)),
    )
}

pub fn write_sweep(w: &mut Writer, result: &SweepResult, formats: Formats) -> Result<()> {
    if formats.csv {
        w.text("sweep.csv", &sweep_csv(result))?;
        w.text("sweep_summary.csv", &sweep_summary_csv(result))?;
    }
    if formats.json {
        w.json("sweep.json", &sweep_json(result))?;
    }
    if formats.svg {
        w.text("sweep.svg", &sweep_svg(result))?;
    }
    Ok(())
}

fn model_label(name: &str) -> (&'static str, &'static str) {
    match name {
        "combined_vs_saliency" => ("combined", "saliency"),
        "combined_vs_object" => ("combined", "object"),
        "object_vs_saliency" => ("object", "saliency"),
        _ => ("a", "b"),
    }
}

fn column<'a>(scores: &'a ModelScores, model: &str) -> &'a [f64] {
    match model {
        "saliency" => &scores.saliency,
        "object" => &scores.object,
        _ => &scores.combined,
    }
}

/// Per-image NSS of the three models.
pub fn compare_csv(scores: &ModelScores) -> String {
    let mut out = row(["image_id", "saliency", "object", "combined"]);
    for (i, id) in scores.image_ids.iter().enumerate() {
        out.push_str(&row([id.as_str(), &num(scores.saliency[i]), &num(scores.object[i]), &num(scores.combined[i])]));
    }
    out
}

pub fn compare_summary_csv(comparisons: &[(&str, ComparisonResult)]) -> String {
    let mut out = row(["comparison", "win_rate", "wins", "ties", "n", "t", "p", "mean_diff", "sem"]);
    for (name, c) in comparisons {
        out.push_str(&row([
            name.to_string(),
            num(c.win_rate_a_over_b),
            c.wins.to_string(),
            c.tie_count.to_string(),
            c.n.to_string(),
            num(c.test.t_statistic),
            num(c.test.p_value),
            num(c.test.mean_diff),
            num(c.test.sem),
        ]));
    }
    out
}

pub fn compare_json(scores: &ModelScores, comparisons: &[(&str, ComparisonResult)], object: &ObjectMapConfig) -> Value {
    let comps: Vec<Value> = comparisons
        .iter()
        .map(|(name, c)| {
            let (a, b) = model_label(name);
            json!({
                "name": name,
                "model_a": a,
                "model_b": b,
                "win_rate_a_over_b": c.win_rate_a_over_b,
                "wins": c.wins,
                "ties": c.tie_count,
                "n": c.n,
                "t_statistic": c.test.t_statistic,
                "p_value": c.test.p_value,
                "mean_diff": c.test.mean_diff,
                "sem": c.test.sem,
            })
        })
        .collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    json!({
        "beta": scores.beta,
        "object_config": object_config_json(object),
        "mean_nss": {
            "saliency": mean(&scores.saliency),
            "object": mean(&scores.object),
            "combined": mean(&scores.combined),
        },
        "comparisons": comps,
        "images": scores.image_ids.iter().enumerate().map(|(i, id)| json!({
            "image_id": id,
            "saliency": scores.saliency[i],
            "object": scores.object[i],
            "combined": scores.combined[i],
        })).collect::<Vec<_>>(),
    })
}

/// Scatter of model A against model B; the title carries the win rate as
/// written in `compare_summary.csv`.
pub fn scatter_svg(scores: &ModelScores, name: &str, c: &ComparisonResult) -> String {
    let (a, b) = model_label(name);
    svg::scatter_with_diagonal(
        &format!("{a} vs {b}: win rate {}", num(c.win_rate_a_over_b)),
        &format!("{b} NSS"),
        &format!("{a} NSS"),
        column(scores, b),
        column(scores, a),
    )
}

pub fn write_comparison(
    w: &mut Writer,
    scores: &ModelScores,
    comparisons: &[(&str, ComparisonResult)],
    object: &ObjectMapConfig,
    formats: Formats,
) -> Result<()> {
    if formats.csv {
        w.text("compare.csv", &compare_csv(scores))?;
        w.text("compare_summary.csv", &compare_summary_csv(comparisons))?;
    }
    if formats.json {
        w.json("compare.json", &compare_json(scores, comparisons, object))?;
    }
    if formats.svg {
        for (name, c) in comparisons {
            w.text(&format!("scatter_{name}.svg"), &scatter_svg(scores, name, c))?;
        }
    }
    Ok(())
}

/// One row per object and ring.
pub fn rings_csv(rings: &[ObjectRings]) -> String {
    let mut out = row(["image_id", "object_id", "ring", "radius", "count", "p", "mean_saliency"]);
    for o in rings {
        for (i, r) in o.radii.iter().enumerate() {
            let (count, p) = match &o.profile {
                Some(pr) => (pr.counts[i].to_string(), num(pr.p[i])),
                None => (String::new(), String::new()),
            };
            let sal = opt_num(o.mean_saliency.as_ref().map(|m| m[i]));
            out.push_str(&row([o.image_id.clone(), o.object_id.clone(), (i + 1).to_string(), num(*r), count, p, sal]));
        }
    }
    out
}

/// One row per object; `obj_cnt_idx` is empty when no fixation hit it.
pub fn objects_index_csv(rings: &[ObjectRings]) -> String {
    let mut out = row(["image_id", "object_id", "label", "pixel_count", "n_fix", "obj_cnt_idx"]);
    for o in rings {
        out.push_str(&row([
            o.image_id.clone(),
            o.object_id.clone(),
            o.label.clone().unwrap_or_default(),
            o.pixel_count.to_string(),
            o.profile.as_ref().map_or(0, |p| p.n_fix).to_string(),
            opt_num(o.profile.as_ref().map(|p| p.obj_cnt_idx)),
        ]));
    }
    out
}

/// Aggregate ring curves: mean fixation density over objects with
/// fixations, and mean of per-object saliency normalized to sum one.
pub struct RingSummary {
    pub mean_p: Option<Vec<f64>>,
    pub mean_saliency: Option<Vec<f64>>,
    pub index_histogram: UnitHistogram,
    pub objects_with_fixations: usize,
}

pub fn ring_summary(rings: &[ObjectRings]) -> RingSummary {
    let mean_p = mean_vector(rings.iter().filter_map(|o| o.profile.as_ref()).map(|p| p.p.as_slice()));
    let normalized: Vec<Vec<f64>> = rings
        .iter()
        .filter_map(|o| o.mean_saliency.as_ref())
        .filter_map(|m| {
            let s: f64 = m.iter().sum();
            (s > 0.0).then(|| m.iter().map(|v| v / s).collect())
        })
        .collect();
    let mean_saliency = mean_vector(normalized.iter().map(Vec::as_slice));
    let indices: Vec<f64> = rings.iter().filter_map(|o| o.profile.as_ref()).map(|p| p.obj_cnt_idx).collect();
    RingSummary {
        mean_p,
        mean_saliency,
        objects_with_fixations: indices.len(),
        index_histogram: UnitHistogram::from_values(indices, 10),
    }
}

pub fn rings_json(rings: &[ObjectRings], summary: &RingSummary, cfg: &ObjectMapConfig) -> Value {
    let objects: Vec<Value> = rings
        .iter()
        .map(|o| {
            json!({
                "image_id": o.image_id,
                "object_id": o.object_id,
                "label": o.label,
                "pixel_count": o.pixel_count,
                "radii": o.radii,
                "counts": o.profile.as_ref().map(|p| &p.counts),
                "p": o.profile.as_ref().map(|p| &p.p),
                "n_fix": o.profile.as_ref().map_or(0, |p| p.n_fix),
                "obj_cnt_idx": o.profile.as_ref().map(|p| p.obj_cnt_idx),
                "mean_saliency": o.mean_saliency,
            })
        })
        .collect();
    json!({
        "config": object_config_json(cfg),
        "objects_with_fixations": summary.objects_with_fixations,
        "mean_p": summary.mean_p,
        "mean_saliency_share": summary.mean_saliency,
        "obj_cnt_idx_histogram": {
            "edges": summary.index_histogram.edges(),
            "counts": summary.index_histogram.counts,
        },
        "objects": objects,
    })
}

pub fn ring_profile_svg(summary: &RingSummary, k: usize) -> String {
    let xs: Vec<f64> = (1..=k).map(|i| i as f64).collect();
    let mut series: Vec<(&str, Vec<f64>)> = Vec::new();
    if let Some(p) = &summary.mean_p {
        series.push(("fixation density", p.clone()));
    }
    if let Some(s) = &summary.mean_saliency {
        series.push(("saliency share", s.clone()));
    }
    svg::multi_line(
        &format!("Ring profile over {} objects", summary.objects_with_fixations),
        "ring (1 = innermost)",
        "share",
        &xs,
        &series,
    )
}

pub fn index_histogram_svg(summary: &RingSummary) -> String {
    svg::histogram(
        "Object center-bias index",
        "obj_cnt_idx",
        &summary.index_histogram.edges(),
        &summary.index_histogram.counts,
    )
}

pub fn write_rings(w: &mut Writer, rings: &[ObjectRings], cfg: &ObjectMapConfig, formats: Formats) -> Result<()> {
    let summary = ring_summary(rings);
    if formats.csv {
        w.text("rings.csv", &rings_csv(rings))?;
        w.text("obj_cnt_idx.csv", &objects_index_csv(rings))?;
    }
    if formats.json {
        w.json("rings.json", &rings_json(rings, &summary, cfg))?;
    }
    if formats.svg {
        w.text("ring_profile.svg", &ring_profile_svg(&summary, cfg.k))?;
        w.text("obj_cnt_idx.svg", &index_histogram_svg(&summary))?;
    }
    Ok(())
}

pub fn objects_csv(stats: &DatasetStats) -> String {
    let mut out = row(["image_id", "object_id", "label", "normalized_size", "fixation_fraction"]);
    for o in &stats.objects {
        out.push_str(&row([
            o.image_id.clone(),
            o.object_id.clone(),
            o.label.clone().unwrap_or_default(),
            num(o.normalized_size),
            num(o.fixation_fraction),
        ]));
    }
    out
}

pub fn images_csv(stats: &DatasetStats) -> String {
    let mut out = row(["image_id", "object_count", "fixation_count", "most_salient_object"]);
    for i in &stats.images {
        out.push_str(&row([
            i.image_id.clone(),
            i.object_count.to_string(),
            i.fixation_count.to_string(),
            i.most_salient_object.clone().unwrap_or_default(),
        ]));
    }
    out
}

pub fn stats_json(stats: &DatasetStats) -> Value {
    let hist = |h: &UnitHistogram| json!({ "edges": h.edges(), "counts": h.counts });
    json!({
        "image_count": stats.images.len(),
        "object_count": stats.objects.len(),
        "total_fixations": stats.total_fixations,
        "small_object_share": stats.small_object_share,
        "mean_objects_per_image": stats.mean_objects_per_image,
        "median_objects_per_image": stats.median_objects_per_image,
        "objects_per_image_histogram": stats.objects_per_image_histogram,
        "size_histogram": hist(&stats.size_histogram),
        "fixation_fraction_histogram": hist(&stats.fraction_histogram),
        "images_without_fixations": stats.images_without_fixations,
        "images": stats.images.iter().map(|i| json!({
            "image_id": i.image_id,
            "object_count": i.object_count,
            "fixation_count": i.fixation_count,
            "most_salient_object": i.most_salient_object,
        })).collect::<Vec<_>>(),
    })
}

pub fn write_stats(w: &mut Writer, stats: &DatasetStats, formats: Formats) -> Result<()> {
    if formats.csv {
        w.text("objects.csv", &objects_csv(stats))?;
        w.text("images.csv", &images_csv(stats))?;
    }
    if formats.json {
        w.json("stats.json", &stats_json(stats))?;
    }
    if formats.svg {
        let h = &stats.size_histogram;
        w.text(
            "object_size.svg",
            &svg::histogram("Normalized object size", "object area / image area", &h.edges(), &h.counts),
        )?;
        let h = &stats.fraction_histogram;
        w.text(
            "fixation_fraction.svg",
            &svg::histogram("Fixations per object", "share of the image's fixations", &h.edges(), &h.counts),
        )?;
    }
    if let Some(m) = &stats.average_annotation_map {
        w.map("average_annotation_map", MapFormat::FloatBinary, m)?;
        w.map("average_annotation_map", MapFormat::Pgm16, m)?;
    }
    if let Some(m) = &stats.average_fixation_map {
        w.map("average_fixation_map", MapFormat::FloatBinary, m)?;
        w.map("average_fixation_map", MapFormat::Pgm16, m)?;
    }
    Ok(())
}
