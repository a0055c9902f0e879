//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a data error (one `error[CODE]: message`
//! line on stderr), 2 on a usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gazecenter_core::eval::SweepConfig;
use gazecenter_core::maps::object_rings;
use gazecenter_core::saliency::builtin_saliency;
use gazecenter_core::{
    build_object_map, dataset_stats, default_betas, FixationSet, ImageAnnotation, ObjectMapConfig, RegionMode,
    StatsOptions, WeightScheme,
};
use serde::{Deserialize, Serialize};

use crate::annotations::load_annotations;
use crate::error::Error;
use crate::fixations::load_fixations;
use crate::mapio::MapFormat;
use crate::pipeline::{
    check_image_ids, model_scores, prepare_inputs, ring_profiles, standard_comparisons, sweep_inputs, with_pool,
};
use crate::report::{self, num, Formats, Writer};
use crate::sources::{find_image, load_rgb, SaliencyProvider, IMAGE_EXTENSIONS};

#[derive(Debug, Parser)]
#[command(name = "gazecenter", version, about = "Object center-bias analysis of fixation datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check annotation, fixation and saliency inputs for consistency.
    Validate,
    /// Dataset statistics: object sizes, fixation shares, average maps.
    Stats,
    /// Per-object ring fixation profiles and center-bias indices.
    Rings,
    /// Write the object center-bias map of every annotated image.
    Objmap,
    /// Write built-in saliency maps for the images in --image-dir.
    Saliency,
    /// Score the combined model over a grid of beta values.
    Sweep,
    /// Paired comparison of saliency, object and combined models.
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SchemeArg {
    Linear,
    Constant,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RegionArg {
    Polygon,
    Bbox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MapFormatArg {
    Smap,
    Csv,
    Pgm,
}

impl From<MapFormatArg> for MapFormat {
    fn from(f: MapFormatArg) -> Self {
        match f {
            MapFormatArg::Smap => MapFormat::FloatBinary,
            MapFormatArg::Csv => MapFormat::Csv,
            MapFormatArg::Pgm => MapFormat::Pgm16,
        }
    }
}

#[derive(Debug, Default, Args)]
struct Opts {
    /// Annotation file (JSON).
    #[arg(long, global = true)]
    annotations: Option<PathBuf>,
    /// Fixation file (CSV).
    #[arg(long, global = true)]
    fixations: Option<PathBuf>,
    /// Directory of `<image_id>.smap` saliency maps.
    #[arg(long, global = true)]
    saliency_dir: Option<PathBuf>,
    /// Use the built-in center-surround saliency on images in --image-dir.
    #[arg(long, global = true)]
    builtin_saliency: bool,
    /// Directory of `<image_id>.png|ppm` stimulus images.
    #[arg(long, global = true)]
    image_dir: Option<PathBuf>,
    /// Resample saliency maps whose size differs from the annotation.
    #[arg(long, global = true)]
    resample: bool,
    /// Output directory [default: .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Ring weighting scheme [default: linear]
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,
    /// Width of the gaussian scheme, in rings [default: 3]
    #[arg(long, global = true)]
    gaussian_sigma: Option<f64>,
    /// Object region mode [default: polygon]
    #[arg(long, global = true, value_enum)]
    region_mode: Option<RegionArg>,
    /// Rings per object [default: 10]
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Comma-separated beta grid [default: 0,0.1,...,1]
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    betas: Option<Vec<f64>>,
    /// Single beta for `compare` [default: the sweep optimum]
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Fixation-map smoothing for `stats`, in pixels [default: 0]
    #[arg(long, global = true)]
    sigma_px: Option<f64>,
    /// Seed recorded with the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report formats, comma-separated subset of csv,json,svg [default: all]
    #[arg(long, global = true)]
    format: Option<String>,
    /// Map file format for `objmap` and `saliency` [default: smap]
    #[arg(long, global = true, value_enum)]
    map_format: Option<MapFormatArg>,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Run configuration; the same fields can come from `--config` and flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub annotations: Option<PathBuf>,
    pub fixations: Option<PathBuf>,
    pub saliency_dir: Option<PathBuf>,
    pub builtin_saliency: bool,
    pub image_dir: Option<PathBuf>,
    pub resample: bool,
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scheme: Option<SchemeArg>,
    pub gaussian_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    region_mode: Option<RegionArg>,
    pub k: Option<usize>,
    pub betas: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub sigma_px: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map_format: Option<MapFormatArg>,
}

impl RunConfig {
    fn merge(mut self, o: Opts) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f; } )* };
        }
        take!(
            annotations,
            fixations,
            saliency_dir,
            image_dir,
            out_dir,
            scheme,
            gaussian_sigma,
            region_mode,
            k,
            betas,
            beta,
            sigma_px,
            seed,
            format,
            map_format
        );
        self.builtin_saliency |= o.builtin_saliency;
        self.resample |= o.resample;
        self
    }

    fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn object_config(&self) -> Result<ObjectMapConfig, Failure> {
        let scheme = match self.scheme.unwrap_or(SchemeArg::Linear) {
            SchemeArg::Linear => WeightScheme::Linear,
            SchemeArg::Constant => WeightScheme::Constant,
            SchemeArg::Gaussian => match self.gaussian_sigma {
                Some(s) if !(s > 0.0 && s.is_finite()) => {
                    return Err(Failure::Usage(format!("--gaussian-sigma must be positive, got {s}")))
                }
                Some(s) => WeightScheme::Gaussian { sigma_rings: s },
                None => WeightScheme::gaussian(),
            },
        };
        let region_mode = match self.region_mode.unwrap_or(RegionArg::Polygon) {
            RegionArg::Polygon => RegionMode::Polygon,
            RegionArg::Bbox => RegionMode::BBox,
        };
        let k = self.k.unwrap_or(gazecenter_core::geometry::DEFAULT_RINGS);
        if k == 0 {
            return Err(Failure::Usage("--k must be at least 1".into()));
        }
        Ok(ObjectMapConfig { scheme, region_mode, k })
    }

    fn formats(&self) -> Result<Formats, Failure> {
        match &self.format {
            Some(f) => Formats::parse(f).map_err(Failure::Usage),
            None => Ok(Formats::default()),
        }
    }

    fn betas(&self) -> Result<Vec<f64>, Failure> {
        let betas = self.betas.clone().unwrap_or_else(default_betas);
        gazecenter_core::eval::validate_betas(&betas)
            .map_err(|_| Failure::Usage("--betas must be a non-empty list of values in [0, 1]".into()))?;
        Ok(betas)
    }

    fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
        value.as_deref().ok_or_else(|| Failure::Usage(format!("missing required --{flag}")))
    }

    fn provider(&self) -> Result<Option<SaliencyProvider>, Failure> {
        match (&self.saliency_dir, self.builtin_saliency) {
            (Some(_), true) => Err(Failure::Usage("--saliency-dir and --builtin-saliency are exclusive".into())),
            (Some(dir), false) => Ok(Some(SaliencyProvider::External { dir: dir.clone(), resample: self.resample })),
            (None, true) => {
                let image_dir = self.require(&self.image_dir, "image-dir")?.to_path_buf();
                Ok(Some(SaliencyProvider::Builtin { image_dir }))
            }
            (None, false) => Ok(None),
        }
    }

    fn require_provider(&self) -> Result<SaliencyProvider, Failure> {
        self.provider()?.ok_or_else(|| Failure::Usage("missing --saliency-dir or --builtin-saliency".into()))
    }
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<gazecenter_core::Error> for Failure {
    fn from(e: gazecenter_core::Error) -> Self {
        Failure::Data(e.into())
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error[USAGE]: {msg}");
            eprintln!("run `gazecenter --help` for usage");
            2
        }
        Err(Failure::Data(e)) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.code());
            1
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let base = match &cli.opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<RunConfig>(&text).map_err(|e| Error::Parse {
                path: path.clone(),
                line: e.line(),
                field: String::new(),
                message: e.to_string(),
            })?
        }
        None => RunConfig::default(),
    };
    let cfg = base.merge(cli.opts);
    match cli.command {
        Command::Validate => validate(&cfg),
        Command::Stats => stats(&cfg),
        Command::Rings => rings(&cfg),
        Command::Objmap => objmap(&cfg),
        Command::Saliency => saliency(&cfg),
        Command::Sweep => sweep(&cfg),
        Command::Compare => compare(&cfg),
    }
}

fn load_pair(cfg: &RunConfig) -> Result<(Vec<ImageAnnotation>, FixationSet), Failure> {
    let ann_path = cfg.require(&cfg.annotations, "annotations")?;
    let fix_path = cfg.require(&cfg.fixations, "fixations")?;
    Ok((load_annotations(ann_path)?, load_fixations(fix_path)?))
}

fn write_run_config(w: &mut Writer, cfg: &RunConfig) -> Result<(), Failure> {
    let value = serde_json::to_value(cfg).expect("run configuration serializes");
    w.json("run.json", &value)?;
    Ok(())
}

fn validate(cfg: &RunConfig) -> Result<(), Failure> {
    let ann = load_annotations(cfg.require(&cfg.annotations, "annotations")?)?;
    let obj_cfg = cfg.object_config()?;
    for img in &ann {
        for obj in &img.objects {
            object_rings(obj, img.dims, obj_cfg.region_mode, obj_cfg.k).map_err(|e| e.in_image(&img.image_id))?;
        }
    }
    let objects: usize = ann.iter().map(|i| i.objects.len()).sum();
    println!("annotations: {} images, {objects} objects", ann.len());
    if let Some(path) = &cfg.fixations {
        let fix = load_fixations(path)?;
        check_image_ids(&ann, &fix)?;
        let oob = fix.out_of_bounds(&ann).len();
        println!("fixations: {} records, {oob} out of bounds", fix.len());
        if oob > 0 {
            log::warn!("{oob} fixation(s) fall outside their image and will be ignored");
        }
    }
    if let Some(provider) = cfg.provider()? {
        with_pool(|| {
            use rayon::prelude::*;
            ann.par_iter().try_for_each(|img| provider.load(&img.image_id, img.dims).map(drop))
        })?;
        println!("saliency: {} maps ({})", ann.len(), provider.source().id);
    }
    println!("ok");
    Ok(())
}

fn stats(cfg: &RunConfig) -> Result<(), Failure> {
    let formats = cfg.formats()?;
    let (ann, fix) = load_pair(cfg)?;
    check_image_ids(&ann, &fix)?;
    let opts = StatsOptions { smoothing_sigma_px: cfg.sigma_px.unwrap_or(0.0), ..StatsOptions::default() };
    let stats = dataset_stats(&ann, &fix, &opts)?;
    let mut w = Writer::new(cfg.out_dir())?;
    report::write_stats(&mut w, &stats, formats)?;
    write_run_config(&mut w, cfg)?;
    println!(
        "images={} objects={} fixations={} small_object_share={} mean_objects={} median_objects={}",
        stats.images.len(),
        stats.objects.len(),
        stats.total_fixations,
        num(stats.small_object_share),
        num(stats.mean_objects_per_image),
        num(stats.median_objects_per_image)
    );
    Ok(())
}

fn rings(cfg: &RunConfig) -> Result<(), Failure> {
    let obj_cfg = cfg.object_config()?;
    let provider = cfg.provider()?;
    let formats = cfg.formats()?;
    let (ann, fix) = load_pair(cfg)?;
    let rings = ring_profiles(&ann, &fix, &obj_cfg, provider.as_ref())?;
    let mut w = Writer::new(cfg.out_dir())?;
    report::write_rings(&mut w, &rings, &obj_cfg, formats)?;
    write_run_config(&mut w, cfg)?;
    let summary = report::ring_summary(&rings);
    println!("objects={} with_fixations={}", rings.len(), summary.objects_with_fixations);
    Ok(())
}

fn objmap(cfg: &RunConfig) -> Result<(), Failure> {
    let ann = load_annotations(cfg.require(&cfg.annotations, "annotations")?)?;
    let obj_cfg = cfg.object_config()?;
    let format: MapFormat = cfg.map_format.unwrap_or(MapFormatArg::Smap).into();
    let maps = with_pool(|| {
        use rayon::prelude::*;
        ann.par_iter()
            .filter(|img| {
                let keep = !img.objects.is_empty();
                if !keep {
                    log::warn!("{}: no annotated objects, no map written", img.image_id);
                }
                keep
            })
            .map(|img| {
                build_object_map(img, &obj_cfg)
                    .map(|m| (img.image_id.as_str(), m))
                    .map_err(|e| e.in_image(&img.image_id))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut w = Writer::new(cfg.out_dir())?;
    for (id, m) in &maps {
        w.map(id, format, m)?;
    }
    println!("wrote {} object maps", maps.len());
    Ok(())
}

fn saliency(cfg: &RunConfig) -> Result<(), Failure> {
    let image_dir = cfg.require(&cfg.image_dir, "image-dir")?;
    let format: MapFormat = cfg.map_format.unwrap_or(MapFormatArg::Smap).into();
    let jobs: Vec<(String, PathBuf)> = match &cfg.annotations {
        Some(path) => load_annotations(path)?
            .into_iter()
            .map(|img| {
                let file = find_image(image_dir, &img.image_id).ok_or_else(|| Error::MissingSaliency {
                    image_id: img.image_id.clone(),
                    path: image_dir.join(format!("{}.png", img.image_id)),
                })?;
                Ok((img.image_id, file))
            })
            .collect::<Result<_, Error>>()?,
        None => {
            let entries = std::fs::read_dir(image_dir).map_err(|e| Error::io(image_dir, e))?;
            let mut jobs = Vec::new();
            for entry in entries {
                let path = entry.map_err(|e| Error::io(image_dir, e))?.path();
                let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
                if let (true, Some(stem)) = (IMAGE_EXTENSIONS.contains(&ext), path.file_stem().and_then(|s| s.to_str()))
                {
                    jobs.push((stem.to_string(), path.clone()));
                }
            }
            jobs.sort();
            jobs.dedup_by(|a, b| a.0 == b.0);
            jobs
        }
    };
    let maps = with_pool(|| {
        use rayon::prelude::*;
        jobs.par_iter()
            .map(|(id, path)| -> Result<_, Error> {
                let out = builtin_saliency(&load_rgb(path)?)?;
                if out.uniform_fallback {
                    log::warn!("{id}: image has no contrast, writing a uniform map");
                }
                Ok((id.as_str(), out.map))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut w = Writer::new(cfg.out_dir())?;
    for (id, m) in &maps {
        w.map(id, format, m)?;
    }
    println!("wrote {} saliency maps", maps.len());
    Ok(())
}

fn sweep_config(obj_cfg: &ObjectMapConfig, provider: &SaliencyProvider) -> SweepConfig {
    SweepConfig {
        scheme: obj_cfg.scheme,
        region_mode: obj_cfg.region_mode,
        k: obj_cfg.k,
        saliency_source: provider.source().id,
    }
}

fn sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let obj_cfg = cfg.object_config()?;
    let provider = cfg.require_provider()?;
    let betas = cfg.betas()?;
    let formats = cfg.formats()?;
    let (ann, fix) = load_pair(cfg)?;
    let inputs = prepare_inputs(&ann, &fix, &provider, &obj_cfg)?;
    let result = sweep_inputs(&inputs, &betas, sweep_config(&obj_cfg, &provider))?;
    let mut w = Writer::new(cfg.out_dir())?;
    report::write_sweep(&mut w, &result, formats)?;
    write_run_config(&mut w, cfg)?;
    println!(
        "images={} beta_opt={} best_mean_nss={}",
        result.image_ids.len(),
        num(result.beta_opt),
        num(result.best_mean_nss)
    );
    Ok(())
}

fn compare(cfg: &RunConfig) -> Result<(), Failure> {
    let obj_cfg = cfg.object_config()?;
    let provider = cfg.require_provider()?;
    let formats = cfg.formats()?;
    let (ann, fix) = load_pair(cfg)?;
    let inputs = prepare_inputs(&ann, &fix, &provider, &obj_cfg)?;
    let beta = match cfg.beta {
        Some(b) if (0.0..=1.0).contains(&b) => b,
        Some(b) => return Err(Failure::Usage(format!("--beta must lie in [0, 1], got {b}"))),
        None => sweep_inputs(&inputs, &cfg.betas()?, sweep_config(&obj_cfg, &provider))?.beta_opt,
    };
    let scores = model_scores(&inputs, beta)?;
    let comparisons = standard_comparisons(&scores)?;
    let mut w = Writer::new(cfg.out_dir())?;
    report::write_comparison(&mut w, &scores, &comparisons, &obj_cfg, formats)?;
    write_run_config(&mut w, cfg)?;
    for (name, c) in &comparisons {
        println!(
            "{name}: win_rate={} t={} p={} n={}",
            num(c.win_rate_a_over_b),
            num(c.test.t_statistic),
            num(c.test.p_value),
            c.n
        );
    }
    Ok(())
}
