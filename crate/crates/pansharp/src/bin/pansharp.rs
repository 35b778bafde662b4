//! Command-line front end: scene degradation, fusion, and grid experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pansharp::adjust::{AdjustmentMode, MatchScale, PanMatching, DEFAULT_BINS};
use pansharp::experiment::{run_experiment, ExperimentConfig, ModeSpec, WaldScene};
use pansharp::fusion::{default_epsilon, run_workflow, FusionConfig, FusionMethod, WeightSource};
use pansharp::io::{import_pgm, read_image, write_image};
use pansharp::quality::rmse_image;
use pansharp::raster::{MultibandImage, Raster, SpectralWeights};
use pansharp::resample::{degrade_wald, FilterSpec};
use pansharp::synth::{generate_scene, SceneParams};

#[derive(Parser)]
#[command(name = "pansharp", version, about = "Pansharpening toolkit with model-based pan correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a scene's resolution so the original MS becomes the reference
    Degrade(DegradeArgs),
    /// Fuse an MS/Pan pair into a high-resolution MS image
    Fuse(FuseArgs),
    /// Run a grid of correction modes and fusion methods, emitting CSV tables
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct FilterFlags {
    /// Low-pass filter kind: butterworth or boxcar
    #[arg(long, default_value = "butterworth")]
    filter_kind: String,
    /// Butterworth cutoff in cycles/sample (default 0.5/ratio)
    #[arg(long)]
    cutoff: Option<f64>,
    /// Butterworth order
    #[arg(long, default_value_t = 5)]
    filter_order: u32,
}

impl FilterFlags {
    fn build(&self, ratio: u32) -> Result<FilterSpec, Failure> {
        match self.filter_kind.as_str() {
            "butterworth" => {
                let cutoff = self.cutoff.unwrap_or(0.5 / ratio.max(1) as f64);
                FilterSpec::butterworth(cutoff, self.filter_order, ratio).map_err(usage)
            }
            "boxcar" => FilterSpec::boxcar(ratio).map_err(usage),
            other => Err(Failure::Usage(format!("unknown filter kind {other:?}"))),
        }
    }
}

#[derive(Args)]
struct DegradeArgs {
    /// Multispectral image (JSON header / .raw pair, or .pgm)
    #[arg(long)]
    ms: PathBuf,
    /// Panchromatic image
    #[arg(long)]
    pan: PathBuf,
    /// MS degradation factor; the Pan band is degraded onto the original MS grid
    #[arg(long, default_value_t = 2)]
    ratio: u32,
    #[command(flatten)]
    filter: FilterFlags,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FuseArgs {
    #[arg(long)]
    ms: PathBuf,
    #[arg(long)]
    pan: PathBuf,
    /// Fusion method: cs_a, cs_m, hpf_a, hpf_m or msi
    #[arg(long, default_value = "cs_m")]
    method: String,
    /// Pan histogram matching before fusion: none, full or simple
    #[arg(long, default_value = "none")]
    phm: String,
    /// Scale of the matching target intensity: low or high
    #[arg(long, default_value = "low")]
    phm_scale: String,
    /// Model-based pan correction (default on)
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "no_pc")]
    pc: bool,
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "pc")]
    no_pc: bool,
    /// MS histogram matching after fusion (default on)
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "no_mhm")]
    mhm: bool,
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "mhm")]
    no_mhm: bool,
    /// JSON file with provider weights (array of K values in [0,1]); defaults to equal weights
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Weights for the high-resolution intensity: provider, estimated_low or estimated_high
    #[arg(long, default_value = "estimated_low")]
    weight_source: String,
    /// MS-to-Pan resolution ratio (inferred from the images when omitted)
    #[arg(long)]
    ratio: Option<u32>,
    #[command(flatten)]
    filter: FilterFlags,
    /// Quantile resolution for full histogram matching
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Safe-divide floor (default 1e-6 of the pan dynamic range)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Inject the multiplicative detail as an additive ratio offset (compatibility)
    #[arg(long, action = ArgAction::SetTrue)]
    ratio_offset: bool,
    /// Reference image for an RMSE report
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment description file; flags override its fields
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Original full-resolution MS image (omit for a synthetic scene)
    #[arg(long)]
    ms: Option<PathBuf>,
    /// Original full-resolution Pan image (omit for a synthetic scene)
    #[arg(long)]
    pan: Option<PathBuf>,
    /// Working MS-to-Pan ratio after degradation
    #[arg(long)]
    ratio: Option<u32>,
    /// Synthetic pan grid size
    #[arg(long)]
    size: Option<usize>,
    /// Synthetic band count
    #[arg(long)]
    bands: Option<usize>,
    /// Seed for synthetic scene generation
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated mode tokens, e.g. "before,pc+mhm,phm-full-low+pc+mhm"
    #[arg(long)]
    modes: Option<String>,
    /// Comma-separated methods, e.g. "msi,cs_a,cs_m,hpf_a,hpf_m"
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    filter_order: Option<u32>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// JSON file with provider weights for real scenes
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Optional fields mirroring the experiment flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSpecFile {
    ms: Option<PathBuf>,
    pan: Option<PathBuf>,
    ratio: Option<u32>,
    size: Option<usize>,
    bands: Option<usize>,
    seed: Option<u64>,
    modes: Option<Vec<String>>,
    methods: Option<Vec<String>>,
    cutoff: Option<f64>,
    filter_order: Option<u32>,
    bins: Option<usize>,
    epsilon: Option<f64>,
    weights: Option<PathBuf>,
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct DegradeProvenance {
    ms: String,
    pan: String,
    ms_ratio: u32,
    pan_ratio: u32,
    filter_kind: String,
    filter_order: u32,
    ms_cutoff: Option<f64>,
    pan_cutoff: Option<f64>,
}

enum Failure {
    Usage(String),
    Run(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn run(e: impl ToString) -> Failure {
    Failure::Run(e.to_string())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PANSHARP_THREADS") {
        if let Ok(n) = threads.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Degrade(args) => cmd_degrade(args),
        Command::Fuse(args) => cmd_fuse(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Resolves an image argument: `.pgm` imports directly, anything else names a
/// JSON header (with or without the extension) next to a `.raw` payload.
fn load_image(path: &Path) -> Result<MultibandImage, Failure> {
    if path.extension().is_some_and(|e| e == "pgm") {
        let r = import_pgm(path).map_err(run)?;
        return MultibandImage::new(vec![r]).map_err(run);
    }
    let (header, data) = header_data_paths(path);
    read_image(&header, &data).map_err(run)
}

fn header_data_paths(path: &Path) -> (PathBuf, PathBuf) {
    if path.extension().is_some_and(|e| e == "json") {
        (path.to_path_buf(), path.with_extension("raw"))
    } else {
        (path.with_extension("json"), path.with_extension("raw"))
    }
}

fn load_pan(path: &Path) -> Result<Raster, Failure> {
    let img = load_image(path)?;
    if img.band_count() != 1 {
        return Err(Failure::Usage(format!(
            "panchromatic image must have exactly 1 band, {} has {}",
            path.display(),
            img.band_count()
        )));
    }
    Ok(img.into_bands().remove(0))
}

fn save_image(img: &MultibandImage, dir: &Path, stem: &str) -> Result<(), Failure> {
    let header = dir.join(format!("{stem}.json"));
    let data = dir.join(format!("{stem}.raw"));
    write_image(img, &header, &data, None).map_err(run)
}

fn ensure_out_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| run(format!("cannot create {}: {e}", dir.display())))
}

fn load_weights(path: &Path, expected: usize) -> Result<SpectralWeights, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read weights file {}: {e}", path.display())))?;
    let values: Vec<f64> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("weights file {}: {e}", path.display())))?;
    if values.len() != expected {
        return Err(Failure::Usage(format!(
            "weights file {} has {} entries, expected {expected}",
            path.display(),
            values.len()
        )));
    }
    SpectralWeights::new(values).map_err(usage)
}

/// Integer size ratio between a pan image and an MS image.
fn infer_ratio(ms: &MultibandImage, pan: &Raster) -> Result<u32, Failure> {
    if pan.width() % ms.width() != 0
        || pan.height() % ms.height() != 0
        || pan.width() / ms.width() != pan.height() / ms.height()
    {
        return Err(Failure::Usage(format!(
            "pan size {}x{} is not an integer multiple of MS size {}x{}",
            pan.width(),
            pan.height(),
            ms.width(),
            ms.height()
        )));
    }
    Ok((pan.width() / ms.width()) as u32)
}

fn cmd_degrade(args: DegradeArgs) -> Result<(), Failure> {
    if args.ratio == 0 {
        return Err(Failure::Usage("--ratio must be positive".to_string()));
    }
    let ms = load_image(&args.ms)?;
    let pan = load_pan(&args.pan)?;
    let pan_ratio = infer_ratio(&ms, &pan)?;

    let spec_ms = args.filter.build(args.ratio)?;
    // The pan filter reuses the flags but with the full original ratio, so
    // the degraded pan lands exactly on the original MS grid.
    let pan_flags = FilterFlags {
        filter_kind: args.filter.filter_kind.clone(),
        cutoff: args.filter.cutoff.map(|c| (c * args.ratio as f64 / pan_ratio as f64).min(0.5)),
        filter_order: args.filter.filter_order,
    };
    let spec_pan = pan_flags.build(pan_ratio)?;

    let (ms_lr, pan_lr) = degrade_wald(&ms, &pan, &spec_ms, &spec_pan).map_err(run)?;

    ensure_out_dir(&args.out)?;
    save_image(&ms_lr, &args.out, "ms_lr")?;
    save_image(
        &MultibandImage::new(vec![pan_lr]).map_err(run)?,
        &args.out,
        "pan_lr",
    )?;

    let provenance = DegradeProvenance {
        ms: args.ms.display().to_string(),
        pan: args.pan.display().to_string(),
        ms_ratio: args.ratio,
        pan_ratio,
        filter_kind: args.filter.filter_kind.clone(),
        filter_order: args.filter.filter_order,
        ms_cutoff: args.filter.cutoff.or(Some(0.5 / args.ratio as f64)),
        pan_cutoff: pan_flags.cutoff.or(Some(0.5 / pan_ratio as f64)),
    };
    let mut text = serde_json::to_string_pretty(&provenance).expect("provenance serializes");
    text.push('\n');
    fs::write(args.out.join("degrade.json"), text)
        .map_err(|e| run(format!("cannot write provenance: {e}")))?;
    Ok(())
}

fn parse_adjustment(args: &FuseArgs) -> Result<AdjustmentMode, Failure> {
    let phm = match args.phm.as_str() {
        "none" => PanMatching::None,
        "full" => PanMatching::Full,
        "simple" => PanMatching::Simple,
        other => return Err(Failure::Usage(format!("unknown --phm value {other:?}"))),
    };
    let phm_scale = match args.phm_scale.as_str() {
        "low" => MatchScale::Low,
        "high" => MatchScale::High,
        other => return Err(Failure::Usage(format!("unknown --phm-scale value {other:?}"))),
    };
    let pc = args.pc || !args.no_pc;
    Ok(AdjustmentMode { phm, phm_scale, pc })
}

fn cmd_fuse(args: FuseArgs) -> Result<(), Failure> {
    let method = FusionMethod::parse(&args.method)
        .ok_or_else(|| Failure::Usage(format!("unknown --method value {:?}", args.method)))?;
    let weight_source = WeightSource::parse(&args.weight_source).ok_or_else(|| {
        Failure::Usage(format!("unknown --weight-source value {:?}", args.weight_source))
    })?;

    let ms = load_image(&args.ms)?;
    let pan = load_pan(&args.pan)?;
    let inferred = infer_ratio(&ms, &pan)?;
    let ratio = match args.ratio {
        Some(r) if r != inferred => {
            return Err(Failure::Usage(format!(
                "--ratio {r} does not match the image sizes (inferred {inferred})"
            )))
        }
        _ => inferred,
    };

    let adjustment = parse_adjustment(&args)?;
    let mhm = args.mhm || !args.no_mhm;
    if method == FusionMethod::Msi
        && (adjustment.pc || adjustment.phm != PanMatching::None || mhm)
    {
        eprintln!("warning: msi is plain interpolation; correction flags are ignored");
    }

    let w0 = match &args.weights {
        Some(path) => load_weights(path, ms.band_count())?,
        None => SpectralWeights::uniform(ms.band_count()).map_err(run)?,
    };

    let config = FusionConfig {
        method,
        adjustment,
        weight_source,
        mhm,
        filter: args.filter.build(ratio)?,
        epsilon: args.epsilon.unwrap_or_else(|| default_epsilon(&pan)),
        bins: args.bins,
        ratio_as_offset: args.ratio_offset,
    };
    let (fused, report) = run_workflow(&ms, &pan, &config, &w0).map_err(run)?;

    let rmse = match &args.reference {
        Some(path) => {
            let reference = load_image(path)?;
            Some(rmse_image(&fused, &reference).map_err(run)?)
        }
        None => None,
    };

    ensure_out_dir(&args.out)?;
    save_image(&fused, &args.out, "fused")?;
    let csv = pansharp::experiment::workflow_report_csv(&report, rmse.as_ref());
    fs::write(args.out.join("report.csv"), csv)
        .map_err(|e| run(format!("cannot write report: {e}")))?;
    Ok(())
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let file: ExperimentSpecFile = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read spec {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("spec {}: {e}", path.display())))?
        }
        None => ExperimentSpecFile::default(),
    };

    let ms_path = args.ms.or(file.ms);
    let pan_path = args.pan.or(file.pan);
    let ratio = args.ratio.or(file.ratio).unwrap_or(2);
    let size = args.size.or(file.size).unwrap_or(128);
    let bands = args.bands.or(file.bands).unwrap_or(4);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let bins = args.bins.or(file.bins).unwrap_or(DEFAULT_BINS);
    let out = args
        .out
        .or(file.out)
        .ok_or_else(|| Failure::Usage("--out is required".to_string()))?;
    if ratio == 0 {
        return Err(Failure::Usage("--ratio must be positive".to_string()));
    }

    let mode_tokens: Vec<String> = match (&args.modes, &file.modes) {
        (Some(s), _) => split_list(s),
        (None, Some(list)) => list.clone(),
        (None, None) => vec![
            "before".into(),
            "before+mhm".into(),
            "pc+mhm".into(),
            "phm-full-low+pc+mhm".into(),
            "phm-full-high+pc+mhm".into(),
            "phm-simple-low+pc+mhm".into(),
            "phm-simple-high+pc+mhm".into(),
        ],
    };
    if mode_tokens.is_empty() {
        return Err(Failure::Usage("mode list is empty".to_string()));
    }
    let modes = mode_tokens
        .iter()
        .map(|t| ModeSpec::parse(t).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;

    let method_tokens: Vec<String> = match (&args.methods, &file.methods) {
        (Some(s), _) => split_list(s),
        (None, Some(list)) => list.clone(),
        (None, None) => vec![
            "msi".into(),
            "cs_a".into(),
            "cs_m".into(),
            "hpf_a".into(),
            "hpf_m".into(),
        ],
    };
    if method_tokens.is_empty() {
        return Err(Failure::Usage("method list is empty".to_string()));
    }
    let methods = method_tokens
        .iter()
        .map(|t| {
            FusionMethod::parse(t)
                .ok_or_else(|| Failure::Usage(format!("unknown method {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let filter_flags = FilterFlags {
        filter_kind: "butterworth".to_string(),
        cutoff: args.cutoff.or(file.cutoff),
        filter_order: args.filter_order.or(file.filter_order).unwrap_or(5),
    };
    let filter = filter_flags.build(ratio)?;
    let weights_path = args.weights.or(file.weights);

    let scene = match (ms_path, pan_path) {
        (Some(ms_path), Some(pan_path)) => {
            let ms = load_image(&ms_path)?;
            let pan = load_pan(&pan_path)?;
            let full_ratio = infer_ratio(&ms, &pan)?;
            let spec_pan = FilterSpec::butterworth(
                0.5 / full_ratio as f64,
                filter_flags.filter_order,
                full_ratio,
            )
            .map_err(usage)?;
            let (ms_lr, pan_lr) = degrade_wald(&ms, &pan, &filter, &spec_pan).map_err(run)?;
            let provider_weights = match &weights_path {
                Some(p) => load_weights(p, ms.band_count())?,
                None => SpectralWeights::uniform(ms.band_count()).map_err(run)?,
            };
            WaldScene {
                ms_ref: ms,
                ms_lr,
                pan_hr: pan_lr,
                provider_weights,
            }
        }
        (None, None) => {
            let s = generate_scene(&SceneParams {
                size,
                ratio,
                bands,
                seed,
                ..SceneParams::standard(seed)
            })
            .map_err(run)?;
            WaldScene {
                ms_ref: s.ms_ref,
                ms_lr: s.ms_lr,
                pan_hr: s.pan_hr,
                provider_weights: s.provider_weights,
            }
        }
        _ => {
            return Err(Failure::Usage(
                "--ms and --pan must be given together (or both omitted for a synthetic scene)"
                    .to_string(),
            ))
        }
    };

    let epsilon = args
        .epsilon
        .or(file.epsilon)
        .unwrap_or_else(|| default_epsilon(&scene.pan_hr));
    let cfg = ExperimentConfig {
        modes,
        methods,
        filter,
        epsilon,
        bins,
    };
    let output = run_experiment(&scene, &cfg).map_err(run)?;

    ensure_out_dir(&out)?;
    fs::write(out.join("pan_correction.csv"), &output.pan_correction_csv)
        .map_err(|e| run(format!("cannot write pan_correction.csv: {e}")))?;
    fs::write(out.join("method_comparison.csv"), &output.method_comparison_csv)
        .map_err(|e| run(format!("cannot write method_comparison.csv: {e}")))?;
    fs::write(out.join("per_band.csv"), &output.per_band_csv)
        .map_err(|e| run(format!("cannot write per_band.csv: {e}")))?;

    if !output.failures.is_empty() {
        for f in &output.failures {
            eprintln!("row failed: {f}");
        }
        return Err(Failure::Run(format!(
            "{} grid rows failed",
            output.failures.len()
        )));
    }
    Ok(())
}
