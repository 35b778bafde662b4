//! The reduced-resolution experiment harness: runs a grid of correction modes
//! and fusion methods against a reference image and lays the results out as
//! deterministic CSV tables.

use rayon::prelude::*;

use crate::adjust::{adjust_pan, AdjustmentMode, MatchScale, PanMatching};
use crate::error::{Error, Result};
use crate::fusion::{mode_label, run_workflow, FusionConfig, FusionMethod, WeightSource};
use crate::quality::{pan_intensity_rmse, rmse_band, rmse_image};
use crate::raster::{intensity, MultibandImage, Raster, SpectralWeights};
use crate::resample::{pan_to_low, FilterSpec};

/// One row of the mode grid: corrections, weight source and MS matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpec {
    pub adjustment: AdjustmentMode,
    pub weight_source: WeightSource,
    pub mhm: bool,
}

impl ModeSpec {
    pub fn label(&self) -> String {
        mode_label(&self.adjustment, self.weight_source, self.mhm)
    }

    /// Parses a compact mode token.
    ///
    /// Grammar: parts joined by `+`. The first part is one of `before`, `pc`,
    /// or `phm-{full|simple}-{low|high}`; later parts may add `pc`, `mhm` and
    /// a weight source (`w0`, `wlow`, `whigh`). Pan correction implies `wlow`
    /// unless a weight source is named.
    pub fn parse(token: &str) -> Result<ModeSpec> {
        let bad = |reason: String| Error::InvalidParameter {
            name: "mode",
            reason,
        };
        let mut phm = PanMatching::None;
        let mut phm_scale = MatchScale::Low;
        let mut pc = false;
        let mut mhm = false;
        let mut weights: Option<WeightSource> = None;

        for (i, part) in token.split('+').map(str::trim).enumerate() {
            match part {
                "before" if i == 0 => {}
                "pc" => pc = true,
                "mhm" => mhm = true,
                "w0" => weights = Some(WeightSource::Provider),
                "wlow" => weights = Some(WeightSource::EstimatedLow),
                "whigh" => weights = Some(WeightSource::EstimatedHigh),
                p if p.starts_with("phm-") && i == 0 => {
                    let mut it = p.split('-').skip(1);
                    phm = match it.next() {
                        Some("full") => PanMatching::Full,
                        Some("simple") => PanMatching::Simple,
                        other => {
                            return Err(bad(format!(
                                "unknown matching flavor {other:?} in {token:?}"
                            )))
                        }
                    };
                    phm_scale = match it.next() {
                        Some("low") => MatchScale::Low,
                        Some("high") => MatchScale::High,
                        other => {
                            return Err(bad(format!("unknown matching scale {other:?} in {token:?}")))
                        }
                    };
                }
                other => return Err(bad(format!("unknown mode part {other:?} in {token:?}"))),
            }
        }
        let weight_source = weights.unwrap_or(if pc {
            WeightSource::EstimatedLow
        } else {
            WeightSource::Provider
        });
        Ok(ModeSpec {
            adjustment: AdjustmentMode { phm, phm_scale, pc },
            weight_source,
            mhm,
        })
    }

    /// The default method-comparison grid: before-correction rows plus pan
    /// correction with every histogram-matching flavor.
    pub fn default_grid() -> Vec<ModeSpec> {
        [
            "before",
            "before+mhm",
            "pc+mhm",
            "phm-full-low+pc+mhm",
            "phm-full-high+pc+mhm",
            "phm-simple-low+pc+mhm",
            "phm-simple-high+pc+mhm",
        ]
        .iter()
        .map(|t| ModeSpec::parse(t).expect("default grid tokens parse"))
        .collect()
    }
}

/// Adjustment-only rows for the pan-correction influence table.
pub fn pan_correction_rows() -> Vec<AdjustmentMode> {
    let m = |phm, phm_scale, pc| AdjustmentMode {
        phm,
        phm_scale,
        pc,
    };
    vec![
        m(PanMatching::None, MatchScale::Low, false),
        m(PanMatching::Full, MatchScale::Low, false),
        m(PanMatching::Full, MatchScale::High, false),
        m(PanMatching::Simple, MatchScale::Low, false),
        m(PanMatching::Simple, MatchScale::High, false),
        m(PanMatching::None, MatchScale::Low, true),
        m(PanMatching::Full, MatchScale::Low, true),
        m(PanMatching::Simple, MatchScale::High, true),
    ]
}

/// Inputs for one experiment: the degraded pair plus the reference.
#[derive(Debug, Clone)]
pub struct WaldScene {
    pub ms_ref: MultibandImage,
    pub ms_lr: MultibandImage,
    pub pan_hr: Raster,
    pub provider_weights: SpectralWeights,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub modes: Vec<ModeSpec>,
    pub methods: Vec<FusionMethod>,
    pub filter: FilterSpec,
    pub epsilon: f64,
    pub bins: usize,
}

/// The three CSV tables plus any per-row failures.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// Influence of each correction mode on the pan/intensity closeness.
    pub pan_correction_csv: String,
    /// Mean fused RMSE per mode and method.
    pub method_comparison_csv: String,
    /// Per-band RMSE per method for the last mode of the grid.
    pub per_band_csv: String,
    pub failures: Vec<String>,
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

/// Correction influence table: RMSE between the intensity image and the
/// (corrected) pan at both resolutions, using the weights each row ends up
/// with.
type TableRow = (String, std::result::Result<(f64, f64), String>);

fn pan_correction_table(scene: &WaldScene, cfg: &ExperimentConfig) -> Result<(String, Vec<String>)> {
    let mut failures = Vec::new();
    let rows: Vec<TableRow> = pan_correction_rows()
        .par_iter()
        .map(|mode| {
            let label = mode_label(mode, WeightSource::Provider, false);
            let run = || -> Result<(f64, f64)> {
                let adjusted = adjust_pan(
                    &scene.pan_hr,
                    &scene.ms_lr,
                    *mode,
                    &cfg.filter,
                    &scene.provider_weights,
                    cfg.bins,
                )?;
                // Weights updated by the correction feed the intensity image.
                let high = pan_intensity_rmse(
                    &scene.ms_ref,
                    &adjusted.corrected_pan,
                    adjusted.weights.values(),
                )?;
                let i_lr = intensity(&scene.ms_lr, &adjusted.weights)?;
                let low = rmse_band(&i_lr, &pan_to_low(&adjusted.corrected_pan, &cfg.filter)?)?;
                Ok((high, low))
            };
            (label, run().map_err(|e| e.to_string()))
        })
        .collect();

    let mut csv = String::from("mode,rmse_intensity_pan_high,rmse_intensity_pan_low\n");
    for (label, outcome) in rows {
        match outcome {
            Ok((high, low)) => {
                csv.push_str(&format!("{},{},{}\n", csv_field(&label), fmt(high), fmt(low)));
            }
            Err(msg) => {
                failures.push(format!("pan-correction row {label}: {msg}"));
                csv.push_str(&format!("{},error,error\n", csv_field(&label)));
            }
        }
    }
    Ok((csv, failures))
}

fn fuse_and_score(
    scene: &WaldScene,
    cfg: &ExperimentConfig,
    mode: &ModeSpec,
    method: FusionMethod,
) -> Result<crate::quality::RmseReport> {
    let config = FusionConfig {
        method,
        adjustment: mode.adjustment,
        weight_source: mode.weight_source,
        mhm: mode.mhm,
        filter: cfg.filter,
        epsilon: cfg.epsilon,
        bins: cfg.bins,
        ratio_as_offset: false,
    };
    let (fused, report) = run_workflow(&scene.ms_lr, &scene.pan_hr, &config, &scene.provider_weights)?;
    let mut scored = rmse_image(&fused, &scene.ms_ref)?;
    if method != FusionMethod::Msi {
        let adjusted = adjust_pan(
            &scene.pan_hr,
            &scene.ms_lr,
            mode.adjustment,
            &cfg.filter,
            &scene.provider_weights,
            cfg.bins,
        )?;
        scored.pan_rmse = Some(pan_intensity_rmse(
            &scene.ms_ref,
            &adjusted.corrected_pan,
            &report.weights_used,
        )?);
    }
    Ok(scored)
}

/// Runs the full grid and assembles the tables. Row order is fixed by the
/// mode list, regardless of execution order.
pub fn run_experiment(scene: &WaldScene, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if cfg.modes.is_empty() {
        return Err(Error::InvalidParameter {
            name: "modes",
            reason: "mode list is empty".to_string(),
        });
    }
    if cfg.methods.is_empty() {
        return Err(Error::InvalidParameter {
            name: "methods",
            reason: "method list is empty".to_string(),
        });
    }

    let (pan_correction_csv, mut failures) = pan_correction_table(scene, cfg)?;

    // Method-comparison grid, parallel over rows with stable ordering.
    type Row = Vec<Option<std::result::Result<crate::quality::RmseReport, String>>>;
    let grid: Vec<Row> = cfg
        .modes
        .par_iter()
        .map(|mode| {
            cfg.methods
                .iter()
                .map(|&method| {
                    // Corrections are not applicable to plain interpolation;
                    // only the uncorrected row reports it.
                    if method == FusionMethod::Msi
                        && (mode.adjustment.pc
                            || mode.adjustment.phm != PanMatching::None
                            || mode.mhm)
                    {
                        return None;
                    }
                    Some(
                        fuse_and_score(scene, cfg, mode, method)
                            .map_err(|e| e.to_string()),
                    )
                })
                .collect()
        })
        .collect();

    let mut comparison = String::from("mode");
    for m in &cfg.methods {
        comparison.push(',');
        comparison.push_str(m.name());
    }
    comparison.push('\n');
    for (mode, row) in cfg.modes.iter().zip(&grid) {
        comparison.push_str(&csv_field(&mode.label()));
        for (method, cell) in cfg.methods.iter().zip(row) {
            comparison.push(',');
            match cell {
                None => comparison.push('-'),
                Some(Ok(report)) => comparison.push_str(&fmt(report.mean)),
                Some(Err(msg)) => {
                    failures.push(format!(
                        "mode {} method {}: {msg}",
                        mode.label(),
                        method.name()
                    ));
                    comparison.push_str("error");
                }
            }
        }
        comparison.push('\n');
    }

    // Per-band table for the final (most corrected) mode of the grid.
    let detail_row = grid.last().expect("non-empty checked above");
    let bands = scene.ms_ref.band_count();
    let mut per_band = String::from("band");
    for m in &cfg.methods {
        per_band.push(',');
        per_band.push_str(m.name());
    }
    per_band.push('\n');
    for b in 0..bands {
        per_band.push_str(&(b + 1).to_string());
        for cell in detail_row {
            per_band.push(',');
            match cell {
                Some(Ok(report)) => per_band.push_str(&fmt(report.per_band[b])),
                Some(Err(_)) => per_band.push_str("error"),
                None => per_band.push('-'),
            }
        }
        per_band.push('\n');
    }
    per_band.push_str("mean");
    for cell in detail_row {
        per_band.push(',');
        match cell {
            Some(Ok(report)) => per_band.push_str(&fmt(report.mean)),
            Some(Err(_)) => per_band.push_str("error"),
            None => per_band.push('-'),
        }
    }
    per_band.push('\n');
    // Pan-band closeness for the same mode, computed with each cell's
    // recorded weights.
    per_band.push_str("pan");
    for cell in detail_row {
        per_band.push(',');
        match cell {
            Some(Ok(report)) => match report.pan_rmse {
                Some(v) => per_band.push_str(&fmt(v)),
                None => per_band.push('-'),
            },
            Some(Err(_)) => per_band.push_str("error"),
            None => per_band.push('-'),
        }
    }
    per_band.push('\n');

    Ok(ExperimentOutput {
        pan_correction_csv,
        method_comparison_csv: comparison,
        per_band_csv: per_band,
        failures,
    })
}

/// Single-row CSV for one workflow run, shared by the fuse command.
pub fn workflow_report_csv(
    report: &crate::fusion::WorkflowReport,
    rmse: Option<&crate::quality::RmseReport>,
) -> String {
    let mut header = String::from("mode,method,weights,rmse_low_before,rmse_low_after");
    let mut row = format!(
        "{},{},{},{},{}",
        csv_field(&report.mode_label),
        report.method.name(),
        csv_field(&format!(
            "[{}]",
            report
                .weights_used
                .iter()
                .map(|w| format!("{w:.6}"))
                .collect::<Vec<_>>()
                .join(" ")
        )),
        fmt(report.rmse_low_before),
        fmt(report.rmse_low_after),
    );
    if let Some(r) = rmse {
        for (i, v) in r.per_band.iter().enumerate() {
            header.push_str(&format!(",band_{}", i + 1));
            row.push_str(&format!(",{}", fmt(*v)));
        }
        header.push_str(",mean");
        row.push_str(&format!(",{}", fmt(r.mean)));
    }
    format!("{header}\n{row}\n")
}
