//! Pansharpening methods and the end-to-end fusion workflow.
//!
//! Component-substitution (CS) methods inject the difference or ratio between
//! the corrected panchromatic image and an intensity image computed from the
//! upsampled MS bands; high-pass-filter (HPF) methods use the difference or
//! ratio against a low-pass filtered version of the panchromatic image. Plain
//! multispectral interpolation (MSI) is the baseline every method has to beat.

use rayon::prelude::*;

use crate::adjust::{
    adjust_pan, estimate_weights, match_histogram_full, AdjustmentMode, MatchScale, PanMatching,
};
use crate::error::{Error, Result};
use crate::raster::{intensity, pixelwise_combine, MultibandImage, PixelOp, Raster, SpectralWeights};
use crate::resample::{lowpass, pan_to_low, upsample_image, FilterSpec};

/// Fusion method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionMethod {
    CsAdditive,
    CsMultiplicative,
    HpfAdditive,
    HpfMultiplicative,
    Msi,
}

impl FusionMethod {
    /// Short machine-friendly name used by the CLI and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            FusionMethod::CsAdditive => "cs_a",
            FusionMethod::CsMultiplicative => "cs_m",
            FusionMethod::HpfAdditive => "hpf_a",
            FusionMethod::HpfMultiplicative => "hpf_m",
            FusionMethod::Msi => "msi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cs_a" => Some(FusionMethod::CsAdditive),
            "cs_m" => Some(FusionMethod::CsMultiplicative),
            "hpf_a" => Some(FusionMethod::HpfAdditive),
            "hpf_m" => Some(FusionMethod::HpfMultiplicative),
            "msi" => Some(FusionMethod::Msi),
            _ => None,
        }
    }
}

/// How the panchromatic detail is injected into each band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetailModel {
    /// Band plus the detail difference.
    Additive,
    /// Band scaled by the detail ratio.
    Multiplicative,
    /// Band plus the detail ratio. Compatibility mode, off by default; kept
    /// because some formulations write the multiplicative model this way.
    RatioOffset,
}

/// Where the weights for the high-resolution intensity image come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSource {
    /// Data-provider weights as given.
    Provider,
    /// Weights estimated on the low-resolution grid (the pan-correction fit).
    EstimatedLow,
    /// Weights re-estimated against the corrected pan on the high-resolution
    /// grid, same box constraints.
    EstimatedHigh,
}

impl WeightSource {
    pub fn name(&self) -> &'static str {
        match self {
            WeightSource::Provider => "provider",
            WeightSource::EstimatedLow => "estimated_low",
            WeightSource::EstimatedHigh => "estimated_high",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "provider" => Some(WeightSource::Provider),
            "estimated_low" => Some(WeightSource::EstimatedLow),
            "estimated_high" => Some(WeightSource::EstimatedHigh),
            _ => None,
        }
    }
}

/// Everything [`run_workflow`] needs besides the images themselves.
#[derive(Debug, Clone)]
pub struct FusionConfig {
    pub method: FusionMethod,
    pub adjustment: AdjustmentMode,
    pub weight_source: WeightSource,
    /// Match fused bands back to the original MS histograms after fusion.
    pub mhm: bool,
    pub filter: FilterSpec,
    /// Safe-divide floor for the multiplicative models.
    pub epsilon: f64,
    /// Quantile resolution for all full histogram matching.
    pub bins: usize,
    /// Inject the multiplicative detail as an additive ratio offset.
    pub ratio_as_offset: bool,
}

impl FusionConfig {
    /// Recommended defaults: CS multiplicative with pan correction,
    /// low-resolution weight estimation and MS histogram matching.
    pub fn recommended(filter: FilterSpec, epsilon: f64) -> Self {
        Self {
            method: FusionMethod::CsMultiplicative,
            adjustment: AdjustmentMode::pc_only(),
            weight_source: WeightSource::EstimatedLow,
            mhm: true,
            filter,
            epsilon,
            bins: crate::adjust::DEFAULT_BINS,
            ratio_as_offset: false,
        }
    }
}

/// Safe-divide floor proportional to the panchromatic dynamic range.
pub fn default_epsilon(pan: &Raster) -> f64 {
    let (lo, hi) = pan.min_max();
    let range = hi - lo;
    if range > 0.0 {
        1e-6 * range
    } else {
        1e-6
    }
}

fn check_high_res_dims(ms_up: &MultibandImage, other: &Raster, what: &str) -> Result<()> {
    if ms_up.width() != other.width() || ms_up.height() != other.height() {
        return Err(Error::dims(
            format!("{}x{} ({what})", ms_up.width(), ms_up.height()),
            other.shape_string(),
        ));
    }
    Ok(())
}

fn inject(band: &Raster, detail: &Raster, model: DetailModel) -> Result<Raster> {
    match model {
        DetailModel::Additive | DetailModel::RatioOffset => {
            pixelwise_combine(band, detail, PixelOp::Add, 0.0)
        }
        DetailModel::Multiplicative => pixelwise_combine(band, detail, PixelOp::Multiply, 0.0),
    }
}

/// Component substitution: detail is the difference (additive) or safe ratio
/// (multiplicative) between the pan image and the intensity image.
pub fn fuse_cs(
    ms_up: &MultibandImage,
    pan: &Raster,
    intensity_hr: &Raster,
    model: DetailModel,
    epsilon: f64,
) -> Result<MultibandImage> {
    check_high_res_dims(ms_up, pan, "pan")?;
    check_high_res_dims(ms_up, intensity_hr, "intensity")?;
    let detail = match model {
        DetailModel::Additive => pixelwise_combine(pan, intensity_hr, PixelOp::Subtract, 0.0)?,
        DetailModel::Multiplicative | DetailModel::RatioOffset => {
            pixelwise_combine(pan, intensity_hr, PixelOp::SafeDivide, epsilon)?
        }
    };
    let bands = ms_up
        .bands()
        .par_iter()
        .map(|band| inject(band, &detail, model))
        .collect::<Result<Vec<_>>>()?;
    MultibandImage::new(bands)
}

/// High-pass filtering: detail is the difference or safe ratio between the
/// pan image and its low-pass filtered version on the same grid.
pub fn fuse_hpf(
    ms_up: &MultibandImage,
    pan: &Raster,
    pan_low: &Raster,
    model: DetailModel,
    epsilon: f64,
) -> Result<MultibandImage> {
    check_high_res_dims(ms_up, pan, "pan")?;
    check_high_res_dims(ms_up, pan_low, "low-passed pan")?;
    let detail = match model {
        DetailModel::Additive => pixelwise_combine(pan, pan_low, PixelOp::Subtract, 0.0)?,
        DetailModel::Multiplicative | DetailModel::RatioOffset => {
            pixelwise_combine(pan, pan_low, PixelOp::SafeDivide, epsilon)?
        }
    };
    let bands = ms_up
        .bands()
        .par_iter()
        .map(|band| inject(band, &detail, model))
        .collect::<Result<Vec<_>>>()?;
    MultibandImage::new(bands)
}

/// Baseline: plain per-band bicubic interpolation, no pan involvement.
pub fn fuse_msi(ms_lr: &MultibandImage, ratio: u32) -> Result<MultibandImage> {
    upsample_image(ms_lr, ratio)
}

/// Matches every fused band back to the histogram of the corresponding
/// original low-resolution band.
pub fn match_ms_after_fusion(
    fused: &MultibandImage,
    ms_lr: &MultibandImage,
    bins: usize,
) -> Result<MultibandImage> {
    if fused.band_count() != ms_lr.band_count() {
        return Err(Error::LengthMismatch {
            what: "band count",
            expected: ms_lr.band_count(),
            actual: fused.band_count(),
        });
    }
    let bands = fused
        .bands()
        .par_iter()
        .zip(ms_lr.bands().par_iter())
        .map(|(f, orig)| match_histogram_full(f, orig, bins))
        .collect::<Result<Vec<_>>>()?;
    MultibandImage::new(bands)
}

/// Row label in the style of the comparison tables, e.g.
/// `"PHM, full, low + PC + W_low"`.
pub fn mode_label(mode: &AdjustmentMode, weight_source: WeightSource, mhm: bool) -> String {
    let mut label = match mode.phm {
        PanMatching::None => String::new(),
        PanMatching::Full => match mode.phm_scale {
            MatchScale::Low => "PHM, full, low".to_string(),
            MatchScale::High => "PHM, full, high".to_string(),
        },
        PanMatching::Simple => match mode.phm_scale {
            MatchScale::Low => "PHM, simple, low".to_string(),
            MatchScale::High => "PHM, simple, high".to_string(),
        },
    };
    if mode.pc {
        if label.is_empty() {
            label.push_str("PC");
        } else {
            label.push_str(" + PC");
        }
    }
    if label.is_empty() {
        label.push_str("Before correction");
        if mhm {
            label.push_str(" + MHM");
        }
    }
    match weight_source {
        WeightSource::Provider => {}
        WeightSource::EstimatedLow => label.push_str(" + W_low"),
        WeightSource::EstimatedHigh => label.push_str(" + W_high"),
    }
    label
}

/// What [`run_workflow`] did: the weights it ended up using plus
/// low-resolution closeness diagnostics between intensity and pan before and
/// after correction.
#[derive(Debug, Clone)]
pub struct WorkflowReport {
    pub mode_label: String,
    pub method: FusionMethod,
    pub weight_source: WeightSource,
    pub weights_used: Vec<f64>,
    pub rmse_low_before: f64,
    pub rmse_low_after: f64,
}

/// Runs the whole pipeline: upsample, optional histogram matching and pan
/// correction, weight selection, fusion, optional MS histogram matching.
///
/// The MSI baseline ignores every correction flag.
pub fn run_workflow(
    ms_lr: &MultibandImage,
    pan_hr: &Raster,
    config: &FusionConfig,
    w0: &SpectralWeights,
) -> Result<(MultibandImage, WorkflowReport)> {
    if config.epsilon <= 0.0 || !config.epsilon.is_finite() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be positive and finite, got {}", config.epsilon),
        });
    }
    let ratio = config.filter.ratio() as usize;
    if pan_hr.width() != ms_lr.width() * ratio || pan_hr.height() != ms_lr.height() * ratio {
        return Err(Error::dims(
            format!("{}x{}", ms_lr.width() * ratio, ms_lr.height() * ratio),
            pan_hr.shape_string(),
        ));
    }

    if config.method == FusionMethod::Msi {
        let result = fuse_msi(ms_lr, config.filter.ratio())?;
        let i_lr = intensity(ms_lr, w0)?;
        let pan_lr = pan_to_low(pan_hr, &config.filter)?;
        let rmse = crate::quality::rmse_band(&i_lr, &pan_lr)?;
        return Ok((
            result,
            WorkflowReport {
                mode_label: "MSI".to_string(),
                method: FusionMethod::Msi,
                weight_source: WeightSource::Provider,
                weights_used: w0.values().to_vec(),
                rmse_low_before: rmse,
                rmse_low_after: rmse,
            },
        ));
    }

    let ms_up = upsample_image(ms_lr, config.filter.ratio())?;
    let adjusted = adjust_pan(
        pan_hr,
        ms_lr,
        config.adjustment,
        &config.filter,
        w0,
        config.bins,
    )?;

    let weights_used = match config.weight_source {
        WeightSource::Provider => w0.clone(),
        WeightSource::EstimatedLow => {
            if config.adjustment.pc {
                adjusted.weights.clone()
            } else {
                let pan_lr = pan_to_low(&adjusted.corrected_pan, &config.filter)?;
                estimate_weights(ms_lr, &pan_lr)?
            }
        }
        WeightSource::EstimatedHigh => estimate_weights(&ms_up, &adjusted.corrected_pan)?,
    };

    let model = |multiplicative: bool| -> DetailModel {
        if !multiplicative {
            DetailModel::Additive
        } else if config.ratio_as_offset {
            DetailModel::RatioOffset
        } else {
            DetailModel::Multiplicative
        }
    };

    let fused = match config.method {
        FusionMethod::CsAdditive | FusionMethod::CsMultiplicative => {
            let intensity_hr = intensity(&ms_up, &weights_used)?;
            fuse_cs(
                &ms_up,
                &adjusted.corrected_pan,
                &intensity_hr,
                model(config.method == FusionMethod::CsMultiplicative),
                config.epsilon,
            )?
        }
        FusionMethod::HpfAdditive | FusionMethod::HpfMultiplicative => {
            let pan_low = lowpass(&adjusted.corrected_pan, &config.filter)?;
            fuse_hpf(
                &ms_up,
                &adjusted.corrected_pan,
                &pan_low,
                model(config.method == FusionMethod::HpfMultiplicative),
                config.epsilon,
            )?
        }
        FusionMethod::Msi => unreachable!("handled above"),
    };

    let result = if config.mhm {
        match_ms_after_fusion(&fused, ms_lr, config.bins)?
    } else {
        fused
    };

    let i_lr = intensity(ms_lr, &weights_used)?;
    let rmse_low_before = crate::quality::rmse_band(&i_lr, &pan_to_low(pan_hr, &config.filter)?)?;
    let rmse_low_after = crate::quality::rmse_band(
        &i_lr,
        &pan_to_low(&adjusted.corrected_pan, &config.filter)?,
    )?;

    Ok((
        result,
        WorkflowReport {
            mode_label: mode_label(&config.adjustment, config.weight_source, config.mhm),
            method: config.method,
            weight_source: config.weight_source,
            weights_used: weights_used.values().to_vec(),
            rmse_low_before,
            rmse_low_after,
        },
    ))
}
