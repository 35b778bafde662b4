//! Input image adjustment: histogram matching of the panchromatic band and
//! the model-based pan correction.
//!
//! The model-based correction assumes an energy balance between the weighted
//! multispectral bands and the panchromatic band, up to a residual "virtual
//! band" that accounts for what the panchromatic sensor sees outside the
//! weighted band sum. The weights are estimated by bounded least squares on
//! the low-resolution grid where both images exist, the virtual band is the
//! remaining residual there, and the high-resolution panchromatic image is
//! corrected by subtracting the interpolated virtual band.

use crate::bvls::{bvls_solve, default_kkt_tol, default_max_iters, BoundedLsqProblem};
use crate::error::{Error, Result};
use crate::raster::{intensity, pixelwise_combine, stats, MultibandImage, PixelOp, Raster, SpectralWeights};
use crate::resample::{pan_to_low, upsample_bicubic, upsample_image, FilterSpec};

/// Default quantile resolution for full histogram matching; matches common
/// 16-bit sensor depth.
pub const DEFAULT_BINS: usize = 65536;

/// Weights published by the data provider for the eight WorldView-2 bands,
/// normalized to the total energy of the panchromatic band. Useful as a
/// realistic default for eight-band imagery and as a fixture in tests.
pub const WORLDVIEW2_PROVIDER_WEIGHTS: [f64; 8] = [
    0.0074, 0.1106, 0.1787, 0.12076, 0.1987, 0.1363, 0.0959, 0.0002793,
];

/// Weights produced by pan correction (after full histogram matching) on a
/// WorldView-2 scene over Munich. Kept as a documentation fixture showing
/// the typical shape of an estimated weight vector; the scene itself is not
/// distributable, so these are not reproducible here.
pub const WORLDVIEW2_MUNICH_ESTIMATED_WEIGHTS: [f64; 8] = [
    0.180855, 0.0, 0.199144, 0.00496692, 0.305368, 0.0190767, 0.0742123, 0.0595428,
];

/// Histogram-matching flavor applied to the panchromatic band before fusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanMatching {
    None,
    /// Full CDF/quantile mapping.
    Full,
    /// First-order statistics only (mean and standard deviation).
    Simple,
}

/// Scale on which the matching target intensity is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchScale {
    /// Intensity of the original low-resolution MS image (preferred; avoids
    /// interpolation artifacts in the target).
    Low,
    /// Intensity of the bicubically upsampled MS image.
    High,
}

/// Which corrections to apply to the panchromatic band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjustmentMode {
    pub phm: PanMatching,
    /// Only meaningful when `phm != None`.
    pub phm_scale: MatchScale,
    /// Model-based pan correction on/off.
    pub pc: bool,
}

impl AdjustmentMode {
    /// No adjustment at all.
    pub fn none() -> Self {
        Self {
            phm: PanMatching::None,
            phm_scale: MatchScale::Low,
            pc: false,
        }
    }

    /// Model-based correction only.
    pub fn pc_only() -> Self {
        Self {
            phm: PanMatching::None,
            phm_scale: MatchScale::Low,
            pc: true,
        }
    }
}

/// Output of [`adjust_pan`]: the corrected panchromatic band together with
/// the estimated weights and both resolutions of the virtual band.
#[derive(Debug, Clone)]
pub struct PanCorrectionResult {
    pub corrected_pan: Raster,
    pub weights: SpectralWeights,
    pub virtual_low: Raster,
    pub virtual_high: Raster,
}

/// Matches mean and standard deviation of `src` to those of `target`.
pub fn match_histogram_simple(src: &Raster, target: &Raster) -> Result<Raster> {
    let s = stats(src);
    let t = stats(target);
    if s.std == 0.0 {
        return Err(Error::ZeroSpread);
    }
    let scale = t.std / s.std;
    src.map(|v| (v - s.mean) * scale + t.mean)
}

/// Full histogram matching through binned cumulative histograms.
///
/// `src` values are sent through the piecewise-linear empirical CDF of `src`
/// and back through the inverse CDF of `target`. The mapping is monotone
/// non-decreasing, works across images of different size, and is accurate to
/// about one quantization step `(max-min)/bins`.
pub fn match_histogram_full(src: &Raster, target: &Raster, bins: usize) -> Result<Raster> {
    if bins < 2 {
        return Err(Error::InvalidParameter {
            name: "bins",
            reason: format!("need at least 2 bins, got {bins}"),
        });
    }
    let (t_lo, t_hi) = target.min_max();
    if t_lo == t_hi {
        // Degenerate target: every source pixel maps to the single value.
        return Raster::filled(src.width(), src.height(), t_lo);
    }
    let (s_lo, s_hi) = src.min_max();
    let lo = s_lo.min(t_lo);
    let hi = s_hi.max(t_hi);
    let width = (hi - lo) / bins as f64;

    let bin_of = |v: f64| -> usize { (((v - lo) / width) as usize).min(bins - 1) };

    let mut src_hist = vec![0u64; bins];
    for &v in src.samples() {
        src_hist[bin_of(v)] += 1;
    }
    let mut tgt_hist = vec![0u64; bins];
    for &v in target.samples() {
        tgt_hist[bin_of(v)] += 1;
    }
    let mut tgt_cdf = vec![0u64; bins];
    let mut running = 0u64;
    for (c, &h) in tgt_cdf.iter_mut().zip(&tgt_hist) {
        running += h;
        *c = running;
    }
    let mut src_cdf = vec![0u64; bins];
    running = 0;
    for (c, &h) in src_cdf.iter_mut().zip(&src_hist) {
        running += h;
        *c = running;
    }
    let n_src = src.len() as f64;
    let n_tgt = target.len() as f64;

    // Inverse target CDF at a level in (0, 1], linearly interpolated inside
    // the first bin whose cumulative count reaches the level.
    let quantile = |level: f64| -> f64 {
        let want = level * n_tgt;
        let idx = tgt_cdf.partition_point(|&c| (c as f64) < want);
        let idx = idx.min(bins - 1);
        let below = if idx == 0 { 0 } else { tgt_cdf[idx - 1] } as f64;
        let count = tgt_cdf[idx] as f64 - below;
        let frac = if count > 0.0 {
            ((want - below) / count).clamp(0.0, 1.0)
        } else {
            1.0
        };
        lo + (idx as f64 + frac) * width
    };

    let out = src
        .samples()
        .iter()
        .map(|&v| {
            let b = bin_of(v);
            let below = if b == 0 { 0 } else { src_cdf[b - 1] } as f64;
            let inside = (src_hist[b] as f64) * (((v - (lo + b as f64 * width)) / width).clamp(0.0, 1.0));
            let level = ((below + inside) / n_src).clamp(0.0, 1.0);
            quantile(level.max(f64::MIN_POSITIVE))
        })
        .collect();
    Raster::new(src.width(), src.height(), out)
}

/// Estimates band weights so the weighted band sum best fits the
/// low-resolution panchromatic image, subject to `0 <= w_k <= 1`.
pub fn estimate_weights(ms_lr: &MultibandImage, pan_lr: &Raster) -> Result<SpectralWeights> {
    if ms_lr.width() != pan_lr.width() || ms_lr.height() != pan_lr.height() {
        return Err(Error::dims(
            format!("{}x{}", ms_lr.width(), ms_lr.height()),
            pan_lr.shape_string(),
        ));
    }
    let rows = pan_lr.len();
    let cols = ms_lr.band_count();
    let mut design = vec![0.0f64; rows * cols];
    for (k, band) in ms_lr.bands().iter().enumerate() {
        for (i, &s) in band.samples().iter().enumerate() {
            design[i * cols + k] = s;
        }
    }
    let problem = BoundedLsqProblem::unit_box(rows, cols, design, pan_lr.samples().to_vec())?;
    let sol = bvls_solve(&problem, default_kkt_tol(&problem), default_max_iters(cols))?;
    SpectralWeights::new(sol.weights)
}

/// Residual between the low-resolution panchromatic image and the weighted
/// band sum: the virtual band on the low-resolution grid.
pub fn compute_virtual_band(
    pan_lr: &Raster,
    ms_lr: &MultibandImage,
    weights: &SpectralWeights,
) -> Result<Raster> {
    let fit = intensity(ms_lr, weights)?;
    pixelwise_combine(pan_lr, &fit, PixelOp::Subtract, 0.0)
}

/// Upsamples the virtual band and subtracts it from the high-resolution
/// panchromatic image. Returns the corrected image and the upsampled band.
pub fn correct_pan(pan_hr: &Raster, v_lr: &Raster, ratio: u32) -> Result<(Raster, Raster)> {
    let expected_w = v_lr.width() * ratio as usize;
    let expected_h = v_lr.height() * ratio as usize;
    if pan_hr.width() != expected_w || pan_hr.height() != expected_h {
        return Err(Error::dims(
            format!("{expected_w}x{expected_h}"),
            pan_hr.shape_string(),
        ));
    }
    let virtual_high = upsample_bicubic(v_lr, ratio)?;
    let corrected = pixelwise_combine(pan_hr, &virtual_high, PixelOp::Subtract, 0.0)?;
    Ok((corrected, virtual_high))
}

/// Applies the selected corrections in order: histogram matching first, then
/// the model-based pan correction.
///
/// With `mode.pc == false` the returned weights are `w0` and both virtual
/// bands are zero; the corrected image is then just the (possibly matched)
/// input. `bins` controls the quantile resolution of full matching.
pub fn adjust_pan(
    pan_hr: &Raster,
    ms_lr: &MultibandImage,
    mode: AdjustmentMode,
    spec: &FilterSpec,
    w0: &SpectralWeights,
    bins: usize,
) -> Result<PanCorrectionResult> {
    let ratio = spec.ratio() as usize;
    if pan_hr.width() != ms_lr.width() * ratio || pan_hr.height() != ms_lr.height() * ratio {
        return Err(Error::dims(
            format!("{}x{}", ms_lr.width() * ratio, ms_lr.height() * ratio),
            pan_hr.shape_string(),
        ));
    }

    let matched = match mode.phm {
        PanMatching::None => pan_hr.clone(),
        flavor => {
            let target = match mode.phm_scale {
                MatchScale::Low => intensity(ms_lr, w0)?,
                MatchScale::High => intensity(&upsample_image(ms_lr, spec.ratio())?, w0)?,
            };
            match flavor {
                PanMatching::Full => match_histogram_full(pan_hr, &target, bins)?,
                PanMatching::Simple => match_histogram_simple(pan_hr, &target)?,
                PanMatching::None => unreachable!(),
            }
        }
    };

    if !mode.pc {
        return Ok(PanCorrectionResult {
            corrected_pan: matched,
            weights: w0.clone(),
            virtual_low: Raster::filled(ms_lr.width(), ms_lr.height(), 0.0)?,
            virtual_high: Raster::filled(pan_hr.width(), pan_hr.height(), 0.0)?,
        });
    }

    let pan_lr = pan_to_low(&matched, spec)?;
    let weights = estimate_weights(ms_lr, &pan_lr)?;
    let virtual_low = compute_virtual_band(&pan_lr, ms_lr, &weights)?;
    let (corrected_pan, virtual_high) = correct_pan(&matched, &virtual_low, spec.ratio())?;
    Ok(PanCorrectionResult {
        corrected_pan,
        weights,
        virtual_low,
        virtual_high,
    })
}
