//! C ABI for the pansharp library.
//!
//! Conventions: objects are opaque handles created and freed by this library;
//! every fallible call returns a [`PansharpStatus`] and writes its result
//! through out-pointers. On failure, [`pansharp_last_error_message`] returns
//! a description valid until the next failing call on the same thread.
//!
//! The matching C header is generated into `include/pansharp.h` at build
//! time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use pansharp::adjust::{adjust_pan, estimate_weights, AdjustmentMode, MatchScale, PanMatching};
use pansharp::error::Error;
use pansharp::fusion::{default_epsilon, run_workflow, FusionConfig, FusionMethod, WeightSource};
use pansharp::io::{import_pgm, read_image, write_image};
use pansharp::quality::rmse_image;
use pansharp::raster::{MultibandImage, Raster, SpectralWeights};
use pansharp::resample::{degrade_wald, FilterSpec};

/// Opaque single-band raster handle.
pub struct PansharpRaster {
    inner: Raster,
}

/// Opaque multiband image handle.
pub struct PansharpImage {
    inner: MultibandImage,
}

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PansharpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its documented domain.
    InvalidArgument = 2,
    /// Image shapes or vector lengths do not line up.
    DimensionMismatch = 3,
    /// File could not be read or written.
    IoError = 4,
    /// The bounded least-squares solver hit its iteration budget.
    IterationLimit = 5,
    /// Any other internal failure.
    Internal = 6,
}

/// Fusion method selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PansharpMethod {
    CsAdditive = 0,
    CsMultiplicative = 1,
    HpfAdditive = 2,
    HpfMultiplicative = 3,
    Msi = 4,
}

/// Histogram matching applied to the pan band before fusion.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PansharpPhm {
    None = 0,
    Full = 1,
    Simple = 2,
}

/// Scale of the matching target intensity.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PansharpScale {
    Low = 0,
    High = 1,
}

/// Source of the weights used for the high-resolution intensity image.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PansharpWeightSource {
    Provider = 0,
    EstimatedLow = 1,
    EstimatedHigh = 2,
}

/// Workflow options. Zero or negative `cutoff`, `epsilon` and `bins` select
/// library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PansharpOptions {
    pub method: PansharpMethod,
    pub phm: PansharpPhm,
    pub phm_scale: PansharpScale,
    pub pan_correction: bool,
    pub ms_matching: bool,
    pub weight_source: PansharpWeightSource,
    pub ratio: u32,
    pub filter_order: u32,
    pub cutoff: f64,
    pub epsilon: f64,
    pub bins: usize,
    pub ratio_as_offset: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(status: PansharpStatus, msg: impl AsRef<str>) -> PansharpStatus {
    set_error(msg.as_ref());
    status
}

fn status_of(err: &Error) -> PansharpStatus {
    match err {
        Error::DimensionMismatch { .. } | Error::LengthMismatch { .. } => {
            PansharpStatus::DimensionMismatch
        }
        Error::NonFinite { .. } | Error::InvalidParameter { .. } | Error::ZeroSpread => {
            PansharpStatus::InvalidArgument
        }
        Error::IterationLimit { .. } => PansharpStatus::IterationLimit,
        Error::Io { .. }
        | Error::Json { .. }
        | Error::PayloadSize { .. }
        | Error::PayloadTooLarge { .. }
        | Error::UnsupportedHeader { .. }
        | Error::InvalidPgm { .. } => PansharpStatus::IoError,
    }
}

fn from_error(err: Error) -> PansharpStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pansharp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, PansharpStatus> {
    if ptr.is_null() {
        return Err(fail(PansharpStatus::NullPointer, "null path"));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => Err(fail(PansharpStatus::InvalidArgument, "path is not UTF-8")),
    }
}

/// Builds a raster from row-major samples.
///
/// # Safety
/// `samples` must point to `len` readable doubles; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_raster_create(
    width: usize,
    height: usize,
    samples: *const f64,
    len: usize,
    out: *mut *mut PansharpRaster,
) -> PansharpStatus {
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let Some(data) = slice_arg(samples, len) else {
        return fail(PansharpStatus::NullPointer, "null sample pointer");
    };
    match Raster::new(width, height, data.to_vec()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PansharpRaster { inner }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Frees a raster handle. Null is ignored.
///
/// # Safety
/// `raster` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pansharp_raster_free(raster: *mut PansharpRaster) {
    if !raster.is_null() {
        drop(Box::from_raw(raster));
    }
}

/// Width in pixels; 0 for a null handle.
///
/// # Safety
/// `raster` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_raster_width(raster: *const PansharpRaster) -> usize {
    raster.as_ref().map_or(0, |r| r.inner.width())
}

/// Height in pixels; 0 for a null handle.
///
/// # Safety
/// `raster` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_raster_height(raster: *const PansharpRaster) -> usize {
    raster.as_ref().map_or(0, |r| r.inner.height())
}

/// Copies the row-major samples into a caller buffer of exactly
/// `width * height` doubles.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pansharp_raster_copy(
    raster: *const PansharpRaster,
    out: *mut f64,
    len: usize,
) -> PansharpStatus {
    let Some(r) = raster.as_ref() else {
        return fail(PansharpStatus::NullPointer, "null raster");
    };
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out buffer");
    }
    if len != r.inner.len() {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("buffer holds {len} samples, raster has {}", r.inner.len()),
        );
    }
    std::ptr::copy_nonoverlapping(r.inner.samples().as_ptr(), out, len);
    PansharpStatus::Ok
}

/// Builds a multiband image from band-sequential row-major samples.
///
/// # Safety
/// `samples` must point to `len == width * height * bands` readable doubles;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_create(
    width: usize,
    height: usize,
    bands: usize,
    samples: *const f64,
    len: usize,
    out: *mut *mut PansharpImage,
) -> PansharpStatus {
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let Some(data) = slice_arg(samples, len) else {
        return fail(PansharpStatus::NullPointer, "null sample pointer");
    };
    if bands == 0 || len != width * height * bands {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("{len} samples do not fill {width}x{height}x{bands}"),
        );
    }
    let band_len = width * height;
    let rasters: Result<Vec<Raster>, Error> = (0..bands)
        .map(|b| Raster::new(width, height, data[b * band_len..(b + 1) * band_len].to_vec()))
        .collect();
    match rasters.and_then(MultibandImage::new) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PansharpImage { inner }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Frees an image handle. Null is ignored.
///
/// # Safety
/// `image` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_free(image: *mut PansharpImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Width in pixels; 0 for a null handle.
///
/// # Safety
/// `image` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_width(image: *const PansharpImage) -> usize {
    image.as_ref().map_or(0, |i| i.inner.width())
}

/// Height in pixels; 0 for a null handle.
///
/// # Safety
/// `image` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_height(image: *const PansharpImage) -> usize {
    image.as_ref().map_or(0, |i| i.inner.height())
}

/// Number of bands; 0 for a null handle.
///
/// # Safety
/// `image` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_bands(image: *const PansharpImage) -> usize {
    image.as_ref().map_or(0, |i| i.inner.band_count())
}

/// Copies one band's row-major samples into a caller buffer.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_band_copy(
    image: *const PansharpImage,
    band: usize,
    out: *mut f64,
    len: usize,
) -> PansharpStatus {
    let Some(img) = image.as_ref() else {
        return fail(PansharpStatus::NullPointer, "null image");
    };
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out buffer");
    }
    if band >= img.inner.band_count() {
        return fail(
            PansharpStatus::InvalidArgument,
            format!("band {band} out of range 0..{}", img.inner.band_count()),
        );
    }
    let samples = img.inner.band(band).samples();
    if len != samples.len() {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("buffer holds {len} samples, band has {}", samples.len()),
        );
    }
    std::ptr::copy_nonoverlapping(samples.as_ptr(), out, len);
    PansharpStatus::Ok
}

/// Reads an image from a JSON header and raw payload pair.
///
/// # Safety
/// Paths must be valid null-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_read(
    header_path: *const c_char,
    data_path: *const c_char,
    out: *mut *mut PansharpImage,
) -> PansharpStatus {
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let header = match path_arg(header_path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let data = match path_arg(data_path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match read_image(header, data) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PansharpImage { inner }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Writes an image as a JSON header and raw payload pair.
///
/// # Safety
/// Paths must be valid null-terminated strings; `image` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pansharp_image_write(
    image: *const PansharpImage,
    header_path: *const c_char,
    data_path: *const c_char,
) -> PansharpStatus {
    let Some(img) = image.as_ref() else {
        return fail(PansharpStatus::NullPointer, "null image");
    };
    let header = match path_arg(header_path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let data = match path_arg(data_path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match write_image(&img.inner, header, data, None) {
        Ok(()) => PansharpStatus::Ok,
        Err(e) => from_error(e),
    }
}

/// Imports a binary PGM file as a single-band raster.
///
/// # Safety
/// `path` must be a valid null-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pansharp_pgm_import(
    path: *const c_char,
    out: *mut *mut PansharpRaster,
) -> PansharpStatus {
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match import_pgm(path) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PansharpRaster { inner }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

fn weights_from(w0: Option<&[f64]>, bands: usize) -> Result<SpectralWeights, Error> {
    match w0 {
        Some(values) => SpectralWeights::new(values.to_vec()),
        None => SpectralWeights::uniform(bands),
    }
}

fn filter_from(options: &PansharpOptions) -> Result<FilterSpec, Error> {
    let cutoff = if options.cutoff > 0.0 {
        options.cutoff
    } else {
        0.5 / options.ratio.max(1) as f64
    };
    FilterSpec::butterworth(cutoff, options.filter_order.max(1), options.ratio)
}

fn config_from(options: &PansharpOptions, pan: &Raster) -> Result<FusionConfig, Error> {
    let method = match options.method {
        PansharpMethod::CsAdditive => FusionMethod::CsAdditive,
        PansharpMethod::CsMultiplicative => FusionMethod::CsMultiplicative,
        PansharpMethod::HpfAdditive => FusionMethod::HpfAdditive,
        PansharpMethod::HpfMultiplicative => FusionMethod::HpfMultiplicative,
        PansharpMethod::Msi => FusionMethod::Msi,
    };
    let adjustment = AdjustmentMode {
        phm: match options.phm {
            PansharpPhm::None => PanMatching::None,
            PansharpPhm::Full => PanMatching::Full,
            PansharpPhm::Simple => PanMatching::Simple,
        },
        phm_scale: match options.phm_scale {
            PansharpScale::Low => MatchScale::Low,
            PansharpScale::High => MatchScale::High,
        },
        pc: options.pan_correction,
    };
    Ok(FusionConfig {
        method,
        adjustment,
        weight_source: match options.weight_source {
            PansharpWeightSource::Provider => WeightSource::Provider,
            PansharpWeightSource::EstimatedLow => WeightSource::EstimatedLow,
            PansharpWeightSource::EstimatedHigh => WeightSource::EstimatedHigh,
        },
        mhm: options.ms_matching,
        filter: filter_from(options)?,
        epsilon: if options.epsilon > 0.0 {
            options.epsilon
        } else {
            default_epsilon(pan)
        },
        bins: if options.bins >= 2 { options.bins } else { pansharp::adjust::DEFAULT_BINS },
        ratio_as_offset: options.ratio_as_offset,
    })
}

/// Estimates box-constrained band weights so the weighted band sum best
/// matches the pan image on the same grid. `out` receives `len` weights,
/// which must equal the band count.
///
/// # Safety
/// Handles must be live; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pansharp_estimate_weights(
    ms: *const PansharpImage,
    pan: *const PansharpRaster,
    out: *mut f64,
    len: usize,
) -> PansharpStatus {
    let (Some(ms), Some(pan)) = (ms.as_ref(), pan.as_ref()) else {
        return fail(PansharpStatus::NullPointer, "null image argument");
    };
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out buffer");
    }
    if len != ms.inner.band_count() {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("buffer holds {len} weights, image has {} bands", ms.inner.band_count()),
        );
    }
    match estimate_weights(&ms.inner, &pan.inner) {
        Ok(w) => {
            std::ptr::copy_nonoverlapping(w.values().as_ptr(), out, len);
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Applies histogram matching and/or model-based correction to the pan band.
/// `w0` may be null for equal weights. On success `out_pan` receives the
/// corrected raster and, when `out_weights` is non-null, the `w0_len` weights
/// actually used are written there.
///
/// # Safety
/// Handles must be live; any non-null buffer must have the stated length.
#[no_mangle]
pub unsafe extern "C" fn pansharp_adjust_pan(
    pan: *const PansharpRaster,
    ms_lr: *const PansharpImage,
    options: *const PansharpOptions,
    w0: *const f64,
    w0_len: usize,
    out_pan: *mut *mut PansharpRaster,
    out_weights: *mut f64,
) -> PansharpStatus {
    let (Some(pan), Some(ms), Some(options)) = (pan.as_ref(), ms_lr.as_ref(), options.as_ref())
    else {
        return fail(PansharpStatus::NullPointer, "null argument");
    };
    if out_pan.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let bands = ms.inner.band_count();
    if (!w0.is_null() || !out_weights.is_null()) && w0_len != bands {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("weight length {w0_len} does not match {bands} bands"),
        );
    }
    let weights = match weights_from(slice_arg(w0, w0_len), bands) {
        Ok(w) => w,
        Err(e) => return from_error(e),
    };
    let filter = match filter_from(options) {
        Ok(f) => f,
        Err(e) => return from_error(e),
    };
    let mode = AdjustmentMode {
        phm: match options.phm {
            PansharpPhm::None => PanMatching::None,
            PansharpPhm::Full => PanMatching::Full,
            PansharpPhm::Simple => PanMatching::Simple,
        },
        phm_scale: match options.phm_scale {
            PansharpScale::Low => MatchScale::Low,
            PansharpScale::High => MatchScale::High,
        },
        pc: options.pan_correction,
    };
    let bins = if options.bins >= 2 { options.bins } else { pansharp::adjust::DEFAULT_BINS };
    match adjust_pan(&pan.inner, &ms.inner, mode, &filter, &weights, bins) {
        Ok(result) => {
            if !out_weights.is_null() {
                std::ptr::copy_nonoverlapping(result.weights.values().as_ptr(), out_weights, bands);
            }
            *out_pan = Box::into_raw(Box::new(PansharpRaster {
                inner: result.corrected_pan,
            }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Runs the full pansharpening workflow. `w0` may be null for equal weights.
///
/// # Safety
/// Handles must be live; `w0`, when non-null, must hold `w0_len` doubles;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pansharp_run_workflow(
    ms_lr: *const PansharpImage,
    pan: *const PansharpRaster,
    options: *const PansharpOptions,
    w0: *const f64,
    w0_len: usize,
    out: *mut *mut PansharpImage,
) -> PansharpStatus {
    let (Some(ms), Some(pan), Some(options)) = (ms_lr.as_ref(), pan.as_ref(), options.as_ref())
    else {
        return fail(PansharpStatus::NullPointer, "null argument");
    };
    if out.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let bands = ms.inner.band_count();
    if !w0.is_null() && w0_len != bands {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("weight length {w0_len} does not match {bands} bands"),
        );
    }
    let weights = match weights_from(slice_arg(w0, w0_len), bands) {
        Ok(w) => w,
        Err(e) => return from_error(e),
    };
    let config = match config_from(options, &pan.inner) {
        Ok(c) => c,
        Err(e) => return from_error(e),
    };
    match run_workflow(&ms.inner, &pan.inner, &config, &weights) {
        Ok((fused, _report)) => {
            *out = Box::into_raw(Box::new(PansharpImage { inner: fused }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Low-pass filters and decimates both inputs with default Butterworth
/// filters: the MS bands by `ms_ratio`, the pan band by `pan_ratio`.
///
/// # Safety
/// Handles must be live; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pansharp_degrade(
    ms: *const PansharpImage,
    pan: *const PansharpRaster,
    ms_ratio: u32,
    pan_ratio: u32,
    out_ms: *mut *mut PansharpImage,
    out_pan: *mut *mut PansharpRaster,
) -> PansharpStatus {
    let (Some(ms), Some(pan)) = (ms.as_ref(), pan.as_ref()) else {
        return fail(PansharpStatus::NullPointer, "null image argument");
    };
    if out_ms.is_null() || out_pan.is_null() {
        return fail(PansharpStatus::NullPointer, "null out pointer");
    }
    let specs = FilterSpec::default_for_ratio(ms_ratio)
        .and_then(|s| Ok((s, FilterSpec::default_for_ratio(pan_ratio)?)));
    let (spec_ms, spec_pan) = match specs {
        Ok(pair) => pair,
        Err(e) => return from_error(e),
    };
    match degrade_wald(&ms.inner, &pan.inner, &spec_ms, &spec_pan) {
        Ok((ms_lr, pan_lr)) => {
            *out_ms = Box::into_raw(Box::new(PansharpImage { inner: ms_lr }));
            *out_pan = Box::into_raw(Box::new(PansharpRaster { inner: pan_lr }));
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Per-band RMSE between two images plus the mean over bands. `per_band` may
/// be null when only the mean is wanted; otherwise it receives `len` values
/// equal to the band count.
///
/// # Safety
/// Handles must be live; non-null buffers must have the stated length.
#[no_mangle]
pub unsafe extern "C" fn pansharp_rmse_image(
    a: *const PansharpImage,
    b: *const PansharpImage,
    per_band: *mut f64,
    len: usize,
    mean: *mut f64,
) -> PansharpStatus {
    let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
        return fail(PansharpStatus::NullPointer, "null image argument");
    };
    if mean.is_null() {
        return fail(PansharpStatus::NullPointer, "null mean pointer");
    }
    if !per_band.is_null() && len != a.inner.band_count() {
        return fail(
            PansharpStatus::DimensionMismatch,
            format!("buffer holds {len} values, image has {} bands", a.inner.band_count()),
        );
    }
    match rmse_image(&a.inner, &b.inner) {
        Ok(report) => {
            if !per_band.is_null() {
                std::ptr::copy_nonoverlapping(report.per_band.as_ptr(), per_band, len);
            }
            *mean = report.mean;
            PansharpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_options(ratio: u32) -> PansharpOptions {
        PansharpOptions {
            method: PansharpMethod::CsMultiplicative,
            phm: PansharpPhm::None,
            phm_scale: PansharpScale::Low,
            pan_correction: true,
            ms_matching: true,
            weight_source: PansharpWeightSource::EstimatedLow,
            ratio,
            filter_order: 5,
            cutoff: 0.0,
            epsilon: 0.0,
            bins: 0,
            ratio_as_offset: false,
        }
    }

    fn checker(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n * n)
            .map(|i| if (i / n + i % n) % 2 == 0 { lo } else { hi } + (i % 7) as f64)
            .collect()
    }

    #[test]
    fn raster_lifecycle_and_copy() {
        unsafe {
            let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
            let mut handle: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_raster_create(3, 2, data.as_ptr(), 6, &mut handle),
                PansharpStatus::Ok
            );
            assert_eq!(pansharp_raster_width(handle), 3);
            assert_eq!(pansharp_raster_height(handle), 2);
            let mut out = [0.0; 6];
            assert_eq!(
                pansharp_raster_copy(handle, out.as_mut_ptr(), 6),
                PansharpStatus::Ok
            );
            assert_eq!(out, data);
            assert_eq!(
                pansharp_raster_copy(handle, out.as_mut_ptr(), 5),
                PansharpStatus::DimensionMismatch
            );
            pansharp_raster_free(handle);
            pansharp_raster_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn null_arguments_are_reported() {
        unsafe {
            let mut handle: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_raster_create(2, 2, std::ptr::null(), 4, &mut handle),
                PansharpStatus::NullPointer
            );
            let msg = CStr::from_ptr(pansharp_last_error_message());
            assert!(!msg.to_bytes().is_empty());
        }
    }

    #[test]
    fn invalid_shape_is_an_error_with_message() {
        unsafe {
            let data = [1.0, 2.0, 3.0];
            let mut handle: *mut PansharpRaster = std::ptr::null_mut();
            let status = pansharp_raster_create(2, 2, data.as_ptr(), 3, &mut handle);
            assert_eq!(status, PansharpStatus::DimensionMismatch);
            let msg = CStr::from_ptr(pansharp_last_error_message())
                .to_string_lossy()
                .to_string();
            assert!(msg.contains("4"), "message should name the expectation: {msg}");
        }
    }

    #[test]
    fn weight_estimation_through_the_abi() {
        unsafe {
            // Two bands; pan equals 0.4*b0 + 0.3*b1.
            let n = 16usize;
            let b0: Vec<f64> = (0..n * n).map(|i| 50.0 + ((i * 13) % 37) as f64).collect();
            let b1: Vec<f64> = (0..n * n).map(|i| 80.0 + ((i * 7) % 29) as f64).collect();
            let mut data = b0.clone();
            data.extend_from_slice(&b1);
            let mut ms: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_image_create(n, n, 2, data.as_ptr(), data.len(), &mut ms),
                PansharpStatus::Ok
            );
            let pan_data: Vec<f64> = b0
                .iter()
                .zip(&b1)
                .map(|(a, b)| 0.4 * a + 0.3 * b)
                .collect();
            let mut pan: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_raster_create(n, n, pan_data.as_ptr(), pan_data.len(), &mut pan),
                PansharpStatus::Ok
            );

            let mut weights = [0.0f64; 2];
            assert_eq!(
                pansharp_estimate_weights(ms, pan, weights.as_mut_ptr(), 2),
                PansharpStatus::Ok
            );
            assert!((weights[0] - 0.4).abs() < 1e-8, "{weights:?}");
            assert!((weights[1] - 0.3).abs() < 1e-8, "{weights:?}");

            pansharp_image_free(ms);
            pansharp_raster_free(pan);
        }
    }

    #[test]
    fn workflow_smoke_through_the_abi() {
        unsafe {
            let (low, high) = (16usize, 32usize);
            let mut ms_data = checker(low, 100.0, 140.0);
            ms_data.extend(checker(low, 120.0, 160.0));
            let mut ms: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_image_create(low, low, 2, ms_data.as_ptr(), ms_data.len(), &mut ms),
                PansharpStatus::Ok
            );
            let pan_data = checker(high, 90.0, 150.0);
            let mut pan: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_raster_create(high, high, pan_data.as_ptr(), pan_data.len(), &mut pan),
                PansharpStatus::Ok
            );

            let options = default_options(2);
            let mut fused: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_run_workflow(ms, pan, &options, std::ptr::null(), 0, &mut fused),
                PansharpStatus::Ok
            );
            assert_eq!(pansharp_image_width(fused), high);
            assert_eq!(pansharp_image_bands(fused), 2);

            let mut corrected: *mut PansharpRaster = std::ptr::null_mut();
            let mut used = [0.0f64; 2];
            assert_eq!(
                pansharp_adjust_pan(
                    pan,
                    ms,
                    &options,
                    std::ptr::null(),
                    2,
                    &mut corrected,
                    used.as_mut_ptr()
                ),
                PansharpStatus::Ok
            );
            assert_eq!(pansharp_raster_width(corrected), high);
            assert!(used.iter().all(|w| (0.0..=1.0).contains(w)));

            pansharp_raster_free(corrected);
            pansharp_image_free(fused);
            pansharp_image_free(ms);
            pansharp_raster_free(pan);
        }
    }

    #[test]
    fn io_round_trip_through_the_abi() {
        unsafe {
            let dir = std::env::temp_dir().join(format!("pansharp-ffi-{}", std::process::id()));
            std::fs::create_dir_all(&dir).unwrap();
            let header = CString::new(dir.join("img.json").to_str().unwrap()).unwrap();
            let data_path = CString::new(dir.join("img.raw").to_str().unwrap()).unwrap();

            let data = [1.5f64, -2.25, 3.75, 0.0];
            let mut img: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_image_create(2, 2, 1, data.as_ptr(), 4, &mut img),
                PansharpStatus::Ok
            );
            assert_eq!(
                pansharp_image_write(img, header.as_ptr(), data_path.as_ptr()),
                PansharpStatus::Ok
            );
            let mut back: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_image_read(header.as_ptr(), data_path.as_ptr(), &mut back),
                PansharpStatus::Ok
            );
            let mut out = [0.0f64; 4];
            assert_eq!(
                pansharp_image_band_copy(back, 0, out.as_mut_ptr(), 4),
                PansharpStatus::Ok
            );
            assert_eq!(out, data);

            let mut mean = f64::NAN;
            assert_eq!(
                pansharp_rmse_image(img, back, std::ptr::null_mut(), 0, &mut mean),
                PansharpStatus::Ok
            );
            assert_eq!(mean, 0.0);

            pansharp_image_free(img);
            pansharp_image_free(back);
        }
    }

    #[test]
    fn degrade_through_the_abi() {
        unsafe {
            let ms_data = checker(16, 10.0, 20.0);
            let mut ms: *mut PansharpImage = std::ptr::null_mut();
            assert_eq!(
                pansharp_image_create(16, 16, 1, ms_data.as_ptr(), ms_data.len(), &mut ms),
                PansharpStatus::Ok
            );
            let pan_data = checker(64, 5.0, 25.0);
            let mut pan: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_raster_create(64, 64, pan_data.as_ptr(), pan_data.len(), &mut pan),
                PansharpStatus::Ok
            );
            let mut ms_lr: *mut PansharpImage = std::ptr::null_mut();
            let mut pan_lr: *mut PansharpRaster = std::ptr::null_mut();
            assert_eq!(
                pansharp_degrade(ms, pan, 2, 4, &mut ms_lr, &mut pan_lr),
                PansharpStatus::Ok
            );
            assert_eq!(pansharp_image_width(ms_lr), 8);
            assert_eq!(pansharp_raster_width(pan_lr), 16);
            pansharp_image_free(ms);
            pansharp_image_free(ms_lr);
            pansharp_raster_free(pan);
            pansharp_raster_free(pan_lr);
        }
    }
}
