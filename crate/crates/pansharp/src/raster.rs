//! Core image types: single-band rasters, multiband images and spectral
//! weights, plus the pixelwise arithmetic everything else is built from.
//!
//! Samples are stored row-major with the origin at the top-left pixel and are
//! kept in double precision internally; file I/O narrows to `f32` (see
//! [`crate::io`]).

use crate::error::{Error, Result};

/// Single-band 2-D grid of finite real-valued samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl Raster {
    /// Builds a raster from row-major samples, validating shape and finiteness.
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter {
                name: "dimensions",
                reason: format!("width and height must be positive, got {width}x{height}"),
            });
        }
        if samples.len() != width * height {
            return Err(Error::LengthMismatch {
                what: "sample buffer",
                expected: width * height,
                actual: samples.len(),
            });
        }
        if !samples.iter().all(|s| s.is_finite()) {
            return Err(Error::NonFinite {
                context: "raster samples",
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Constant-valued raster.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds a raster by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Row-major sample slice.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Sample at column `x`, row `y`.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y * self.width + x]
    }

    /// True when both rasters have identical width and height.
    pub fn same_shape(&self, other: &Raster) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn shape_string(&self) -> String {
        format!("{}x{}", self.width, self.height)
    }

    /// Applies `f` to every sample, producing a new raster.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Raster> {
        Raster::new(self.width, self.height, self.samples.iter().map(|&v| f(v)).collect())
    }

    /// Smallest and largest sample.
    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.samples {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// K co-registered rasters of identical dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultibandImage {
    bands: Vec<Raster>,
}

impl MultibandImage {
    pub fn new(bands: Vec<Raster>) -> Result<Self> {
        let first = bands.first().ok_or(Error::InvalidParameter {
            name: "bands",
            reason: "an image needs at least one band".to_string(),
        })?;
        if let Some(bad) = bands.iter().find(|b| !b.same_shape(first)) {
            return Err(Error::dims(first.shape_string(), bad.shape_string()));
        }
        Ok(Self { bands })
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn width(&self) -> usize {
        self.bands[0].width()
    }

    pub fn height(&self) -> usize {
        self.bands[0].height()
    }

    pub fn band(&self, k: usize) -> &Raster {
        &self.bands[k]
    }

    pub fn bands(&self) -> &[Raster] {
        &self.bands
    }

    pub fn into_bands(self) -> Vec<Raster> {
        self.bands
    }

    /// Applies a fallible per-band transform, keeping band order.
    pub fn map_bands(&self, f: impl Fn(&Raster) -> Result<Raster>) -> Result<MultibandImage> {
        let bands = self.bands.iter().map(&f).collect::<Result<Vec<_>>>()?;
        MultibandImage::new(bands)
    }

    pub fn same_shape(&self, other: &MultibandImage) -> bool {
        self.band_count() == other.band_count()
            && self.width() == other.width()
            && self.height() == other.height()
    }
}

/// Per-band weights `w_k` constrained to `0 <= w_k <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWeights {
    values: Vec<f64>,
}

impl SpectralWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "weight vector must not be empty".to_string(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: format!("weight {bad} outside [0, 1]"),
            });
        }
        Ok(Self { values })
    }

    /// Equal weights `1/K`, the fallback when provider weights are unknown.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "band count must be positive".to_string(),
            });
        }
        Self::new(vec![1.0 / k as f64; k])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Elementwise operation for [`pixelwise_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelOp {
    Add,
    Subtract,
    Multiply,
    /// `a / max(b, epsilon)`, so division never blows up on small denominators.
    SafeDivide,
}

/// Weighted band sum: output pixel `i` is `sum_k w_k * band_k[i]`.
pub fn intensity(ms: &MultibandImage, weights: &SpectralWeights) -> Result<Raster> {
    if weights.len() != ms.band_count() {
        return Err(Error::LengthMismatch {
            what: "spectral weights",
            expected: ms.band_count(),
            actual: weights.len(),
        });
    }
    let mut acc = vec![0.0f64; ms.width() * ms.height()];
    for (band, &w) in ms.bands().iter().zip(weights.values()) {
        for (a, &s) in acc.iter_mut().zip(band.samples()) {
            *a += w * s;
        }
    }
    Raster::new(ms.width(), ms.height(), acc)
}

/// Elementwise combination of two rasters of identical shape.
pub fn pixelwise_combine(a: &Raster, b: &Raster, op: PixelOp, epsilon: f64) -> Result<Raster> {
    if !a.same_shape(b) {
        return Err(Error::dims(a.shape_string(), b.shape_string()));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be finite and non-negative, got {epsilon}"),
        });
    }
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| match op {
            PixelOp::Add => x + y,
            PixelOp::Subtract => x - y,
            PixelOp::Multiply => x * y,
            PixelOp::SafeDivide => x / y.max(epsilon),
        })
        .collect();
    Raster::new(a.width(), a.height(), samples)
}

/// Mean and population standard deviation of a raster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterStats {
    pub mean: f64,
    pub std: f64,
}

/// Two-pass mean and population standard deviation (divisor `N`).
pub fn stats(r: &Raster) -> RasterStats {
    let n = r.len() as f64;
    let mean = r.samples().iter().sum::<f64>() / n;
    let var = r.samples().iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    RasterStats {
        mean,
        std: var.sqrt(),
    }
}
