//! Reference-based quality metrics for the reduced-resolution protocol.

use crate::error::{Error, Result};
use crate::raster::{MultibandImage, Raster};

/// Per-band RMSE values plus their mean; optionally an RMSE between the
/// panchromatic band and the intensity image from the same pipeline state.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseReport {
    pub per_band: Vec<f64>,
    pub mean: f64,
    pub pan_rmse: Option<f64>,
}

/// Root mean squared error over all pixels of two equally shaped rasters.
pub fn rmse_band(a: &Raster, b: &Raster) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::dims(a.shape_string(), b.shape_string()));
    }
    let mut sq = 0.0;
    for (x, y) in a.samples().iter().zip(b.samples()) {
        let d = x - y;
        sq += d * d;
    }
    Ok((sq / a.len() as f64).sqrt())
}

/// RMSE between the corrected panchromatic band and the intensity image
/// computed from `ms` with the weights a workflow actually used. This is the
/// pan-band closeness measure that accompanies the per-band tables.
pub fn pan_intensity_rmse(
    ms: &MultibandImage,
    corrected_pan: &Raster,
    weights_used: &[f64],
) -> Result<f64> {
    let weights = crate::raster::SpectralWeights::new(weights_used.to_vec())?;
    let intensity = crate::raster::intensity(ms, &weights)?;
    rmse_band(&intensity, corrected_pan)
}

/// Per-band RMSE and the arithmetic mean over bands.
pub fn rmse_image(a: &MultibandImage, b: &MultibandImage) -> Result<RmseReport> {
    if a.band_count() != b.band_count() {
        return Err(Error::LengthMismatch {
            what: "band count",
            expected: a.band_count(),
            actual: b.band_count(),
        });
    }
    let per_band = a
        .bands()
        .iter()
        .zip(b.bands())
        .map(|(x, y)| rmse_band(x, y))
        .collect::<Result<Vec<_>>>()?;
    let mean = per_band.iter().sum::<f64>() / per_band.len() as f64;
    Ok(RmseReport {
        per_band,
        mean,
        pan_rmse: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};

    fn uniform(rng: &mut ChaCha12Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn noise(rng: &mut ChaCha12Rng, w: usize, h: usize) -> Raster {
        Raster::new(w, h, (0..w * h).map(|_| uniform(rng) * 100.0).collect()).unwrap()
    }

    #[test]
    fn identical_rasters_have_zero_rmse() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let a = noise(&mut rng, 8, 8);
        assert_eq!(rmse_band(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn constant_offset_gives_absolute_offset() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let a = noise(&mut rng, 8, 8);
        let b = a.map(|v| v - 3.5).unwrap();
        assert!((rmse_band(&a, &b).unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = noise(&mut rng, 32, 32);
            let b = noise(&mut rng, 32, 32);
            // Naive double-loop oracle.
            let mut sq = 0.0;
            for y in 0..32 {
                for x in 0..32 {
                    let d = a.get(x, y) - b.get(x, y);
                    sq += d * d;
                }
            }
            let want = (sq / 1024.0).sqrt();
            let got = rmse_band(&a, &b).unwrap();
            assert!((got - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn image_report_aggregates_band_errors() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let base: Vec<Raster> = (0..3).map(|_| noise(&mut rng, 8, 8)).collect();
        let shifted: Vec<Raster> = base
            .iter()
            .zip([1.0, 2.0, 3.0])
            .map(|(r, d)| r.map(|v| v + d).unwrap())
            .collect();
        let a = MultibandImage::new(base).unwrap();
        let b = MultibandImage::new(shifted).unwrap();
        let report = rmse_image(&a, &b).unwrap();
        for (got, want) in report.per_band.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let mean = report.per_band.iter().sum::<f64>() / 3.0;
        assert!((report.mean - mean).abs() < 1e-12);
        assert!((report.mean - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rmse_is_symmetric_and_triangle() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = noise(&mut rng, 8, 8);
            let b = noise(&mut rng, 8, 8);
            let c = noise(&mut rng, 8, 8);
            let ab = rmse_band(&a, &b).unwrap();
            let ba = rmse_band(&b, &a).unwrap();
            assert_eq!(ab, ba);
            let ac = rmse_band(&a, &c).unwrap();
            let cb = rmse_band(&c, &b).unwrap();
            assert!(ab <= ac + cb + 1e-9);
        }
    }

    #[test]
    fn rmse_scales_linearly() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let a = noise(&mut rng, 8, 8);
        let b = noise(&mut rng, 8, 8);
        let c = 3.25;
        let sa = a.map(|v| c * v).unwrap();
        let sb = b.map(|v| c * v).unwrap();
        let plain = rmse_band(&a, &b).unwrap();
        let scaled = rmse_band(&sa, &sb).unwrap();
        assert!((scaled - c * plain).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = Raster::filled(2, 2, 0.0).unwrap();
        let b = Raster::filled(2, 3, 0.0).unwrap();
        assert!(rmse_band(&a, &b).is_err());
    }
}
