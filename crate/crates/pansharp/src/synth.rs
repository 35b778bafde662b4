//! Seeded synthetic scenes for experiments and tests.
//!
//! A scene is built from band-limited Gaussian random fields: the bands share
//! a common texture (so panchromatic detail is genuinely informative about
//! each band) plus small per-band texture of their own. The panchromatic
//! image is synthesized from the weighted band sum and then deliberately
//! spoiled with a smooth additive disturbance field, a radiometric gain and
//! offset, a mild monotone nonlinearity, and sensor noise. Those spoilers are
//! exactly what histogram matching and model-based pan correction are
//! supposed to undo, in measurable amounts.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Result;
use crate::raster::{intensity, stats, MultibandImage, Raster, SpectralWeights};
use crate::resample::{pan_to_low, upsample_bicubic, FilterSpec};

/// Uniform draw in [0, 1).
fn unit(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw (Box-Muller).
fn gaussian(rng: &mut ChaCha12Rng) -> f64 {
    let u1 = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
    let u2 = unit(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_raster(rng: &mut ChaCha12Rng, w: usize, h: usize) -> Result<Raster> {
    Raster::new(w, h, (0..w * h).map(|_| gaussian(rng)).collect())
}

/// White Gaussian noise shaped by a Butterworth low-pass, normalized to zero
/// mean and unit standard deviation.
pub fn band_limited_field(rng: &mut ChaCha12Rng, w: usize, h: usize, cutoff: f64) -> Result<Raster> {
    let noise = gaussian_raster(rng, w, h)?;
    let shaped = crate::resample::apply_radial_gain(&noise, 8, |f| {
        crate::resample::butterworth_gain(f, cutoff, 3)
    })?;
    let s = stats(&shaped);
    shaped.map(|v| (v - s.mean) / s.std)
}

/// Knobs for [`generate_scene`].
#[derive(Debug, Clone)]
pub struct SceneParams {
    /// Panchromatic grid is `size x size`; must be divisible by `16 * ratio`.
    pub size: usize,
    /// MS resolution is lower by this factor.
    pub ratio: u32,
    pub bands: usize,
    /// Radiometric gain applied to the synthetic pan.
    pub gain: f64,
    /// Radiometric offset applied to the synthetic pan.
    pub offset: f64,
    /// Amplitude of a saturating (tanh-shaped) monotone distortion of the
    /// pan radiometry, in units of the intensity standard deviation.
    pub nonlinearity: f64,
    /// Standard deviation of the smooth disturbance field, relative to the
    /// intensity standard deviation.
    pub virtual_amplitude: f64,
    /// Absolute standard deviation of per-pixel sensor noise.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SceneParams {
    /// Defaults used by the experiment harness: a 128-pixel pan grid, ratio
    /// 2, four bands, and enough radiometric distortion that each correction
    /// step has something real to remove.
    pub fn standard(seed: u64) -> Self {
        Self {
            size: 128,
            ratio: 2,
            bands: 4,
            gain: 1.15,
            offset: 12.0,
            nonlinearity: 1.2,
            virtual_amplitude: 0.35,
            noise_sigma: 0.3,
            seed,
        }
    }
}

/// A reduced-resolution evaluation scene: the reference MS at the pan grid,
/// its degraded low-resolution input, and the spoiled panchromatic image.
#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub ms_ref: MultibandImage,
    pub ms_lr: MultibandImage,
    pub pan_hr: Raster,
    /// The mixing weights the pan was synthesized from; they play the role of
    /// the data-provider weights.
    pub provider_weights: SpectralWeights,
}

/// Interior weight profile summing to about 0.85, provider-style.
fn weight_profile(bands: usize) -> Vec<f64> {
    const SHAPE: [f64; 8] = [0.12, 0.45, 0.20, 0.08, 0.28, 0.15, 0.10, 0.05];
    let raw: Vec<f64> = (0..bands).map(|k| SHAPE[k % SHAPE.len()]).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|v| v * 0.85 / sum).collect()
}

pub fn generate_scene(params: &SceneParams) -> Result<SyntheticScene> {
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let n = params.size;

    // Shared texture plus small independent per-band texture. The cutoff is
    // kept low so the histogram shape barely changes across resolutions,
    // which is what histogram matching between scales assumes.
    let shared = band_limited_field(&mut rng, n, n, 0.18)?;
    let mut bands = Vec::with_capacity(params.bands);
    for k in 0..params.bands {
        let own = band_limited_field(&mut rng, n, n, 0.18)?;
        let base = 200.0 + 20.0 * k as f64;
        let g = 30.0 + 3.0 * k as f64;
        let samples = shared
            .samples()
            .iter()
            .zip(own.samples())
            .map(|(&t, &u)| base + g * t + 6.0 * u)
            .collect();
        bands.push(Raster::new(n, n, samples)?);
    }
    let ms_ref = MultibandImage::new(bands)?;
    let weights = SpectralWeights::new(weight_profile(params.bands))?;

    let ideal = intensity(&ms_ref, &weights)?;
    let i_stats = stats(&ideal);

    // Smooth disturbance: coarse Gaussian grid blown up bicubically.
    let coarse_n = (n / 16).max(2);
    let coarse = gaussian_raster(&mut rng, coarse_n, coarse_n)?;
    let smooth = upsample_bicubic(&coarse, (n / coarse_n) as u32)?;
    let s_stats = stats(&smooth);
    let v_scale = params.virtual_amplitude * i_stats.std / s_stats.std.max(1e-12);

    let pan_samples: Vec<f64> = ideal
        .samples()
        .iter()
        .zip(smooth.samples())
        .map(|(&i, &v)| {
            let x = i + (v - s_stats.mean) * v_scale;
            let centered = (x - i_stats.mean) / i_stats.std.max(1e-12);
            // gain*x + offset + amp*tanh(..) is monotone in x for any
            // non-negative amplitude, since tanh is increasing.
            params.gain * x
                + params.offset
                + params.nonlinearity * centered.tanh() * i_stats.std
                + params.noise_sigma * gaussian(&mut rng)
        })
        .collect();
    let pan_hr = Raster::new(n, n, pan_samples)?;

    let spec = FilterSpec::default_for_ratio(params.ratio)?;
    let ms_lr = ms_ref.map_bands(|b| pan_to_low(b, &spec))?;

    Ok(SyntheticScene {
        ms_ref,
        ms_lr,
        pan_hr,
        provider_weights: weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_shapes_are_consistent() {
        let scene = generate_scene(&SceneParams {
            size: 64,
            ..SceneParams::standard(1)
        })
        .unwrap();
        assert_eq!(scene.ms_ref.width(), 64);
        assert_eq!(scene.ms_lr.width(), 32);
        assert_eq!(scene.pan_hr.width(), 64);
        assert_eq!(scene.provider_weights.len(), 4);
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = generate_scene(&SceneParams::standard(9)).unwrap();
        let b = generate_scene(&SceneParams::standard(9)).unwrap();
        assert_eq!(a.pan_hr.samples(), b.pan_hr.samples());
        let c = generate_scene(&SceneParams::standard(10)).unwrap();
        assert_ne!(a.pan_hr.samples(), c.pan_hr.samples());
    }

    #[test]
    fn pan_distortion_is_monotone_in_the_underlying_signal() {
        // gain > 0 and a non-negative saturating amplitude keep the pan
        // radiometry a strictly increasing function of the clean signal.
        let p = SceneParams::standard(3);
        assert!(p.gain > 0.0 && p.nonlinearity >= 0.0);
    }

    #[test]
    fn band_limited_field_is_normalized() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let f = band_limited_field(&mut rng, 32, 32, 0.2).unwrap();
        let s = stats(&f);
        assert!(s.mean.abs() < 1e-9);
        assert!((s.std - 1.0).abs() < 1e-9);
    }
}
