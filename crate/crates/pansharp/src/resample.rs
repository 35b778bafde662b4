//! Resolution changes: bicubic interpolation, low-pass filtering (Butterworth
//! in the frequency domain or spatial boxcar), decimation, and the combined
//! reduced-resolution degradation used to build reference scenes.
//!
//! Grid convention: pixel centers sit at integer coordinates and upsampling by
//! `ratio` maps output pixel `(ratio*x, ratio*y)` exactly onto input pixel
//! `(x, y)`. Decimation keeps those same positions, so a decimate after an
//! upsample returns the original samples.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::raster::{MultibandImage, Raster};

/// Low-pass filter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterKind {
    /// Zero-phase frequency-domain filter with magnitude
    /// `1 / sqrt(1 + (f/cutoff)^(2*order))` over the radial frequency `f`.
    Butterworth { cutoff: f64, order: u32 },
    /// Spatial `ratio x ratio` block average.
    Boxcar,
}

/// Low-pass filter plus the decimation ratio it is paired with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    kind: FilterKind,
    ratio: u32,
}

impl FilterSpec {
    pub fn butterworth(cutoff: f64, order: u32, ratio: u32) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff <= 0.5) {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                reason: format!("must be in (0, 0.5] cycles/sample, got {cutoff}"),
            });
        }
        if order == 0 || order > 512 {
            return Err(Error::InvalidParameter {
                name: "order",
                reason: format!("must be in 1..=512, got {order}"),
            });
        }
        if ratio == 0 {
            return Err(Error::InvalidParameter {
                name: "ratio",
                reason: "must be positive".to_string(),
            });
        }
        Ok(Self {
            kind: FilterKind::Butterworth { cutoff, order },
            ratio,
        })
    }

    pub fn boxcar(ratio: u32) -> Result<Self> {
        if ratio == 0 {
            return Err(Error::InvalidParameter {
                name: "ratio",
                reason: "must be positive".to_string(),
            });
        }
        Ok(Self {
            kind: FilterKind::Boxcar,
            ratio,
        })
    }

    /// Order-5 Butterworth with the -3 dB point at the target Nyquist
    /// frequency `0.5/ratio`.
    pub fn default_for_ratio(ratio: u32) -> Result<Self> {
        Self::butterworth(0.5 / ratio.max(1) as f64, 5, ratio)
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn ratio(&self) -> u32 {
        self.ratio
    }
}

/// Keys cubic convolution kernel with sharpness `a = -0.5`.
fn cubic_kernel(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        ((A + 2.0) * t - (A + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((A * t - 5.0 * A) * t + 8.0 * A) * t - 4.0 * A
    } else {
        0.0
    }
}

/// Per-output-pixel source indices and kernel weights along one axis.
fn cubic_taps(out_len: usize, ratio: usize, in_len: usize) -> Vec<([usize; 4], [f64; 4])> {
    (0..out_len)
        .map(|o| {
            let src = o as f64 / ratio as f64;
            let base = src.floor() as isize;
            let f = src - base as f64;
            let clamp = |i: isize| i.clamp(0, in_len as isize - 1) as usize;
            let idx = [clamp(base - 1), clamp(base), clamp(base + 1), clamp(base + 2)];
            let wts = [
                cubic_kernel(f + 1.0),
                cubic_kernel(f),
                cubic_kernel(1.0 - f),
                cubic_kernel(2.0 - f),
            ];
            (idx, wts)
        })
        .collect()
}

/// Bicubic upsampling by an integer factor with clamp-to-edge handling.
pub fn upsample_bicubic(r: &Raster, ratio: u32) -> Result<Raster> {
    if ratio == 0 {
        return Err(Error::InvalidParameter {
            name: "ratio",
            reason: "must be positive".to_string(),
        });
    }
    if ratio == 1 {
        return Ok(r.clone());
    }
    let ratio = ratio as usize;
    let (w_in, h_in) = (r.width(), r.height());
    let (w_out, h_out) = (w_in * ratio, h_in * ratio);

    let x_taps = cubic_taps(w_out, ratio, w_in);
    let y_taps = cubic_taps(h_out, ratio, h_in);

    // Horizontal pass, then vertical.
    let src = r.samples();
    let mut mid = vec![0.0f64; w_out * h_in];
    for y in 0..h_in {
        let row = &src[y * w_in..(y + 1) * w_in];
        let out = &mut mid[y * w_out..(y + 1) * w_out];
        for (x, (idx, wts)) in x_taps.iter().enumerate() {
            out[x] = wts[0] * row[idx[0]]
                + wts[1] * row[idx[1]]
                + wts[2] * row[idx[2]]
                + wts[3] * row[idx[3]];
        }
    }
    let mut out = vec![0.0f64; w_out * h_out];
    for (y, (idx, wts)) in y_taps.iter().enumerate() {
        let rows = [
            &mid[idx[0] * w_out..idx[0] * w_out + w_out],
            &mid[idx[1] * w_out..idx[1] * w_out + w_out],
            &mid[idx[2] * w_out..idx[2] * w_out + w_out],
            &mid[idx[3] * w_out..idx[3] * w_out + w_out],
        ];
        let dst = &mut out[y * w_out..(y + 1) * w_out];
        for x in 0..w_out {
            dst[x] = wts[0] * rows[0][x] + wts[1] * rows[1][x] + wts[2] * rows[2][x] + wts[3] * rows[3][x];
        }
    }
    Raster::new(w_out, h_out, out)
}

/// Per-band bicubic upsampling.
pub fn upsample_image(ms: &MultibandImage, ratio: u32) -> Result<MultibandImage> {
    ms.map_bands(|b| upsample_bicubic(b, ratio))
}

/// Mirror index (reflect-101): ... 2 1 | 0 1 2 ... | n-2 n-3 ...
fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut i = i.rem_euclid(period);
    if i >= n as isize {
        i = period - i;
    }
    i as usize
}

/// Applies a radial frequency-domain gain with mirrored pre-padding of `pad`
/// pixels on every side. The gain receives the radial frequency in
/// cycles/sample (0 at DC, up to ~0.707 in the corners).
pub(crate) fn apply_radial_gain(r: &Raster, pad: usize, gain: impl Fn(f64) -> f64) -> Result<Raster> {
    let (w, h) = (r.width(), r.height());
    let (wp, hp) = (w + 2 * pad, h + 2 * pad);

    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(wp * hp);
    for y in 0..hp {
        let sy = reflect_index(y as isize - pad as isize, h);
        for x in 0..wp {
            let sx = reflect_index(x as isize - pad as isize, w);
            buf.push(Complex::new(r.get(sx, sy), 0.0));
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd_w = planner.plan_fft_forward(wp);
    let fwd_h = planner.plan_fft_forward(hp);
    let inv_w = planner.plan_fft_inverse(wp);
    let inv_h = planner.plan_fft_inverse(hp);

    for y in 0..hp {
        fwd_w.process(&mut buf[y * wp..(y + 1) * wp]);
    }
    let mut col = vec![Complex::new(0.0, 0.0); hp];
    for x in 0..wp {
        for y in 0..hp {
            col[y] = buf[y * wp + x];
        }
        fwd_h.process(&mut col);
        for y in 0..hp {
            buf[y * wp + x] = col[y];
        }
    }

    let freq = |i: usize, n: usize| -> f64 {
        let i = i as f64;
        let n = n as f64;
        if i <= n / 2.0 {
            i / n
        } else {
            (i - n) / n
        }
    };
    for y in 0..hp {
        let fy = freq(y, hp);
        for x in 0..wp {
            let fx = freq(x, wp);
            let g = gain((fx * fx + fy * fy).sqrt());
            buf[y * wp + x] *= g;
        }
    }

    for x in 0..wp {
        for y in 0..hp {
            col[y] = buf[y * wp + x];
        }
        inv_h.process(&mut col);
        for y in 0..hp {
            buf[y * wp + x] = col[y];
        }
    }
    let norm = 1.0 / (wp * hp) as f64;
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        let row = &mut buf[(y + pad) * wp..(y + pad + 1) * wp];
        inv_w.process(row);
        for x in 0..w {
            out[y * w + x] = row[x + pad].re * norm;
        }
    }
    Raster::new(w, h, out)
}

pub(crate) fn butterworth_gain(f: f64, cutoff: f64, order: u32) -> f64 {
    1.0 / (1.0 + (f / cutoff).powi(2 * order as i32)).sqrt()
}

/// Low-pass filtering without any resolution change.
pub fn lowpass(r: &Raster, spec: &FilterSpec) -> Result<Raster> {
    match spec.kind {
        FilterKind::Butterworth { cutoff, order } => {
            let pad = 4 * spec.ratio as usize;
            apply_radial_gain(r, pad, |f| butterworth_gain(f, cutoff, order))
        }
        FilterKind::Boxcar => {
            let ratio = spec.ratio as usize;
            if ratio == 1 {
                return Ok(r.clone());
            }
            let (w, h) = (r.width(), r.height());
            let mut out = vec![0.0f64; w * h];
            let mut by = 0;
            while by < h {
                let bh = ratio.min(h - by);
                let mut bx = 0;
                while bx < w {
                    let bw = ratio.min(w - bx);
                    let mut sum = 0.0;
                    for y in by..by + bh {
                        for x in bx..bx + bw {
                            sum += r.get(x, y);
                        }
                    }
                    let mean = sum / (bw * bh) as f64;
                    for y in by..by + bh {
                        for x in bx..bx + bw {
                            out[y * w + x] = mean;
                        }
                    }
                    bx += ratio;
                }
                by += ratio;
            }
            Raster::new(w, h, out)
        }
    }
}

/// Keeps samples at positions `(ratio*x, ratio*y)`. Dimensions must divide.
pub fn decimate(r: &Raster, ratio: u32) -> Result<Raster> {
    if ratio == 0 {
        return Err(Error::InvalidParameter {
            name: "ratio",
            reason: "must be positive".to_string(),
        });
    }
    if ratio == 1 {
        return Ok(r.clone());
    }
    let ratio = ratio as usize;
    if r.width() % ratio != 0 || r.height() % ratio != 0 {
        return Err(Error::dims(
            format!("dimensions divisible by {ratio}"),
            r.shape_string(),
        ));
    }
    let (w_out, h_out) = (r.width() / ratio, r.height() / ratio);
    let mut out = Vec::with_capacity(w_out * h_out);
    for y in 0..h_out {
        for x in 0..w_out {
            out.push(r.get(x * ratio, y * ratio));
        }
    }
    Raster::new(w_out, h_out, out)
}

/// Low-pass filter then decimate: produces the low-resolution counterpart of
/// a high-resolution band on the coarser grid.
pub fn pan_to_low(p_hr: &Raster, spec: &FilterSpec) -> Result<Raster> {
    let filtered = lowpass(p_hr, spec)?;
    decimate(&filtered, spec.ratio)
}

/// Reduced-resolution protocol: degrades every MS band and the Pan band with
/// their respective filters so the original MS can serve as the reference for
/// the fused product.
pub fn degrade_wald(
    ms: &MultibandImage,
    pan: &Raster,
    spec_ms: &FilterSpec,
    spec_pan: &FilterSpec,
) -> Result<(MultibandImage, Raster)> {
    let ms_lr = ms.map_bands(|b| pan_to_low(b, spec_ms))?;
    let pan_lr = pan_to_low(pan, spec_pan)?;
    Ok((ms_lr, pan_lr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};

    fn uniform(rng: &mut ChaCha12Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn noise_raster(rng: &mut ChaCha12Rng, w: usize, h: usize) -> Raster {
        Raster::new(w, h, (0..w * h).map(|_| uniform(rng) * 100.0).collect()).unwrap()
    }

    /// Band-limited field: white noise pushed through a low-cutoff Butterworth.
    fn smooth_raster(rng: &mut ChaCha12Rng, w: usize, h: usize, cutoff: f64) -> Raster {
        let noise = noise_raster(rng, w, h);
        apply_radial_gain(&noise, 8, |f| butterworth_gain(f, cutoff, 4)).unwrap()
    }

    #[test]
    fn upsample_ratio_one_is_identity() {
        let r = Raster::from_fn(5, 4, |x, y| (x * 10 + y) as f64).unwrap();
        assert_eq!(upsample_bicubic(&r, 1).unwrap(), r);
    }

    #[test]
    fn upsample_keeps_constants() {
        let r = Raster::filled(6, 3, 2.5).unwrap();
        let up = upsample_bicubic(&r, 3).unwrap();
        assert_eq!(up.width(), 18);
        assert_eq!(up.height(), 9);
        for &v in up.samples() {
            assert!((v - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn upsample_reproduces_linear_ramp() {
        // Cubic convolution reproduces linear functions away from the clamped
        // edges; interior output pixels must read x/2 exactly.
        let r = Raster::from_fn(16, 4, |x, _| x as f64).unwrap();
        let up = upsample_bicubic(&r, 2).unwrap();
        for y in 4..5 {
            for x in 4..28 {
                let expect = x as f64 / 2.0;
                assert!(
                    (up.get(x, y) - expect).abs() < 1e-12,
                    "at ({x},{y}): {} vs {expect}",
                    up.get(x, y)
                );
            }
        }
    }

    #[test]
    fn decimate_inverts_upsample_on_grid_points() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let r = noise_raster(&mut rng, 9, 7);
        let up = upsample_bicubic(&r, 3).unwrap();
        for y in 0..7 {
            for x in 0..9 {
                assert!((up.get(3 * x, 3 * y) - r.get(x, y)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn decimate_examples() {
        let r = Raster::from_fn(4, 4, |x, y| (y * 4 + x) as f64).unwrap();
        assert_eq!(decimate(&r, 1).unwrap(), r);
        let d = decimate(&r, 2).unwrap();
        assert_eq!(d.samples(), &[0.0, 2.0, 8.0, 10.0]);
        let odd = Raster::filled(3, 4, 1.0).unwrap();
        assert!(decimate(&odd, 2).is_err());
    }

    #[test]
    fn boxcar_block_average() {
        let r = Raster::new(2, 2, vec![1.0, 3.0, 5.0, 7.0]).unwrap();
        let spec = FilterSpec::boxcar(2).unwrap();
        let f = lowpass(&r, &spec).unwrap();
        for &v in f.samples() {
            assert_eq!(v, 4.0);
        }
    }

    #[test]
    fn butterworth_keeps_constant_rasters() {
        let r = Raster::filled(12, 9, 42.0).unwrap();
        let spec = FilterSpec::butterworth(0.2, 5, 2).unwrap();
        let f = lowpass(&r, &spec).unwrap();
        for &v in f.samples() {
            assert!((v - 42.0).abs() < 1e-10);
        }
    }

    #[test]
    fn butterworth_half_power_at_cutoff() {
        // Sinusoid at exactly the cutoff frequency comes out scaled by
        // 1/sqrt(2) to within 2% on a 128x128 tile.
        let cutoff = 0.125;
        let r = Raster::from_fn(128, 128, |x, _| (std::f64::consts::TAU * cutoff * x as f64).cos())
            .unwrap();
        let spec = FilterSpec::butterworth(cutoff, 5, 2).unwrap();
        let f = lowpass(&r, &spec).unwrap();
        let in_rms = crate::raster::stats(&r).std;
        let out_rms = crate::raster::stats(&f).std;
        let expect = std::f64::consts::FRAC_1_SQRT_2;
        assert!(
            (out_rms / in_rms - expect).abs() < 0.02 * expect,
            "gain {} vs {expect}",
            out_rms / in_rms
        );
    }

    #[test]
    fn butterworth_crushes_nyquist_checkerboard() {
        let r = Raster::from_fn(64, 64, |x, y| if (x + y) % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        let spec = FilterSpec::butterworth(0.125, 5, 2).unwrap();
        let f = lowpass(&r, &spec).unwrap();
        let peak = f.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(peak < 0.02, "checkerboard leaked through: {peak}");
    }

    #[test]
    fn butterworth_double_application_squares_the_gain() {
        // Frequency-domain identity: filtering twice multiplies each spectral
        // coefficient by the gain twice, which equals one pass with the
        // squared magnitude response. Checked on the unpadded transform where
        // the two paths share the same DFT basis.
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let r = noise_raster(&mut rng, 33, 20);
        let (cutoff, order) = (0.2, 3);
        let g = |f: f64| butterworth_gain(f, cutoff, order);
        let once = apply_radial_gain(&r, 0, g).unwrap();
        let twice = apply_radial_gain(&once, 0, g).unwrap();
        let squared = apply_radial_gain(&r, 0, |f| g(f) * g(f)).unwrap();
        for y in 0..20 {
            for x in 0..33 {
                assert!(
                    (twice.get(x, y) - squared.get(x, y)).abs() < 1e-10 * 100.0,
                    "at ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn pan_to_low_constant() {
        let r = Raster::filled(8, 8, 3.0).unwrap();
        let spec = FilterSpec::default_for_ratio(2).unwrap();
        let low = pan_to_low(&r, &spec).unwrap();
        assert_eq!(low.width(), 4);
        for &v in low.samples() {
            assert!((v - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pan_to_low_ratio_one_near_allpass() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let r = smooth_raster(&mut rng, 48, 48, 0.08);
        let spec = FilterSpec::butterworth(0.5, 8, 1).unwrap();
        let out = pan_to_low(&r, &spec).unwrap();
        let (lo, hi) = r.min_max();
        let range = hi - lo;
        for (a, b) in out.samples().iter().zip(r.samples()) {
            assert!((a - b).abs() < 0.01 * range);
        }
    }

    #[test]
    fn degrade_wald_shapes_match_protocol() {
        // Desk-size version of the one-level reduction: the Pan band drops to
        // the original MS grid (factor 4), the MS by the working ratio 2.
        let ms = MultibandImage::new(vec![Raster::filled(64, 64, 5.0).unwrap()]).unwrap();
        let pan = Raster::filled(256, 256, 7.0).unwrap();
        let spec_ms = FilterSpec::default_for_ratio(2).unwrap();
        let spec_pan = FilterSpec::default_for_ratio(4).unwrap();
        let (ms_lr, pan_lr) = degrade_wald(&ms, &pan, &spec_ms, &spec_pan).unwrap();
        assert_eq!((ms_lr.width(), ms_lr.height()), (32, 32));
        assert_eq!((pan_lr.width(), pan_lr.height()), (64, 64));
        for &v in ms_lr.band(0).samples() {
            assert!((v - 5.0).abs() < 1e-10);
        }
        for &v in pan_lr.samples() {
            assert!((v - 7.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degrade_then_upsample_recovers_band_limited_scene() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let scene = smooth_raster(&mut rng, 64, 64, 0.06);
        let spec = FilterSpec::default_for_ratio(2).unwrap();
        let low = pan_to_low(&scene, &spec).unwrap();
        let back = upsample_bicubic(&low, 2).unwrap();
        let (lo, hi) = scene.min_max();
        let range = hi - lo;
        let mut sq = 0.0;
        for (a, b) in back.samples().iter().zip(scene.samples()) {
            sq += (a - b) * (a - b);
        }
        let rmse = (sq / scene.len() as f64).sqrt();
        assert!(rmse < 0.01 * range, "round-trip RMSE {rmse} vs range {range}");
    }

    #[test]
    fn filters_preserve_constant_mean() {
        let r = Raster::filled(10, 6, 2.5).unwrap();
        for spec in [
            FilterSpec::boxcar(2).unwrap(),
            FilterSpec::butterworth(0.25, 5, 2).unwrap(),
        ] {
            let f = lowpass(&r, &spec).unwrap();
            let m = crate::raster::stats(&f).mean;
            assert!((m - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reflect_indexing() {
        assert_eq!(reflect_index(-1, 5), 1);
        assert_eq!(reflect_index(-2, 5), 2);
        assert_eq!(reflect_index(5, 5), 3);
        assert_eq!(reflect_index(0, 1), 0);
        assert_eq!(reflect_index(-7, 1), 0);
    }
}
