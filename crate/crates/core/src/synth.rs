//! Synthetic scenes with a known embedded pulse, plus parametric rigid and
//! non-rigid motion, so end-to-end claims are testable without real videos.

use crate::error::{Error, Result};
use crate::scalar::{sample_std, Real};
use crate::signal::{FrameSequence, PpgWaveform, Region, WaveKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Heart rate of the embedded pulse: constant or linearly drifting.
#[derive(Debug, Clone, Copy)]
pub enum HrSpec<F> {
    ConstantBpm(F),
    /// (start, end) bpm over the full duration.
    DriftBpm(F, F),
}

/// Pulsatile waveform with fundamental plus one harmonic.
///
/// p(t) = sin(2 pi phi(t)) + harmonic_ratio * sin(4 pi phi(t)), phi the
/// integrated instantaneous frequency, peak-normalized to 1.
pub fn generate_ppg_waveform<F: Real>(
    hr: HrSpec<F>,
    duration_s: F,
    fs: F,
    harmonic_ratio: F,
    seed: u64,
) -> Result<PpgWaveform<F>> {
    let (f0, f1) = match hr {
        HrSpec::ConstantBpm(b) => (b, b),
        HrSpec::DriftBpm(a, b) => (a, b),
    };
    for bpm in [f0, f1] {
        let v = bpm.as_f64();
        if !(40.0..=180.0).contains(&v) {
            return Err(Error::Param(format!("heart rate {v} bpm outside [40, 180]")));
        }
    }
    let n = (duration_s * fs).round().as_f64() as usize;
    if n < 64 {
        return Err(Error::Param(format!(
            "duration * fs = {n} samples, need at least 64"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase0 = F::uniform_01(&mut rng);
    let f_start = f0 / F::of(60.0);
    let f_end = f1 / F::of(60.0);
    let total = F::of(n as f64) / fs;
    let two_pi = F::of(2.0 * std::f64::consts::PI);
    let mut samples: Vec<F> = (0..n)
        .map(|i| {
            let t = F::of(i as f64) / fs;
            // integral of f(t) = f_start + (f_end - f_start) * t / total
            let phi = f_start * t + (f_end - f_start) * t * t / (F::of(2.0) * total) + phase0;
            (two_pi * phi).sin() + harmonic_ratio * (F::of(2.0) * two_pi * phi).sin()
        })
        .collect();
    let peak = samples
        .iter()
        .map(|x| x.abs())
        .fold(F::zero(), F::max);
    if peak > F::zero() {
        for v in &mut samples {
            *v /= peak;
        }
    }
    PpgWaveform::new(samples, fs, WaveKind::Gold)
}

/// Scene parameters for rendering a frame sequence with an embedded pulse.
#[derive(Debug, Clone)]
pub struct SyntheticScene<F> {
    pub width: usize,
    pub height: usize,
    pub skin_mask: Vec<bool>,
    /// Per-channel reflectance in 8-bit counts.
    pub base_color: [F; 3],
    /// Per-channel modulation amplitudes (a_R, a_G, a_B).
    pub pulse_strength: [F; 3],
    /// Additive Gaussian noise sigma, 8-bit counts.
    pub noise_sigma: F,
    /// (amplitude in counts, frequency in Hz) of a global illumination drift.
    pub illum_drift: (F, F),
    pub seed: u64,
}

impl<F: Real> SyntheticScene<F> {
    pub fn new(
        width: usize,
        height: usize,
        skin_mask: Vec<bool>,
        base_color: [F; 3],
        pulse_strength: [F; 3],
        noise_sigma: F,
        illum_drift: (F, F),
        seed: u64,
    ) -> Result<Self> {
        let [a_r, a_g, a_b] = pulse_strength;
        if !(a_g >= a_r && a_r >= a_b && a_b >= F::zero()) {
            return Err(Error::Param(
                "pulse strengths must satisfy a_G >= a_R >= a_B >= 0".into(),
            ));
        }
        if skin_mask.len() != width * height || !skin_mask.iter().any(|&b| b) {
            return Err(Error::Param("skin mask empty or mismatched".into()));
        }
        if noise_sigma < F::zero() {
            return Err(Error::Param("noise sigma must be nonnegative".into()));
        }
        Ok(SyntheticScene {
            width,
            height,
            skin_mask,
            base_color,
            pulse_strength,
            noise_sigma,
            illum_drift,
            seed,
        })
    }

    /// 64x64 scene with an elliptical skin patch covering ~40% of pixels.
    pub fn default_with(noise_sigma: F, seed: u64) -> SyntheticScene<F> {
        let (w, h) = (64, 64);
        Self::new(
            w,
            h,
            ellipse_mask(w, h, 0.4, 0.32),
            [F::of(140.0), F::of(110.0), F::of(90.0)],
            [F::of(0.005), F::of(0.01), F::of(0.003)],
            noise_sigma,
            (F::of(1.0), F::of(0.05)),
            seed,
        )
        .expect("default scene parameters are valid")
    }

    pub fn skin_pixel_count(&self) -> usize {
        self.skin_mask.iter().filter(|&&b| b).count()
    }
}

/// Elliptical mask centered in the frame with the given relative semi-axes.
pub fn ellipse_mask(width: usize, height: usize, rx: f64, ry: f64) -> Vec<bool> {
    let cx = (width as f64 - 1.0) / 2.0;
    let cy = (height as f64 - 1.0) / 2.0;
    let ax = rx * width as f64;
    let ay = ry * height as f64;
    (0..width * height)
        .map(|i| {
            let x = (i % width) as f64;
            let y = (i / width) as f64;
            ((x - cx) / ax).powi(2) + ((y - cy) / ay).powi(2) <= 1.0
        })
        .collect()
}

const BACKGROUND: [f64; 3] = [40.0, 45.0, 50.0];

/// Render the scene's frames with the embedded pulse.
///
/// Skin pixels follow base_c * (1 + a_c * p(t)) + drift(t) + noise, clamped
/// to [0, 255]; the output carries the skin mask as its ROI.
pub fn render_scene<F: Real>(
    scene: &SyntheticScene<F>,
    ppg: &PpgWaveform<F>,
) -> Result<FrameSequence<F>> {
    let n_frames = ppg.len();
    let n_px = scene.width * scene.height;
    let mut rng = ChaCha8Rng::seed_from_u64(scene.seed);
    let (drift_amp, drift_hz) = scene.illum_drift;
    let two_pi = F::of(2.0 * std::f64::consts::PI);
    let max_val = F::of(255.0);

    let mut frames = Vec::with_capacity(n_frames);
    let mut skin_samples = 0usize;
    let mut clamped = 0usize;
    for (t, &p) in ppg.samples.iter().enumerate() {
        let time = F::of(t as f64) / ppg.fs;
        let drift = drift_amp * (two_pi * drift_hz * time).sin();
        let mut frame = Vec::with_capacity(n_px * 3);
        for i in 0..n_px {
            if scene.skin_mask[i] {
                for c in 0..3 {
                    let noise = if scene.noise_sigma > F::zero() {
                        F::standard_normal(&mut rng) * scene.noise_sigma
                    } else {
                        F::zero()
                    };
                    let v = scene.base_color[c] * (F::one() + scene.pulse_strength[c] * p)
                        + drift
                        + noise;
                    skin_samples += 1;
                    if v < F::zero() || v > max_val {
                        clamped += 1;
                    }
                    frame.push(v.max(F::zero()).min(max_val));
                }
            } else {
                for c in 0..3 {
                    let noise = if scene.noise_sigma > F::zero() {
                        F::standard_normal(&mut rng) * scene.noise_sigma
                    } else {
                        F::zero()
                    };
                    let v = F::of(BACKGROUND[c]) + noise;
                    frame.push(v.max(F::zero()).min(max_val));
                }
            }
        }
        frames.push(frame);
    }
    if clamped as f64 > 0.01 * skin_samples as f64 {
        return Err(Error::Saturation(format!(
            "{clamped}/{skin_samples} skin samples clamped (> 1%)"
        )));
    }
    FrameSequence::new(scene.width, scene.height, frames, ppg.fs)?
        .with_roi(Region::Mask(scene.skin_mask.clone()))
}

/// Per-frame rigid motion parameters.
#[derive(Debug, Clone)]
pub struct PoseTrack<F> {
    /// (Rx, Ry, Rz) per frame, radians.
    pub rotations: Vec<[F; 3]>,
    /// (tx, ty) per frame, pixels.
    pub translations: Vec<[F; 2]>,
    pub fps: F,
}

impl<F: Real> PoseTrack<F> {
    pub fn zero(n: usize, fps: F) -> Self {
        PoseTrack {
            rotations: vec![[F::zero(); 3]; n],
            translations: vec![[F::zero(); 2]; n],
            fps,
        }
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Smooth multi-sinusoid track rescaled so every rotation axis has
    /// exactly the target sample std.
    pub fn smooth_random(
        n: usize,
        fps: F,
        target_rot_std: F,
        trans_amp: F,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let two_pi = F::of(2.0 * std::f64::consts::PI);
        let mut axis = |_: usize| -> Vec<F> {
            let comps: Vec<(F, F)> = (0..3)
                .map(|_| {
                    let freq = F::of(0.1) + F::uniform_01(&mut rng) * F::of(0.4);
                    let phase = F::uniform_01(&mut rng) * two_pi;
                    (freq, phase)
                })
                .collect();
            let mut xs: Vec<F> = (0..n)
                .map(|i| {
                    let t = F::of(i as f64) / fps;
                    comps
                        .iter()
                        .map(|&(f, ph)| (two_pi * f * t + ph).sin())
                        .sum()
                })
                .collect();
            let m = crate::scalar::mean(&xs);
            for v in &mut xs {
                *v -= m;
            }
            let sd = sample_std(&xs);
            if sd > F::zero() && target_rot_std > F::zero() {
                let scale = target_rot_std / sd;
                for v in &mut xs {
                    *v *= scale;
                }
            } else {
                for v in &mut xs {
                    *v = F::zero();
                }
            }
            xs
        };
        let (ax, ay, az) = (axis(0), axis(1), axis(2));
        let tphase = (
            F::uniform_01(&mut rng) * two_pi,
            F::uniform_01(&mut rng) * two_pi,
        );
        let translations: Vec<[F; 2]> = (0..n)
            .map(|i| {
                let t = F::of(i as f64) / fps;
                [
                    trans_amp * (two_pi * F::of(0.2) * t + tphase.0).sin(),
                    trans_amp * (two_pi * F::of(0.25) * t + tphase.1).sin(),
                ]
            })
            .collect();
        PoseTrack {
            rotations: (0..n).map(|i| [ax[i], ay[i], az[i]]).collect(),
            translations,
            fps,
        }
    }

    /// Mean over axes of the per-axis rotation sample std.
    pub fn rotation_msd(&self) -> F {
        let axis = |k: usize| -> Vec<F> { self.rotations.iter().map(|r| r[k]).collect() };
        (sample_std(&axis(0)) + sample_std(&axis(1)) + sample_std(&axis(2))) / F::of(3.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionMode {
    Rigid,
    NonRigid,
    Both,
}

/// Warp each frame by the track's rigid transform and/or a smooth
/// sinusoidal displacement field confined to the skin mask.
///
/// In-plane rotation uses Rz with translation (tx, ty); out-of-plane Rx
/// and Ry act as per-axis anisotropic scales in [cos theta, 1]. Sampling
/// is bilinear with edge replication.
pub fn apply_motion<F: Real>(
    video: &FrameSequence<F>,
    track: &PoseTrack<F>,
    mode: MotionMode,
    warp_amp: F,
) -> Result<FrameSequence<F>> {
    if track.len() != video.frames.len() {
        return Err(Error::Motion(format!(
            "track length {} does not match {} frames",
            track.len(),
            video.frames.len()
        )));
    }
    if warp_amp < F::zero() {
        return Err(Error::Motion("warp amplitude must be nonnegative".into()));
    }
    let (w, h) = (video.width, video.height);
    let mask: Option<&Vec<bool>> = match &video.roi {
        Some(Region::Mask(m)) => Some(m),
        _ => None,
    };
    let cx = F::of((w as f64 - 1.0) / 2.0);
    let cy = F::of((h as f64 - 1.0) / 2.0);
    let rigid = matches!(mode, MotionMode::Rigid | MotionMode::Both);
    let nonrigid = matches!(mode, MotionMode::NonRigid | MotionMode::Both);
    let lambda = F::of(16.0);
    let two_pi = F::of(2.0 * std::f64::consts::PI);
    let warp_rate_hz = F::of(0.4);

    // forward-map check: skin pixels pushed out of frame
    if rigid {
        if let Some(m) = mask {
            let skin: Vec<(F, F)> = m
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (F::of((i % w) as f64), F::of((i / w) as f64)))
                .collect();
            let n_skin = skin.len();
            for t in 0..track.len() {
                let [rx, ry, rz] = track.rotations[t];
                let [tx, ty] = track.translations[t];
                let (sin_z, cos_z) = (rz.sin(), rz.cos());
                let sx = ry.cos().abs().max(F::of(1e-6));
                let sy = rx.cos().abs().max(F::of(1e-6));
                let mut out_count = 0usize;
                for &(x, y) in &skin {
                    let u = (x - cx) * sx;
                    let v = (y - cy) * sy;
                    let qx = cos_z * u - sin_z * v + cx + tx;
                    let qy = sin_z * u + cos_z * v + cy + ty;
                    if qx < F::zero()
                        || qy < F::zero()
                        || qx > F::of((w - 1) as f64)
                        || qy > F::of((h - 1) as f64)
                    {
                        out_count += 1;
                    }
                }
                if out_count as f64 > 0.3 * n_skin as f64 {
                    return Err(Error::Motion(format!(
                        "frame {t}: {out_count}/{n_skin} skin pixels leave the frame"
                    )));
                }
            }
        }
    }

    let sample = |frame: &[F], x: F, y: F, c: usize| -> F {
        // bilinear with edge replication
        let xf = x.max(F::zero()).min(F::of((w - 1) as f64));
        let yf = y.max(F::zero()).min(F::of((h - 1) as f64));
        let x0 = xf.floor().as_f64() as usize;
        let y0 = yf.floor().as_f64() as usize;
        let x1 = (x0 + 1).min(w - 1);
        let y1 = (y0 + 1).min(h - 1);
        let fx = xf - F::of(x0 as f64);
        let fy = yf - F::of(y0 as f64);
        let at = |xx: usize, yy: usize| frame[3 * (yy * w + xx) + c];
        let top = at(x0, y0) * (F::one() - fx) + at(x1, y0) * fx;
        let bot = at(x0, y1) * (F::one() - fx) + at(x1, y1) * fx;
        top * (F::one() - fy) + bot * fy
    };

    let mut out_frames = Vec::with_capacity(video.frames.len());
    for (t, frame) in video.frames.iter().enumerate() {
        let [rx, ry, rz] = track.rotations[t];
        let [tx, ty] = track.translations[t];
        let (sin_z, cos_z) = (rz.sin(), rz.cos());
        let sx = ry.cos().abs().max(F::of(1e-6));
        let sy = rx.cos().abs().max(F::of(1e-6));
        let phase = two_pi * warp_rate_hz * F::of(t as f64) / video.fps;
        let mut out = Vec::with_capacity(frame.len());
        for py in 0..h {
            for px in 0..w {
                let qx = F::of(px as f64);
                let qy = F::of(py as f64);
                // inverse rigid map
                let (mut sx_pos, mut sy_pos) = if rigid {
                    let dx = qx - cx - tx;
                    let dy = qy - cy - ty;
                    let u = cos_z * dx + sin_z * dy;
                    let v = -sin_z * dx + cos_z * dy;
                    (u / sx + cx, v / sy + cy)
                } else {
                    (qx, qy)
                };
                if nonrigid {
                    let in_mask = mask.map(|m| m[py * w + px]).unwrap_or(true);
                    if in_mask && warp_amp > F::zero() {
                        sx_pos += warp_amp * (two_pi * qy / lambda + phase).sin();
                        sy_pos += warp_amp * (two_pi * qx / lambda + phase).cos();
                    }
                }
                for c in 0..3 {
                    out.push(sample(frame, sx_pos, sy_pos, c));
                }
            }
        }
        out_frames.push(out);
    }
    let mut result = FrameSequence::new(w, h, out_frames, video.fps)?;
    result.roi = video.roi.clone();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::extract_rgb_trace;
    use crate::spectrum::{padded_len, power_spectrum};
    use crate::test_util::pearson;

    #[test]
    fn ppg_basic_construction() {
        let w = generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 30.0, 30.0, 0.3, 1)
            .unwrap();
        assert_eq!(w.len(), 900);
        let spec = power_spectrum(&w, padded_len(900, 8)).unwrap();
        let i = spec.in_band_argmax(0.75, 2.5).unwrap();
        assert!((spec.freqs[i] - 1.2).abs() <= spec.resolution);
        let peak = w.samples.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ppg_no_harmonic_is_single_peak() {
        let w = generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 30.0, 30.0, 0.0, 1)
            .unwrap();
        let spec = power_spectrum(&w, padded_len(900, 8)).unwrap();
        let bin_at = |f: f64| ((f / spec.resolution).round() as usize).min(spec.power.len() - 1);
        let fundamental = spec.power[bin_at(1.2)];
        let harmonic = spec.power[bin_at(2.4)];
        assert!(harmonic < 0.01 * fundamental);
    }

    #[test]
    fn ppg_drift_increases_instantaneous_frequency() {
        let w = generate_ppg_waveform::<f64>(HrSpec::DriftBpm(60.0, 90.0), 120.0, 30.0, 0.0, 3)
            .unwrap();
        // zero-crossing counting oracle per quarter
        let quarter = w.len() / 4;
        let count_crossings = |xs: &[f64]| {
            xs.windows(2)
                .filter(|p| (p[0] <= 0.0) != (p[1] <= 0.0))
                .count()
        };
        let counts: Vec<usize> = (0..4)
            .map(|q| count_crossings(&w.samples[q * quarter..(q + 1) * quarter]))
            .collect();
        for q in 1..4 {
            assert!(
                counts[q] >= counts[q - 1],
                "crossings not monotone: {counts:?}"
            );
        }
        assert!(counts[3] > counts[0]);
    }

    #[test]
    fn ppg_out_of_range_hr_rejected() {
        assert!(matches!(
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(30.0), 30.0, 30.0, 0.3, 1),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn default_mask_covers_about_forty_percent() {
        let scene = SyntheticScene::<f64>::default_with(0.0, 1);
        let frac = scene.skin_pixel_count() as f64 / (64.0 * 64.0);
        assert!((0.3..0.5).contains(&frac), "skin fraction {frac}");
    }

    #[test]
    fn no_modulation_no_noise_frames_identical() {
        let mut scene = SyntheticScene::<f64>::default_with(0.0, 1);
        scene.pulse_strength = [0.0, 0.0, 0.0];
        scene.illum_drift = (0.0, 0.0);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 5.0, 30.0, 0.3, 1).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        for f in &video.frames[1..] {
            assert_eq!(f, &video.frames[0]);
        }
    }

    #[test]
    fn noise_free_green_trace_tracks_ppg() {
        let mut scene = SyntheticScene::<f64>::default_with(0.0, 2);
        scene.pulse_strength = [0.01, 0.02, 0.005];
        scene.illum_drift = (0.0, 0.0);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 10.0, 30.0, 0.3, 2).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        let trace = extract_rgb_trace(&video).unwrap();
        assert!(pearson(&trace.g, &ppg.samples) > 0.999);
        // analytic skin mean: base_g * (1 + a_g * p)
        for i in 0..trace.len() {
            let expect = 110.0 * (1.0 + 0.02 * ppg.samples[i]);
            assert!((trace.g[i] - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn saturation_guard_triggers() {
        let mut scene = SyntheticScene::<f64>::default_with(0.0, 3);
        scene.base_color = [250.0, 252.0, 250.0];
        scene.pulse_strength = [0.05, 0.05, 0.05];
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 5.0, 30.0, 0.0, 3).unwrap();
        assert!(matches!(
            render_scene(&scene, &ppg),
            Err(Error::Saturation(_))
        ));
    }

    #[test]
    fn render_deterministic_per_seed() {
        let scene = SyntheticScene::<f64>::default_with(2.0, 9);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(80.0), 4.0, 30.0, 0.3, 9).unwrap();
        let a = render_scene(&scene, &ppg).unwrap();
        let b = render_scene(&scene, &ppg).unwrap();
        assert_eq!(a.frames, b.frames);
    }

    #[test]
    fn zero_track_identity_warp() {
        let scene = SyntheticScene::<f64>::default_with(1.0, 4);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 4.0, 30.0, 0.3, 4).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        let track = PoseTrack::zero(video.frames.len(), 30.0);
        let warped = apply_motion(&video, &track, MotionMode::Both, 0.0).unwrap();
        assert_eq!(video.frames, warped.frames);
    }

    #[test]
    fn smooth_random_track_hits_target_band() {
        for seed in 0..10 {
            let track = PoseTrack::<f64>::smooth_random(600, 30.0, 0.12, 2.0, seed);
            let msd = track.rotation_msd();
            assert!((msd - 0.12).abs() < 1e-9, "msd {msd}");
        }
    }

    #[test]
    fn track_summary_lands_in_large_band() {
        use crate::motion::{summarize_motion, MotionProfile};
        let track = PoseTrack::<f64>::smooth_random(600, 30.0, 0.12, 2.0, 11);
        let aus: Vec<Vec<f64>> = vec![vec![0.0; 17]; 600];
        let names = (0..17).map(|k| format!("AU{:02}_r", k + 1)).collect();
        let profile =
            MotionProfile::new("track".into(), track.rotations.clone(), aus, names, 30.0)
                .unwrap();
        let s = summarize_motion(&profile).unwrap();
        assert!((0.10..=0.14).contains(&s.rigid_msd), "rigid_msd {}", s.rigid_msd);
    }

    #[test]
    fn excessive_displacement_rejected() {
        let scene = SyntheticScene::<f64>::default_with(0.0, 5);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 4.0, 30.0, 0.3, 5).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        let mut track = PoseTrack::zero(video.frames.len(), 30.0);
        for t in &mut track.translations {
            *t = [200.0, 0.0];
        }
        assert!(matches!(
            apply_motion(&video, &track, MotionMode::Rigid, 0.0),
            Err(Error::Motion(_))
        ));
    }

    #[test]
    fn track_length_mismatch_rejected() {
        let scene = SyntheticScene::<f64>::default_with(0.0, 5);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 4.0, 30.0, 0.3, 5).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        let track = PoseTrack::zero(10, 30.0);
        assert!(matches!(
            apply_motion(&video, &track, MotionMode::Rigid, 0.0),
            Err(Error::Motion(_))
        ));
    }

    #[test]
    fn skin_luminance_energy_bounded() {
        let scene = SyntheticScene::<f64>::default_with(2.0, 6);
        let ppg =
            generate_ppg_waveform::<f64>(HrSpec::ConstantBpm(72.0), 10.0, 30.0, 0.3, 6).unwrap();
        let video = render_scene(&scene, &ppg).unwrap();
        let trace = extract_rgb_trace(&video).unwrap();
        let lum: Vec<f64> = (0..trace.len())
            .map(|i| (trace.r[i] + trace.g[i] + trace.b[i]) / 3.0)
            .collect();
        let base_lum = (140.0 + 110.0 + 90.0) / 3.0;
        let max_a = 0.01;
        let bound = base_lum * max_a + 1.0 + 3.0 * 2.0;
        for &l in &lum {
            assert!((l - base_lum).abs() <= bound, "luminance {l} vs base {base_lum}");
        }
    }
}
