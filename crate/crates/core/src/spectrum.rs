//! Band-pass filtering, power spectra, windowed heart-rate estimation, and
//! the augmentation peak-preservation check.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::PpgWaveform;
#[cfg(test)]
use crate::signal::WaveKind;
use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

/// Heart-rate band in Hz (45-150 bpm).
pub const DEFAULT_BAND_LO: f64 = 0.75;
pub const DEFAULT_BAND_HI: f64 = 2.5;

/// One-sided power spectrum on a uniform frequency grid.
#[derive(Debug, Clone)]
pub struct Spectrum<F> {
    pub freqs: Vec<F>,
    pub power: Vec<F>,
    pub resolution: F,
}

impl<F: Real> Spectrum<F> {
    /// Index of the maximum-power bin with lo <= f <= hi.
    pub fn in_band_argmax(&self, lo: F, hi: F) -> Result<usize> {
        let mut best: Option<usize> = None;
        for (i, &f) in self.freqs.iter().enumerate() {
            if f < lo || f > hi {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(j) if self.power[i] > self.power[j] => best = Some(i),
                _ => {}
            }
        }
        best.ok_or_else(|| Error::Band(format!("no spectrum bins inside ({lo}, {hi}) Hz")))
    }

    /// CSV body with a `freq_hz,power` header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("freq_hz,power\n");
        for (f, p) in self.freqs.iter().zip(&self.power) {
            s.push_str(&format!("{},{}\n", f.as_f64(), p.as_f64()));
        }
        s
    }
}

/// Per-window heart-rate estimates in beats per minute.
#[derive(Debug, Clone)]
pub struct HrEstimate<F> {
    pub bpm_per_window: Vec<F>,
    pub window_s: F,
    pub band: (F, F),
}

impl<F: Real> HrEstimate<F> {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("window_index,bpm\n");
        for (i, b) in self.bpm_per_window.iter().enumerate() {
            s.push_str(&format!("{i},{}\n", b.as_f64()));
        }
        s
    }
}

/// Window policy for HR estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HrWindow<F> {
    /// One estimate over the full signal.
    Whole,
    /// Non-overlapping windows of this many seconds.
    Seconds(F),
}

/// Outcome of the spectral peak-preservation check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreservationVerdict {
    pub preserved: bool,
    pub delta_bins: usize,
    pub f_src_hz: f64,
    pub f_aug_hz: f64,
}

#[derive(Debug, Clone, Copy)]
struct Biquad<F> {
    b: [F; 3],
    a: [F; 3], // a[0] == 1
}

impl<F: Real> Biquad<F> {
    fn apply(&self, x: &mut [F]) {
        // direct form II transposed
        let mut s1 = F::zero();
        let mut s2 = F::zero();
        for v in x.iter_mut() {
            let xin = *v;
            let y = self.b[0] * xin + s1;
            s1 = self.b[1] * xin - self.a[1] * y + s2;
            s2 = self.b[2] * xin - self.a[2] * y;
            *v = y;
        }
    }

    fn response_at(&self, omega: f64) -> Complex<f64> {
        let z1 = Complex::from_polar(1.0, -omega);
        let z2 = z1 * z1;
        let num = Complex::new(self.b[0].as_f64(), 0.0)
            + z1 * self.b[1].as_f64()
            + z2 * self.b[2].as_f64();
        let den =
            Complex::new(1.0, 0.0) + z1 * self.a[1].as_f64() + z2 * self.a[2].as_f64();
        num / den
    }
}

/// Second-order Butterworth band-pass as two biquad sections.
fn butter_bandpass2<F: Real>(lo: F, hi: F, fs: F) -> Result<[Biquad<F>; 2]> {
    let nyquist = fs.as_f64() / 2.0;
    let (lo, hi, fs) = (lo.as_f64(), hi.as_f64(), fs.as_f64());
    if !(0.0 < lo && lo < hi && hi < nyquist) {
        return Err(Error::Band(format!(
            "cutoffs ({lo}, {hi}) Hz must satisfy 0 < lo < hi < fs/2 = {nyquist}"
        )));
    }
    let k = 2.0 * fs;
    let warp = |f: f64| k * (std::f64::consts::PI * f / fs).tan();
    let wl = warp(lo);
    let wh = warp(hi);
    let w0sq = wl * wh;
    let bw = wh - wl;

    // analog prototype pole at 135 degrees; its conjugate supplies the
    // mirrored poles
    let p = Complex::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0);
    let bp = p * bw;
    let disc = (bp * bp - Complex::new(4.0 * w0sq, 0.0)).sqrt();
    let s_poles = [(bp + disc) / 2.0, (bp - disc) / 2.0];

    let mut sections = [Biquad {
        b: [F::zero(); 3],
        a: [F::zero(); 3],
    }; 2];
    for (i, &s) in s_poles.iter().enumerate() {
        let zp = (Complex::new(k, 0.0) + s) / (Complex::new(k, 0.0) - s);
        // section with poles {zp, conj(zp)} and zeros {1, -1}
        sections[i] = Biquad {
            b: [F::one(), F::zero(), -F::one()],
            a: [F::one(), F::of(-2.0 * zp.re), F::of(zp.norm_sqr())],
        };
    }

    // unity gain at the (inverse-prewarped) digital center frequency
    let f_center = fs / std::f64::consts::PI * (w0sq.sqrt() / k).atan();
    let omega_c = 2.0 * std::f64::consts::PI * f_center / fs;
    let g = sections[0].response_at(omega_c).norm() * sections[1].response_at(omega_c).norm();
    let scale = F::of(1.0 / g);
    for b in sections[0].b.iter_mut() {
        *b = *b * scale;
    }
    Ok(sections)
}

fn odd_reflect_pad<F: Real>(x: &[F], pad: usize) -> Vec<F> {
    let n = x.len();
    let two = F::of(2.0);
    let mut out = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        out.push(two * x[0] - x[i]);
    }
    out.extend_from_slice(x);
    for i in 1..=pad {
        out.push(two * x[n - 1] - x[n - 1 - i]);
    }
    out
}

/// Zero-phase Butterworth band-pass: 2nd-order sections applied forward
/// and backward over a reflect-padded copy of the signal.
pub fn bandpass<F: Real>(wave: &PpgWaveform<F>, lo: F, hi: F) -> Result<PpgWaveform<F>> {
    let sections = butter_bandpass2(lo, hi, wave.fs)?;
    let n = wave.len();
    // one filter settling length of the slowest cutoff, capped by the signal
    let settle = (3.0 * wave.fs.as_f64() / lo.as_f64()).ceil() as usize;
    let pad = settle.min(n - 1);
    let mut buf = odd_reflect_pad(&wave.samples, pad);
    for s in &sections {
        s.apply(&mut buf);
    }
    buf.reverse();
    for s in &sections {
        s.apply(&mut buf);
    }
    buf.reverse();
    let out: Vec<F> = buf[pad..pad + n].to_vec();
    PpgWaveform::new(out, wave.fs, wave.kind)
}

/// Band-pass with the cutoffs used for heart-rate estimation.
pub fn bandpass_default<F: Real>(wave: &PpgWaveform<F>) -> Result<PpgWaveform<F>> {
    bandpass(wave, F::of(DEFAULT_BAND_LO), F::of(DEFAULT_BAND_HI))
}

/// Hann-windowed, zero-padded one-sided power spectrum.
pub fn power_spectrum<F: Real>(wave: &PpgWaveform<F>, zero_pad_to: usize) -> Result<Spectrum<F>> {
    let n = wave.len();
    if zero_pad_to < n || !zero_pad_to.is_power_of_two() {
        return Err(Error::Param(format!(
            "zero_pad_to = {zero_pad_to} must be a power of two >= signal length {n}"
        )));
    }
    let mut buf: Vec<Complex<F>> = Vec::with_capacity(zero_pad_to);
    for (i, &x) in wave.samples.iter().enumerate() {
        let w = F::of(0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()));
        buf.push(Complex::new(x * w, F::zero()));
    }
    buf.resize(zero_pad_to, Complex::new(F::zero(), F::zero()));

    let mut planner = FftPlanner::<F>::new();
    let fft = planner.plan_fft_forward(zero_pad_to);
    fft.process(&mut buf);

    let half = zero_pad_to / 2;
    let df = wave.fs / F::of(zero_pad_to as f64);
    let mut freqs = Vec::with_capacity(half + 1);
    let mut power = Vec::with_capacity(half + 1);
    for k in 0..=half {
        freqs.push(df * F::of(k as f64));
        power.push(buf[k].norm_sqr());
    }
    Ok(Spectrum {
        freqs,
        power,
        resolution: df,
    })
}

/// Smallest power of two >= `factor * n`.
pub fn padded_len(n: usize, factor: usize) -> usize {
    (factor * n).next_power_of_two()
}

/// Windowed FFT-peak heart-rate estimation.
///
/// Each window is band-passed at the default cutoffs, zero-padded to the
/// next power of two >= 8x the window length, and the in-band spectral
/// argmax is converted to beats per minute.
pub fn estimate_hr<F: Real>(
    wave: &PpgWaveform<F>,
    window: HrWindow<F>,
    band: (F, F),
) -> Result<HrEstimate<F>> {
    if band.0 <= F::zero() || band.1 <= band.0 {
        return Err(Error::Band("invalid HR band".into()));
    }
    let n = wave.len();
    let fs = wave.fs;
    let (win_samples, window_s) = match window {
        HrWindow::Whole => (n, F::of(n as f64) / fs),
        HrWindow::Seconds(w) => {
            if w < F::of(2.0) {
                return Err(Error::Window(format!("window {w} s shorter than 2 s")));
            }
            (((w * fs).round().as_f64() as usize).min(n), w)
        }
    };
    if win_samples < (F::of(2.0) * fs).round().as_f64() as usize {
        return Err(Error::Window("fewer than 2 s of data per window".into()));
    }

    let mut bpm = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + win_samples).min(n);
        let len = end - start;
        // drop trailing partials shorter than half a window
        if len < win_samples.div_ceil(2) && start > 0 {
            break;
        }
        if len < 4 {
            break;
        }
        let chunk = PpgWaveform::new(wave.samples[start..end].to_vec(), fs, wave.kind)?;
        let filtered = bandpass_default(&chunk)?;
        let spec = power_spectrum(&filtered, padded_len(len, 8))?;
        let peak = spec.in_band_argmax(band.0, band.1)?;
        bpm.push(spec.freqs[peak] * F::of(60.0));
        start = end;
    }
    Ok(HrEstimate {
        bpm_per_window: bpm,
        window_s,
        band,
    })
}

/// Compare the in-band dominant peaks of a source and an augmented
/// waveform on a common spectral grid.
pub fn check_preservation<F: Real>(
    src: &PpgWaveform<F>,
    aug: &PpgWaveform<F>,
) -> Result<PreservationVerdict> {
    if (src.fs - aug.fs).abs() > F::of(1e-9) {
        return Err(Error::Format(format!(
            "sampling rates differ: {} vs {}",
            src.fs.as_f64(),
            aug.fs.as_f64()
        )));
    }
    let (a, b) = (src.len(), aug.len());
    let diff = a.abs_diff(b) as f64;
    if diff / a.max(b) as f64 > 0.01 {
        return Err(Error::Format(format!(
            "lengths {a} and {b} differ by more than 1%"
        )));
    }
    let n = a.min(b);
    let lo = F::of(DEFAULT_BAND_LO);
    let hi = F::of(DEFAULT_BAND_HI);
    // a deliberately coarser grid than estimate_hr's: peak equality on a
    // hyper-fine grid flips on boundary noise, while real HR changes move
    // the peak by many of these bins
    let pad = padded_len(n, 2);
    let peak_of = |w: &PpgWaveform<F>| -> Result<(usize, F)> {
        let trunc = PpgWaveform::new(w.samples[..n].to_vec(), w.fs, w.kind)?;
        let filtered = bandpass(&trunc, lo, hi)?;
        let spec = power_spectrum(&filtered, pad)?;
        let i = spec.in_band_argmax(lo, hi)?;
        Ok((i, spec.freqs[i]))
    };
    let (bin_src, f_src) = peak_of(src)?;
    let (bin_aug, f_aug) = peak_of(aug)?;
    let delta = bin_src.abs_diff(bin_aug);
    Ok(PreservationVerdict {
        preserved: delta == 0,
        delta_bins: delta,
        f_src_hz: f_src.as_f64(),
        f_aug_hz: f_aug.as_f64(),
    })
}

/// Convenience: single whole-signal HR in bpm.
pub fn whole_signal_hr<F: Real>(wave: &PpgWaveform<F>) -> Result<F> {
    let est = estimate_hr(
        wave,
        HrWindow::Whole,
        (F::of(DEFAULT_BAND_LO), F::of(DEFAULT_BAND_HI)),
    )?;
    est.bpm_per_window
        .first()
        .copied()
        .ok_or_else(|| Error::Window("no full window available".into()))
}

#[cfg(test)]
pub(crate) fn tone<F: Real>(freq: f64, amp: f64, fs: f64, n: usize) -> PpgWaveform<F> {
    let samples: Vec<F> = (0..n)
        .map(|i| F::of(amp * (2.0 * std::f64::consts::PI * freq * i as f64 / fs).sin()))
        .collect();
    PpgWaveform::new(samples, F::of(fs), WaveKind::Gold).unwrap()
}
