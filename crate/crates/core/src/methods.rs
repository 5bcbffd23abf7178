//! Unsupervised pulse-extraction methods: Green, CHROM, and POS.
//!
//! The fixed-point ICA method lives in [`crate::ica`].

use crate::error::{Error, Result};
use crate::scalar::{mean, population_std, Real};
use crate::signal::{detrend, PpgWaveform, RgbTrace, WaveKind};

/// Canonical method names accepted by the CLI and config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Green,
    Ica,
    Chrom,
    Pos,
}

impl Method {
    pub fn from_name(name: &str) -> Result<Method> {
        match name {
            "green" => Ok(Method::Green),
            "ica" => Ok(Method::Ica),
            "chrom" => Ok(Method::Chrom),
            "pos" => Ok(Method::Pos),
            other => Err(Error::Param(format!(
                "unknown method '{other}' (expected green|ica|chrom|pos)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Green => "green",
            Method::Ica => "ica",
            Method::Chrom => "chrom",
            Method::Pos => "pos",
        }
    }
}

/// Default window length for CHROM and POS, in seconds.
pub const DEFAULT_WINDOW_S: f64 = 1.6;

/// Windows skipped or zeroed by the variance guards, by start sample.
#[derive(Debug, Clone, Default)]
pub struct MethodDiagnostics {
    pub flagged_windows: Vec<usize>,
}

/// Green channel, detrended with a 1 s moving-average window, zero mean.
pub fn green_method<F: Real>(trace: &RgbTrace<F>) -> Result<PpgWaveform<F>> {
    let wave = PpgWaveform::new(trace.g.clone(), trace.fps, WaveKind::Extracted)?;
    let d = detrend(&wave, F::one())?;
    let m = mean(&d.samples);
    PpgWaveform::new(
        d.samples.iter().map(|&x| x - m).collect(),
        trace.fps,
        WaveKind::Extracted,
    )
}

fn hann<F: Real>(n: usize) -> Vec<F> {
    (0..n)
        .map(|i| {
            F::of(0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()))
        })
        .collect()
}

/// Chrominance combination with Hann-weighted 50%-overlap windows.
pub fn chrom_method<F: Real>(trace: &RgbTrace<F>, window_s: F) -> Result<PpgWaveform<F>> {
    chrom_method_diag(trace, window_s).map(|(w, _)| w)
}

pub fn chrom_method_diag<F: Real>(
    trace: &RgbTrace<F>,
    window_s: F,
) -> Result<(PpgWaveform<F>, MethodDiagnostics)> {
    let n = trace.len();
    let win = (window_s * trace.fps).round().as_f64() as usize;
    if win < 16 {
        return Err(Error::Window(format!(
            "CHROM window of {win} samples is below the 16-sample minimum"
        )));
    }
    let win = win.min(n);
    let hop = (win / 2).max(1);
    let weights = hann::<F>(win);
    let mut out = vec![F::zero(); n];
    let mut diag = MethodDiagnostics::default();

    let mut start = 0;
    while start + win <= n {
        let slice = start..start + win;
        let seg = chrom_window(
            &trace.r[slice.clone()],
            &trace.g[slice.clone()],
            &trace.b[slice.clone()],
        );
        match seg {
            Some(s) => {
                for (i, v) in s.iter().enumerate() {
                    out[start + i] += *v * weights[i];
                }
            }
            None => diag.flagged_windows.push(start),
        }
        if start + win == n {
            break;
        }
        start += hop;
        if start + win > n {
            start = n - win;
        }
    }
    Ok((
        PpgWaveform::new(out, trace.fps, WaveKind::Extracted)?,
        diag,
    ))
}

/// One CHROM window: X = 3Rn - 2Gn, Y = 1.5Rn + Gn - 1.5Bn,
/// s = X - (sigma_X / sigma_Y) Y, mean-centered. `None` when a channel
/// mean or sigma_Y is zero.
fn chrom_window<F: Real>(r: &[F], g: &[F], b: &[F]) -> Option<Vec<F>> {
    let (rn, gn, bn) = (
        normalize_window(r)?,
        normalize_window(g)?,
        normalize_window(b)?,
    );
    let n = r.len();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        x.push(F::of(3.0) * rn[i] - F::of(2.0) * gn[i]);
        y.push(F::of(1.5) * rn[i] + gn[i] - F::of(1.5) * bn[i]);
    }
    let sy = population_std(&y);
    if sy <= F::zero() {
        return None;
    }
    let alpha = population_std(&x) / sy;
    let mut s: Vec<F> = (0..n).map(|i| x[i] - alpha * y[i]).collect();
    let m = mean(&s);
    for v in &mut s {
        *v -= m;
    }
    Some(s)
}

fn normalize_window<F: Real>(xs: &[F]) -> Option<Vec<F>> {
    let m = mean(xs);
    if m.abs() < F::of(1e-300) {
        return None;
    }
    Some(xs.iter().map(|&x| x / m - F::one()).collect())
}

/// Plane-orthogonal-to-skin projection with a stride-1 sliding window.
pub fn pos_method<F: Real>(trace: &RgbTrace<F>, window_s: F) -> Result<PpgWaveform<F>> {
    pos_method_diag(trace, window_s).map(|(w, _)| w)
}

pub fn pos_method_diag<F: Real>(
    trace: &RgbTrace<F>,
    window_s: F,
) -> Result<(PpgWaveform<F>, MethodDiagnostics)> {
    let n = trace.len();
    let win = (window_s * trace.fps).round().as_f64() as usize;
    if win < 3 {
        return Err(Error::Window(format!(
            "POS window of {win} samples is below the 3-sample minimum"
        )));
    }
    let win = win.min(n);
    let mut out = vec![F::zero(); n];
    let mut diag = MethodDiagnostics::default();

    for start in 0..=(n - win) {
        let slice = start..start + win;
        match pos_window(
            &trace.r[slice.clone()],
            &trace.g[slice.clone()],
            &trace.b[slice.clone()],
        ) {
            Some(h) => {
                for (i, v) in h.iter().enumerate() {
                    out[start + i] += *v;
                }
            }
            None => diag.flagged_windows.push(start),
        }
    }
    Ok((
        PpgWaveform::new(out, trace.fps, WaveKind::Extracted)?,
        diag,
    ))
}

/// One POS window: S1 = Gn - Bn, S2 = Gn + Bn - 2Rn,
/// h = S1 + (sigma_S1 / sigma_S2) S2, mean-centered.
fn pos_window<F: Real>(r: &[F], g: &[F], b: &[F]) -> Option<Vec<F>> {
    let (rn, gn, bn) = (
        normalize_window(r)?,
        normalize_window(g)?,
        normalize_window(b)?,
    );
    let n = r.len();
    let mut s1 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    for i in 0..n {
        s1.push(gn[i] - bn[i]);
        s2.push(gn[i] + bn[i] - F::of(2.0) * rn[i]);
    }
    let sd2 = population_std(&s2);
    if sd2 <= F::zero() {
        return None;
    }
    let alpha = population_std(&s1) / sd2;
    let mut h: Vec<F> = (0..n).map(|i| s1[i] + alpha * s2[i]).collect();
    let m = mean(&h);
    for v in &mut h {
        *v -= m;
    }
    Some(h)
}
