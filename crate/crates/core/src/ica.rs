//! Fixed-point ICA over the three color channels, with pulse-component
//! selection by in-band spectral peak.

use crate::error::{Error, Result};
use crate::linalg::{eigh, inv_sqrt_sym, Mat};
use crate::scalar::{mean, sample_std, Real};
use crate::signal::{PpgWaveform, RgbTrace, WaveKind};
use crate::spectrum::{padded_len, power_spectrum, DEFAULT_BAND_HI, DEFAULT_BAND_LO};

#[derive(Debug, Clone, Copy)]
pub struct IcaParams<F> {
    pub n_components: usize,
    pub max_iter: usize,
    pub tol: F,
}

impl<F: Real> Default for IcaParams<F> {
    fn default() -> Self {
        IcaParams {
            n_components: 3,
            max_iter: 200,
            tol: F::of(1e-6),
        }
    }
}

/// Extract the pulse component from an RGB trace by fixed-point ICA.
///
/// Channels are standardized and whitened via the eigendecomposition of
/// the 3x3 covariance; the rotation starts from the identity and uses the
/// tanh contrast with symmetric decorrelation, so results are fully
/// deterministic. The returned component is the one with the greatest
/// spectral peak inside the heart-rate band.
pub fn ica_method<F: Real>(trace: &RgbTrace<F>, params: IcaParams<F>) -> Result<PpgWaveform<F>> {
    let comps = ica_components(trace, params)?;
    let lo = F::of(DEFAULT_BAND_LO);
    let hi = F::of(DEFAULT_BAND_HI);
    let n = trace.len();

    let mut best: Option<(usize, F)> = None;
    for (i, c) in comps.iter().enumerate() {
        let w = PpgWaveform::new(c.clone(), trace.fps, WaveKind::Extracted)?;
        let spec = power_spectrum(&w, padded_len(n, 8))?;
        let peak_bin = spec.in_band_argmax(lo, hi)?;
        let peak = spec.power[peak_bin];
        match best {
            None => best = Some((i, peak)),
            Some((_, p)) if peak > p => best = Some((i, peak)),
            _ => {}
        }
    }
    let (idx, _) = best.ok_or_else(|| Error::DegenerateSignal("no components recovered".into()))?;
    let mut chosen = comps[idx].clone();

    // deterministic sign convention: the derivative's largest excursion
    // points up
    let diffs: Vec<F> = chosen.windows(2).map(|w| w[1] - w[0]).collect();
    let max_up = diffs.iter().copied().fold(F::neg_infinity(), F::max);
    let max_down = diffs.iter().copied().fold(F::infinity(), F::min);
    if max_up < -max_down {
        for v in &mut chosen {
            *v = -*v;
        }
    }
    PpgWaveform::new(chosen, trace.fps, WaveKind::Extracted)
}

/// All recovered independent components, one row per component.
pub fn ica_components<F: Real>(
    trace: &RgbTrace<F>,
    params: IcaParams<F>,
) -> Result<Vec<Vec<F>>> {
    let n = trace.len();
    if n < 10 * params.n_components.max(1) {
        return Err(Error::Format(format!(
            "trace of {n} samples too short for {} components",
            params.n_components
        )));
    }

    // standardize each channel
    let standardize = |xs: &[F], name: &str| -> Result<Vec<F>> {
        let m = mean(xs);
        let sd = sample_std(xs);
        if sd <= F::zero() {
            return Err(Error::DegenerateSignal(format!(
                "{name} channel has zero variance"
            )));
        }
        Ok(xs.iter().map(|&x| (x - m) / sd).collect())
    };
    let channels = [
        standardize(&trace.r, "red")?,
        standardize(&trace.g, "green")?,
        standardize(&trace.b, "blue")?,
    ];

    // 3x3 covariance
    let mut cov = Mat::zeros(3, 3);
    let inv_nm1 = F::of(1.0 / (n - 1) as f64);
    for i in 0..3 {
        for j in i..3 {
            let mut acc = F::zero();
            for t in 0..n {
                acc += channels[i][t] * channels[j][t];
            }
            cov[(i, j)] = acc * inv_nm1;
            cov[(j, i)] = cov[(i, j)];
        }
    }

    // whiten, dropping near-null directions
    let (vals, vecs) = eigh(&cov);
    let max_val = vals[0];
    if max_val <= F::of(1e-12) {
        return Err(Error::DegenerateSignal("covariance has zero rank".into()));
    }
    let rank = vals
        .iter()
        .filter(|&&v| v > max_val * F::of(1e-10))
        .count();
    let r = rank.min(params.n_components.max(1));
    let mut whiten = Mat::zeros(r, 3);
    for i in 0..r {
        let s = F::one() / vals[i].sqrt();
        for j in 0..3 {
            whiten[(i, j)] = vecs[(j, i)] * s;
        }
    }
    let x = Mat::from_rows(&[channels[0].clone(), channels[1].clone(), channels[2].clone()]);
    let z = whiten.matmul(&x); // r x n

    // fixed-point iteration with tanh contrast and symmetric decorrelation
    let mut w = Mat::identity(r);
    let inv_n = F::of(1.0 / n as f64);
    let mut last_delta = f64::INFINITY;
    let mut converged = false;
    for _iter in 0..params.max_iter {
        let u = w.matmul(&z); // r x n
        let mut w_new = Mat::zeros(r, r);
        // E[g(u) z^T] and E[g'(u)]
        for i in 0..r {
            let mut gprime_mean = F::zero();
            let mut gz = vec![F::zero(); r];
            for t in 0..n {
                let g = u[(i, t)].tanh();
                gprime_mean += F::one() - g * g;
                for j in 0..r {
                    gz[j] += g * z[(j, t)];
                }
            }
            gprime_mean *= inv_n;
            for j in 0..r {
                w_new[(i, j)] = gz[j] * inv_n - gprime_mean * w[(i, j)];
            }
        }
        // symmetric decorrelation: W <- (W W^T)^{-1/2} W
        let wwt = w_new.matmul(&w_new.transpose());
        let w_dec = inv_sqrt_sym(&wwt).matmul(&w_new);
        // convergence: rotation rows aligned with previous iteration
        let overlap = w_dec.matmul(&w.transpose());
        let mut delta = F::zero();
        for i in 0..r {
            let d = (F::one() - overlap[(i, i)].abs()).abs();
            if d > delta {
                delta = d;
            }
        }
        w = w_dec;
        last_delta = delta.as_f64();
        if delta < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            iterations: params.max_iter,
            last_delta,
        });
    }

    let s = w.matmul(&z);
    Ok((0..r).map(|i| (0..n).map(|t| s[(i, t)]).collect()).collect())
}
