//! Method-by-dataset evaluation over a manifest.

use crate::config::{DatasetManifest, EvalWindow, ManifestEntry, RunConfig};
use crate::error::{HarnessError, Result, VideoFailure};
use rayon::prelude::*;
use rppg_core::ica::{ica_method, IcaParams};
use rppg_core::io::{gold_to_waveform, read_frame_dir, read_gold_csv};
use rppg_core::methods::{chrom_method, green_method, pos_method, Method};
use rppg_core::metrics::{bland_altman, compute_metrics, BlandAltman, MetricsReport};
use rppg_core::signal::extract_rgb_trace;
use rppg_core::spectrum::{estimate_hr, HrWindow};
use rppg_core::{FrameSequence64, PpgWaveform64, RgbTrace64};
use serde::{Deserialize, Serialize};

/// Evaluation result: metrics, agreement data, and the failure roster.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalOutcome {
    /// `method @ manifest root`, used to label report rows.
    pub label: String,
    pub report: MetricsReport,
    /// `None` when there are fewer than two HR pairs.
    pub bland_altman: Option<BlandAltman>,
    pub failures: Vec<VideoFailure>,
}

/// Dispatch an extraction method on a trace.
pub fn run_method(method: Method, trace: &RgbTrace64, window_s: f64) -> rppg_core::Result<PpgWaveform64> {
    match method {
        Method::Green => green_method(trace),
        Method::Ica => ica_method(trace, IcaParams::default()),
        Method::Chrom => chrom_method(trace, window_s),
        Method::Pos => pos_method(trace, window_s),
    }
}

fn hr_window(window: EvalWindow) -> HrWindow<f64> {
    match window {
        EvalWindow::Whole => HrWindow::Whole,
        EvalWindow::Seconds(s) => HrWindow::Seconds(s),
    }
}

/// (id, gt, pred) HR pairs for one video, one per measurement window.
fn evaluate_entry(
    manifest: &DatasetManifest,
    config: &RunConfig,
    method: Method,
    entry: &ManifestEntry,
) -> rppg_core::Result<Vec<(String, f64, f64)>> {
    let mut video: FrameSequence64 = read_frame_dir(&manifest.resolve(&entry.frames_dir))?;
    if let Some(fps) = manifest.fps_override {
        video.fps = fps;
    }
    let trace = extract_rgb_trace(&video)?;
    let gold = read_gold_csv(&manifest.resolve(&entry.gold_csv))?;
    let gold_wave = gold_to_waveform::<f64>(&gold, video.fps)?;

    let pred_wave = run_method(method, &trace, config.method_window_s)?;
    let window = hr_window(manifest.eval_window);
    let pred = estimate_hr(&pred_wave, window, config.band)?;
    // gold HR comes from the identical estimator, never a device label
    let gt = estimate_hr(&gold_wave, window, config.band)?;

    let n = pred.bpm_per_window.len().min(gt.bpm_per_window.len());
    if n == 0 {
        return Err(rppg_core::Error::Window(format!(
            "{}: no complete measurement window",
            entry.id
        )));
    }
    Ok((0..n)
        .map(|w| {
            let id = match manifest.eval_window {
                EvalWindow::Whole => entry.id.clone(),
                EvalWindow::Seconds(_) => format!("{}#{w:03}", entry.id),
            };
            (id, gt.bpm_per_window[w], pred.bpm_per_window[w])
        })
        .collect())
}

/// Evaluate every manifest entry and aggregate HR-error metrics.
///
/// Videos are processed by a worker pool of `config.workers` threads;
/// results are sorted by id so the outcome is identical for any worker
/// count. Failed videos are excluded from the metrics but always listed
/// in the roster; more than 20% failures aborts the run.
pub fn run_evaluation(manifest: &DatasetManifest, config: &RunConfig) -> Result<EvalOutcome> {
    manifest.validate()?;
    config.validate()?;
    let method = config.parsed_method()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let results: Vec<(String, rppg_core::Result<Vec<(String, f64, f64)>>)> = pool.install(|| {
        manifest
            .entries
            .par_iter()
            .map(|e| (e.id.clone(), evaluate_entry(manifest, config, method, e)))
            .collect()
    });

    let mut pairs: Vec<(String, f64, f64)> = Vec::new();
    let mut failures: Vec<VideoFailure> = Vec::new();
    for (id, res) in results {
        match res {
            Ok(ps) => pairs.extend(ps),
            Err(e) => failures.push(VideoFailure {
                id,
                error: e.to_string(),
            }),
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    failures.sort_by(|a, b| a.id.cmp(&b.id));

    let total = manifest.entries.len();
    if failures.len() * 5 > total {
        return Err(HarnessError::Run {
            total,
            roster: failures,
        });
    }
    let report = compute_metrics(&pairs)?;
    let ba_pairs: Vec<(f64, f64)> = pairs.iter().map(|(_, g, p)| (*g, *p)).collect();
    let bland = if ba_pairs.len() >= 2 {
        Some(bland_altman(&ba_pairs)?)
    } else {
        None
    };
    Ok(EvalOutcome {
        label: format!("{} @ {}", method.name(), manifest.root.display()),
        report,
        bland_altman: bland,
        failures,
    })
}
