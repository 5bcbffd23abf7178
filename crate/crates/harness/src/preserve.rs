//! Seeded preservation suite: does motion augmentation keep the pulse's
//! dominant in-band frequency?

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use rayon::prelude::*;
use rppg_core::methods::pos_method;
use rppg_core::signal::{extract_rgb_trace, Region};
use rppg_core::spectrum::{check_preservation, PreservationVerdict};
use rppg_core::synth::{
    apply_motion, ellipse_mask, generate_ppg_waveform, render_scene, HrSpec, MotionMode,
    PoseTrack, SyntheticScene,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Rotation-std band (rad) that preservation trials draw tracks from;
/// matches the "large" rigid motion band.
pub const TRIAL_ROT_STD: (f64, f64) = (0.10, 0.14);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreservationOutcome {
    pub pass_rate: f64,
    pub n_trials: usize,
    /// Augmented-pulse HR shift in bpm; nonzero only for negative controls.
    pub hr_shift_bpm: f64,
    pub trials: Vec<PreservationVerdict>,
}

fn run_trial(config: &RunConfig, trial: usize, hr_shift_bpm: f64) -> rppg_core::Result<PreservationVerdict> {
    let seed = config
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // keep HR + shift inside the 45-150 bpm band
    let bpm = 48.0 + rng.gen::<f64>() * 72.0;
    let rot_std = TRIAL_ROT_STD.0 + rng.gen::<f64>() * (TRIAL_ROT_STD.1 - TRIAL_ROT_STD.0);
    let p = &config.synth;

    let scene = SyntheticScene::<f64>::default_with(p.noise_sigma, seed);
    let ppg = generate_ppg_waveform(
        HrSpec::ConstantBpm(bpm),
        p.duration_s,
        p.fps,
        p.harmonic_ratio,
        seed,
    )?;
    let source = render_scene(&scene, &ppg)?;
    let track = PoseTrack::smooth_random(source.frames.len(), p.fps, rot_std, 1.0, seed);

    let aug_input = if hr_shift_bpm != 0.0 {
        let shifted = generate_ppg_waveform(
            HrSpec::ConstantBpm(bpm + hr_shift_bpm),
            p.duration_s,
            p.fps,
            p.harmonic_ratio,
            seed,
        )?;
        render_scene(&scene, &shifted)?
    } else {
        source.clone()
    };
    let augmented = apply_motion(&aug_input, &track, MotionMode::Rigid, 0.0)?;

    // extract from an interior skin region that stays on skin under the
    // sampled motion, as a face tracker would provide
    let roi = Region::Mask(ellipse_mask(source.width, source.height, 0.25, 0.20));
    let source = source.with_roi(roi.clone())?;
    let augmented = augmented.with_roi(roi)?;

    let src_pulse = pos_method(&extract_rgb_trace(&source)?, config.method_window_s)?;
    let aug_pulse = pos_method(&extract_rgb_trace(&augmented)?, config.method_window_s)?;
    check_preservation(&src_pulse, &aug_pulse)
}

/// Run `n_trials` seeded augmentation trials and report the preserved
/// fraction. `hr_shift_bpm != 0` re-renders the augmented video with a
/// shifted pulse as a negative control that must not be preserved.
pub fn run_preservation_suite(
    config: &RunConfig,
    n_trials: usize,
    hr_shift_bpm: f64,
) -> Result<PreservationOutcome> {
    if n_trials == 0 {
        return Err(HarnessError::Config("n_trials must be at least 1".into()));
    }
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let trials: rppg_core::Result<Vec<PreservationVerdict>> = pool.install(|| {
        (0..n_trials)
            .into_par_iter()
            .map(|t| run_trial(config, t, hr_shift_bpm))
            .collect()
    });
    let trials = trials?;
    let passed = trials.iter().filter(|v| v.preserved).count();
    Ok(PreservationOutcome {
        pass_rate: passed as f64 / n_trials as f64,
        n_trials,
        hr_shift_bpm,
        trials,
    })
}
