//! Camera-based pulse extraction and evaluation toolkit.
//!
//! The crate covers the non-neural pipeline for remote
//! photoplethysmography work: spatial-mean RGB traces from frame
//! sequences, the Green/ICA/CHROM/POS extraction methods, zero-phase
//! band-pass filtering and FFT heart-rate estimation, HR error metrics
//! with Bland-Altman agreement data, motion statistics for curating
//! driving-video pools, and a synthetic scene generator with a known
//! embedded pulse for end-to-end validation.
//!
//! All numeric code is generic over the [`scalar::Real`] scalar
//! (f32 or f64); the aliases below pin the common f64 instantiations.

pub mod error;
pub mod ica;
pub mod io;
pub mod linalg;
pub mod methods;
pub mod metrics;
pub mod motion;
pub mod scalar;
pub mod signal;
pub mod spectrum;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default scalar for batch evaluation.
pub type Scalar = f64;

pub type FrameSequence64 = signal::FrameSequence<f64>;
pub type RgbTrace64 = signal::RgbTrace<f64>;
pub type PpgWaveform64 = signal::PpgWaveform<f64>;
pub type Spectrum64 = spectrum::Spectrum<f64>;
pub type HrEstimate64 = spectrum::HrEstimate<f64>;
pub type MotionProfile64 = motion::MotionProfile<f64>;
pub type SyntheticScene64 = synth::SyntheticScene<f64>;
pub type PoseTrack64 = synth::PoseTrack<f64>;

pub type FrameSequence32 = signal::FrameSequence<f32>;
pub type RgbTrace32 = signal::RgbTrace<f32>;
pub type PpgWaveform32 = signal::PpgWaveform<f32>;
