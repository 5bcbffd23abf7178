//! Run configuration (TOML) and dataset manifests (JSON).

use crate::error::{HarnessError, Result};
use rppg_core::methods::Method;
use rppg_core::motion::SelectionCriteria;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RPPG_OUT_DIR";

/// HR measurement window policy for a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalWindow {
    /// One HR estimate over the whole video.
    Whole,
    /// Non-overlapping windows of this many seconds.
    Seconds(f64),
}

/// One video of a dataset: frames on disk plus its gold PPG.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub frames_dir: PathBuf,
    pub gold_csv: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion_csv: Option<PathBuf>,
}

/// Dataset description: where the videos live and how to window them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    /// Paths in entries are resolved relative to this directory.
    pub root: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fps_override: Option<f64>,
    pub eval_window: EvalWindow,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Load from JSON, resolving `root` against the manifest's directory
    /// and checking invariants (unique ids, referenced paths exist).
    pub fn load(path: &Path) -> Result<DatasetManifest> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let mut manifest: DatasetManifest = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        if manifest.root.is_relative() {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            manifest.root = base.join(&manifest.root);
        }
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(HarnessError::Config("manifest has no entries".into()));
        }
        if let EvalWindow::Seconds(s) = self.eval_window {
            if !(s > 0.0) {
                return Err(HarnessError::Config(format!(
                    "eval_window must be positive, got {s}"
                )));
            }
        }
        if let Some(fps) = self.fps_override {
            if !(fps > 0.0) {
                return Err(HarnessError::Config(format!(
                    "fps_override must be positive, got {fps}"
                )));
            }
        }
        let mut ids: Vec<&str> = self.entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("duplicate video ids in manifest".into()));
        }
        for e in &self.entries {
            for p in [self.resolve(&e.frames_dir), self.resolve(&e.gold_csv)] {
                if !p.exists() {
                    return Err(HarnessError::Config(format!(
                        "{}: missing path {}",
                        e.id,
                        p.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.root.join(p)
        }
    }
}

/// Parameters of the synthetic dataset and preservation suites.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub n_scenes: usize,
    pub duration_s: f64,
    pub fps: f64,
    pub noise_sigma: f64,
    /// HR range in bpm that scene pulses are drawn from / spaced over.
    pub hr_lo: f64,
    pub hr_hi: f64,
    /// Harmonic-to-fundamental amplitude ratio of the embedded pulse.
    pub harmonic_ratio: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_scenes: 10,
            duration_s: 15.0,
            fps: 30.0,
            noise_sigma: 0.0,
            hr_lo: 48.0,
            hr_hi: 150.0,
            harmonic_ratio: 0.3,
        }
    }
}

/// Full run configuration; every field has a default so a config file
/// only needs to override what it changes.
///
/// ```toml
/// method = "pos"            # green | ica | chrom | pos
/// band = [0.75, 2.5]        # HR band in Hz
/// method_window_s = 1.6     # chrom/pos overlap-add window
/// seed = 7                  # master RNG seed
/// workers = 1               # parallel videos/trials
/// # output_dir = "out"      # default: $RPPG_OUT_DIR or ./rppg-out
///
/// [selection]               # driving-video selection bands (rad / AU)
/// rigid_range = [0.10, 0.14]
///
/// [synth]                   # synthetic dataset / preservation scenes
/// n_scenes = 10
/// duration_s = 15.0
/// fps = 30.0
/// noise_sigma = 0.0
/// hr_lo = 48.0
/// hr_hi = 150.0
/// harmonic_ratio = 0.3
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub method: String,
    pub band: (f64, f64),
    pub method_window_s: f64,
    pub seed: u64,
    pub workers: usize,
    pub output_dir: Option<PathBuf>,
    pub selection: SelectionCriteria,
    pub synth: SynthParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: "pos".into(),
            band: (0.75, 2.5),
            method_window_s: 1.6,
            seed: 7,
            workers: 1,
            output_dir: None,
            selection: SelectionCriteria::default(),
            synth: SynthParams::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.parsed_method()?;
        let (lo, hi) = self.band;
        let nyquist = self.synth.fps / 2.0;
        if !(lo > 0.0 && hi > lo && hi < nyquist) {
            return Err(HarnessError::Config(format!(
                "band ({lo}, {hi}) Hz must satisfy 0 < lo < hi < {nyquist} (Nyquist)"
            )));
        }
        if self.workers == 0 {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        if !(self.method_window_s > 0.0) {
            return Err(HarnessError::Config("method_window_s must be positive".into()));
        }
        if self.synth.n_scenes == 0 || !(self.synth.duration_s > 0.0) || !(self.synth.fps > 0.0) {
            return Err(HarnessError::Config("invalid synth parameters".into()));
        }
        self.selection
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn parsed_method(&self) -> Result<Method> {
        Method::from_name(&self.method)
            .map_err(|_| HarnessError::Config(format!("unknown method '{}'", self.method)))
    }

    /// Configured output dir, else `$RPPG_OUT_DIR`, else `./rppg-out`.
    pub fn resolve_output_dir(&self) -> PathBuf {
        if let Some(d) = &self.output_dir {
            return d.clone();
        }
        if let Ok(d) = std::env::var(OUT_DIR_ENV) {
            if !d.is_empty() {
                return PathBuf::from(d);
            }
        }
        PathBuf::from("rppg-out")
    }
}
