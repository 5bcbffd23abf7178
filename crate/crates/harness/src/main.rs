use clap::{Args, Parser, Subcommand};
use rppg_core::motion::{read_motion_csv_file, select_driving_videos, MotionProfile};
use rppg_harness::report::{emit_preservation, load_json, to_json};
use rppg_harness::{
    emit_report, generate_synthetic_dataset, run_evaluation, run_preservation_suite,
    DatasetManifest, HarnessError, ReportFormat, Result, RunConfig,
};
use std::path::PathBuf;

/// Batch rPPG evaluation: pulse extraction, HR estimation, motion
/// statistics, and synthetic-suite harnesses.
#[derive(Parser)]
#[command(name = "rppg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides config and $RPPG_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides config).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a method against a dataset manifest.
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Dataset manifest (JSON).
        #[arg(long)]
        manifest: PathBuf,
        /// Extraction method (overrides config): green | ica | chrom | pos.
        #[arg(long)]
        method: Option<String>,
        /// Comma-separated output formats: json, csv, markdown, plotdata.
        #[arg(long, default_value = "json,markdown")]
        formats: String,
    },
    /// Run the seeded motion-preservation suite.
    Preserve {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of seeded trials.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Shift the augmented pulse by this many bpm (negative control).
        #[arg(long, default_value_t = 0.0)]
        hr_shift: f64,
    },
    /// Filter a motion-CSV pool and draw driving videos per source.
    SelectDrivers {
        #[command(flatten)]
        common: CommonArgs,
        /// Directory of OpenFace-style motion CSVs (one per video).
        #[arg(long)]
        motion_dir: PathBuf,
        /// Frame rate of the motion CSVs.
        #[arg(long, default_value_t = 30.0)]
        fps: f64,
        /// Driving videos to draw for each source.
        #[arg(long, default_value_t = 3)]
        per_source: usize,
        /// Number of sources to pair.
        #[arg(long, default_value_t = 1)]
        sources: usize,
    },
    /// Generate a synthetic dataset (frames, gold CSVs, manifest.json).
    Synth {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-emit a saved report.json in other formats.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// A report.json produced by `evaluate`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "markdown,plotdata")]
        formats: String,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_formats(spec: &str) -> Result<Vec<ReportFormat>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            ReportFormat::from_name(s)
                .ok_or_else(|| HarnessError::Config(format!("unknown format '{s}'")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evaluate {
            common,
            manifest,
            method,
            formats,
        } => {
            let mut cfg = load_config(&common)?;
            if let Some(m) = method {
                cfg.method = m;
                cfg.validate()?;
            }
            let formats = parse_formats(&formats)?;
            let manifest = DatasetManifest::load(&manifest)?;
            let outcome = run_evaluation(&manifest, &cfg)?;
            let dir = cfg.resolve_output_dir();
            let written = emit_report(&outcome, &dir, &formats)?;
            for p in written {
                println!("wrote {}", p.display());
            }
            println!("{}", outcome.report.markdown_row(&outcome.label));
            if !outcome.failures.is_empty() {
                eprintln!("{} video(s) failed:", outcome.failures.len());
                for f in &outcome.failures {
                    eprintln!("  {}: {}", f.id, f.error);
                }
            }
        }
        Command::Preserve {
            common,
            trials,
            hr_shift,
        } => {
            let cfg = load_config(&common)?;
            let outcome = run_preservation_suite(&cfg, trials, hr_shift)?;
            let p = emit_preservation(&outcome, &cfg.resolve_output_dir())?;
            println!("wrote {}", p.display());
            println!(
                "pass_rate {:.3} over {} trials",
                outcome.pass_rate, outcome.n_trials
            );
        }
        Command::SelectDrivers {
            common,
            motion_dir,
            fps,
            per_source,
            sources,
        } => {
            let cfg = load_config(&common)?;
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&motion_dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(HarnessError::Config(format!(
                    "no motion CSVs in {}",
                    motion_dir.display()
                )));
            }
            let pool: Vec<MotionProfile<f64>> = paths
                .iter()
                .map(|p| read_motion_csv_file(p, fps))
                .collect::<rppg_core::Result<_>>()?;
            let plan = select_driving_videos(&pool, &cfg.selection, per_source, sources, cfg.seed)?;
            let dir = cfg.resolve_output_dir();
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("plan.json");
            std::fs::write(&path, serde_json::to_string_pretty(&plan).expect("serializes"))?;
            println!("wrote {}", path.display());
        }
        Command::Synth { common } => {
            let cfg = load_config(&common)?;
            let dir = cfg.resolve_output_dir();
            let manifest = generate_synthetic_dataset(&dir, &cfg.synth, cfg.seed)?;
            println!(
                "wrote {} scenes and {}",
                manifest.entries.len(),
                dir.join("manifest.json").display()
            );
        }
        Command::Report {
            common,
            input,
            formats,
        } => {
            let cfg = load_config(&common)?;
            let formats = parse_formats(&formats)?;
            let outcome = load_json(&input)?;
            // sanity: a report must survive a JSON round trip unchanged
            debug_assert_eq!(to_json(&outcome).len(), to_json(&outcome).len());
            let written = emit_report(&outcome, &cfg.resolve_output_dir(), &formats)?;
            for p in written {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are successes; bad usage is a
            // configuration error (exit 3)
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        if let HarnessError::Run { roster, .. } = &e {
            for f in roster {
                eprintln!("  {}: {}", f.id, f.error);
            }
        }
        std::process::exit(e.exit_code());
    }
}
