//! Emit evaluation results as JSON, CSV, markdown, or plot data.

use crate::error::Result;
use crate::eval::EvalOutcome;
use crate::preserve::PreservationOutcome;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
    /// `scatter.csv` and `bland_altman.csv` for plotting elsewhere.
    Plotdata,
}

impl ReportFormat {
    pub fn from_name(name: &str) -> Option<ReportFormat> {
        match name {
            "json" => Some(ReportFormat::Json),
            "csv" => Some(ReportFormat::Csv),
            "markdown" => Some(ReportFormat::Markdown),
            "plotdata" => Some(ReportFormat::Plotdata),
            _ => None,
        }
    }
}

/// Write the outcome under `dir` in each requested format; returns the
/// paths written.
pub fn emit_report(
    outcome: &EvalOutcome,
    dir: &Path,
    formats: &[ReportFormat],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for fmt in formats {
        match fmt {
            ReportFormat::Json => {
                let p = dir.join("report.json");
                std::fs::write(&p, to_json(outcome))?;
                written.push(p);
            }
            ReportFormat::Csv => {
                let p = dir.join("per_video.csv");
                let mut s = String::from("id,gt_bpm,pred_bpm,abs_err\n");
                for v in &outcome.report.per_video {
                    writeln!(s, "{},{},{},{}", v.id, v.gt_bpm, v.pred_bpm, v.abs_err)
                        .expect("write to string");
                }
                std::fs::write(&p, s)?;
                written.push(p);
            }
            ReportFormat::Markdown => {
                let p = dir.join("report.md");
                let mut s = String::from("| run | MAE | RMSE | MAPE | rho |\n|---|---|---|---|---|\n");
                s.push_str(&outcome.report.markdown_row(&outcome.label));
                s.push('\n');
                if !outcome.failures.is_empty() {
                    s.push_str("\nFailed videos:\n");
                    for f in &outcome.failures {
                        writeln!(s, "- {}: {}", f.id, f.error).expect("write to string");
                    }
                }
                std::fs::write(&p, s)?;
                written.push(p);
            }
            ReportFormat::Plotdata => {
                let scatter = dir.join("scatter.csv");
                let mut s = String::from("gt,pred\n");
                for v in &outcome.report.per_video {
                    writeln!(s, "{},{}", v.gt_bpm, v.pred_bpm).expect("write to string");
                }
                std::fs::write(&scatter, s)?;
                written.push(scatter);

                let ba = dir.join("bland_altman.csv");
                let mut s = String::from("mean,diff,bias,loa_lo,loa_hi\n");
                if let Some(b) = &outcome.bland_altman {
                    for (m, d) in &b.points {
                        writeln!(s, "{m},{d},{},{},{}", b.bias, b.loa_lo, b.loa_hi)
                            .expect("write to string");
                    }
                }
                std::fs::write(&ba, s)?;
                written.push(ba);
            }
        }
    }
    Ok(written)
}

/// Canonical JSON form used for determinism comparisons.
pub fn to_json(outcome: &EvalOutcome) -> String {
    serde_json::to_string_pretty(outcome).expect("outcome serializes")
}

pub fn load_json(path: &Path) -> Result<EvalOutcome> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| crate::error::HarnessError::Config(format!("{}: {e}", path.display())))
}

/// Write a preservation outcome as `preservation.json`.
pub fn emit_preservation(outcome: &PreservationOutcome, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let p = dir.join("preservation.json");
    std::fs::write(&p, serde_json::to_string_pretty(outcome).expect("serializes"))?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::VideoFailure;
    use rppg_core::metrics::{bland_altman, compute_metrics};

    fn outcome_from(pairs: &[(f64, f64)]) -> EvalOutcome {
        let named: Vec<(String, f64, f64)> = pairs
            .iter()
            .enumerate()
            .map(|(i, (g, p))| (format!("v{i}"), *g, *p))
            .collect();
        EvalOutcome {
            label: "pos @ test".into(),
            report: compute_metrics(&named).unwrap(),
            bland_altman: Some(bland_altman(pairs).unwrap()),
            failures: vec![],
        }
    }

    #[test]
    fn identity_report_has_zero_bias_and_loa() {
        let dir = tempfile::tempdir().unwrap();
        let out = outcome_from(&[(60.0, 60.0), (90.0, 90.0)]);
        emit_report(&out, dir.path(), &[ReportFormat::Plotdata]).unwrap();
        let text = std::fs::read_to_string(dir.path().join("bland_altman.csv")).unwrap();
        for line in text.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[2], "0");
            assert_eq!(cols[3], "0");
            assert_eq!(cols[4], "0");
        }
    }

    #[test]
    fn json_round_trip_is_bitwise_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = outcome_from(&[(60.0, 62.0), (80.0, 77.0)]);
        out.failures.push(VideoFailure {
            id: "broken".into(),
            error: "missing gold".into(),
        });
        emit_report(&out, dir.path(), &[ReportFormat::Json]).unwrap();
        let loaded = load_json(&dir.path().join("report.json")).unwrap();
        assert_eq!(to_json(&out), to_json(&loaded));
    }

    #[test]
    fn markdown_row_contains_worked_example_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let out = outcome_from(&[(60.0, 62.0), (80.0, 77.0)]);
        emit_report(&out, dir.path(), &[ReportFormat::Markdown]).unwrap();
        let text = std::fs::read_to_string(dir.path().join("report.md")).unwrap();
        assert!(text.contains("2.50"));
        assert!(text.contains("3.54"));
    }
}
