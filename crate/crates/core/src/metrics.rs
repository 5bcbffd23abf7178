//! Heart-rate error metrics and Bland-Altman agreement data.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One evaluated video (or window): ground-truth and predicted HR in bpm.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PerVideo {
    pub id: String,
    pub gt_bpm: f64,
    pub pred_bpm: f64,
    pub abs_err: f64,
}

/// Aggregated HR error metrics in the usual reporting column order
/// (MAE, RMSE, MAPE, Pearson).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricsReport {
    pub mae: f64,
    pub rmse: f64,
    pub mape: f64,
    /// `None` when fewer than two pairs or a zero-variance series.
    pub pearson: Option<f64>,
    pub n_videos: usize,
    pub per_video: Vec<PerVideo>,
}

impl MetricsReport {
    /// Markdown table row: `| label | MAE | RMSE | MAPE | rho |`.
    pub fn markdown_row(&self, label: &str) -> String {
        let rho = match self.pearson {
            Some(p) => format!("{p:.2}"),
            None => "-".to_string(),
        };
        format!(
            "| {label} | {:.2} | {:.2} | {:.2} | {rho} |",
            self.mae, self.rmse, self.mape
        )
    }
}

/// Bland-Altman agreement summary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BlandAltman {
    /// Per pair: ((gt + pred) / 2, pred - gt).
    pub points: Vec<(f64, f64)>,
    pub bias: f64,
    pub loa_lo: f64,
    pub loa_hi: f64,
}

/// MAE, RMSE, MAPE, and Pearson correlation over (gt, pred) HR pairs.
pub fn compute_metrics(pairs: &[(String, f64, f64)]) -> Result<MetricsReport> {
    if pairs.is_empty() {
        return Err(Error::Sample("metrics need at least one pair".into()));
    }
    for (id, gt, _) in pairs {
        if *gt <= 0.0 {
            return Err(Error::Label(format!("non-positive ground-truth HR for {id}")));
        }
    }
    let n = pairs.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut pct_sum = 0.0;
    let per_video: Vec<PerVideo> = pairs
        .iter()
        .map(|(id, gt, pred)| {
            let err = pred - gt;
            abs_sum += err.abs();
            sq_sum += err * err;
            pct_sum += err.abs() / gt;
            PerVideo {
                id: id.clone(),
                gt_bpm: *gt,
                pred_bpm: *pred,
                abs_err: err.abs(),
            }
        })
        .collect();

    let pearson = if pairs.len() >= 2 {
        let gts: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let preds: Vec<f64> = pairs.iter().map(|p| p.2).collect();
        pearson_opt(&gts, &preds)
    } else {
        None
    };

    Ok(MetricsReport {
        mae: abs_sum / n,
        rmse: (sq_sum / n).sqrt(),
        mape: 100.0 * pct_sum / n,
        pearson,
        n_videos: pairs.len(),
        per_video,
    })
}

fn pearson_opt(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for i in 0..a.len() {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma).powi(2);
        db += (b[i] - mb).powi(2);
    }
    if da == 0.0 || db == 0.0 {
        return None; // zero variance: correlation undefined
    }
    Some(num / (da.sqrt() * db.sqrt()))
}

/// Bland-Altman points, bias, and 1.96-sigma limits of agreement.
///
/// Limits use the sample (n-1) standard deviation of the differences.
pub fn bland_altman(pairs: &[(f64, f64)]) -> Result<BlandAltman> {
    if pairs.len() < 2 {
        return Err(Error::Sample("Bland-Altman needs at least two pairs".into()));
    }
    let points: Vec<(f64, f64)> = pairs
        .iter()
        .map(|(gt, pred)| ((gt + pred) / 2.0, pred - gt))
        .collect();
    let n = points.len() as f64;
    let bias = points.iter().map(|p| p.1).sum::<f64>() / n;
    let var = points.iter().map(|p| (p.1 - bias).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    Ok(BlandAltman {
        points,
        bias,
        loa_lo: bias - 1.96 * sd,
        loa_hi: bias + 1.96 * sd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn named(pairs: &[(f64, f64)]) -> Vec<(String, f64, f64)> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (g, p))| (format!("v{i}"), *g, *p))
            .collect()
    }

    #[test]
    fn identity_prediction() {
        let pairs = named(&[(60.0, 60.0), (75.0, 75.0), (90.0, 90.0)]);
        let m = compute_metrics(&pairs).unwrap();
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.rmse, 0.0);
        assert_eq!(m.mape, 0.0);
        assert!((m.pearson.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_worked_example() {
        let pairs = named(&[(60.0, 62.0), (80.0, 77.0)]);
        let m = compute_metrics(&pairs).unwrap();
        assert!((m.mae - 2.5).abs() < 1e-12);
        assert!((m.rmse - 6.5f64.sqrt()).abs() < 1e-12);
        assert!((m.mape - 3.541666666666667).abs() < 1e-10);
    }

    #[test]
    fn matches_naive_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let pairs: Vec<(f64, f64)> = (0..1000)
            .map(|_| {
                let gt = 50.0 + rng.gen::<f64>() * 100.0;
                (gt, gt + rng.gen::<f64>() * 10.0 - 5.0)
            })
            .collect();
        let m = compute_metrics(&named(&pairs)).unwrap();
        // naive loop recomputation
        let n = pairs.len() as f64;
        let mae: f64 = pairs.iter().map(|(g, p)| (p - g).abs()).sum::<f64>() / n;
        let rmse: f64 = (pairs.iter().map(|(g, p)| (p - g).powi(2)).sum::<f64>() / n).sqrt();
        let mape: f64 = 100.0 * pairs.iter().map(|(g, p)| (p - g).abs() / g).sum::<f64>() / n;
        let mg = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let mp = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let num: f64 = pairs.iter().map(|(g, p)| (g - mg) * (p - mp)).sum();
        let dg: f64 = pairs.iter().map(|(g, _)| (g - mg).powi(2)).sum();
        let dp: f64 = pairs.iter().map(|(_, p)| (p - mp).powi(2)).sum();
        let rho = num / (dg.sqrt() * dp.sqrt());
        assert!((m.mae - mae).abs() < 1e-10);
        assert!((m.rmse - rmse).abs() < 1e-10);
        assert!((m.mape - mape).abs() < 1e-10);
        assert!((m.pearson.unwrap() - rho).abs() < 1e-10);
    }

    #[test]
    fn rmse_at_least_mae() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let pairs: Vec<(f64, f64)> = (0..20)
                .map(|_| {
                    let gt = 50.0 + rng.gen::<f64>() * 100.0;
                    (gt, gt + rng.gen::<f64>() * 20.0 - 10.0)
                })
                .collect();
            let m = compute_metrics(&named(&pairs)).unwrap();
            assert!(m.rmse >= m.mae - 1e-12);
        }
    }

    #[test]
    fn permutation_invariant() {
        let pairs = [(60.0, 62.0), (80.0, 77.0), (100.0, 104.0), (70.0, 69.0)];
        let mut rev = pairs;
        rev.reverse();
        let m1 = compute_metrics(&named(&pairs)).unwrap();
        let m2 = compute_metrics(&named(&rev)).unwrap();
        assert!((m1.mae - m2.mae).abs() < 1e-12);
        assert!((m1.rmse - m2.rmse).abs() < 1e-12);
        assert!((m1.mape - m2.mape).abs() < 1e-12);
        assert!((m1.pearson.unwrap() - m2.pearson.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn pearson_affine_invariant() {
        let pairs = [(60.0, 62.0), (80.0, 77.0), (100.0, 104.0), (70.0, 69.0)];
        let transformed: Vec<(f64, f64)> =
            pairs.iter().map(|(g, p)| (*g, 2.0 * p + 5.0)).collect();
        let m1 = compute_metrics(&named(&pairs)).unwrap();
        let m2 = compute_metrics(&named(&transformed)).unwrap();
        assert!((m1.pearson.unwrap() - m2.pearson.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn non_positive_gt_rejected() {
        let pairs = named(&[(0.0, 62.0)]);
        assert!(matches!(compute_metrics(&pairs), Err(Error::Label(_))));
    }

    #[test]
    fn zero_variance_pearson_flagged_not_error() {
        let pairs = named(&[(70.0, 62.0), (70.0, 77.0)]);
        let m = compute_metrics(&pairs).unwrap();
        assert_eq!(m.pearson, None);
    }

    #[test]
    fn single_pair_pearson_undefined() {
        let m = compute_metrics(&named(&[(70.0, 72.0)])).unwrap();
        assert_eq!(m.pearson, None);
        assert_eq!(m.n_videos, 1);
    }

    #[test]
    fn bland_altman_identity() {
        let ba = bland_altman(&[(60.0, 60.0), (80.0, 80.0)]).unwrap();
        assert_eq!(ba.bias, 0.0);
        assert_eq!(ba.loa_lo, 0.0);
        assert_eq!(ba.loa_hi, 0.0);
        assert!(ba.points.iter().all(|p| p.1 == 0.0));
    }

    #[test]
    fn bland_altman_constant_offset() {
        let ba = bland_altman(&[(60.0, 63.0), (80.0, 83.0), (90.0, 93.0)]).unwrap();
        assert!((ba.bias - 3.0).abs() < 1e-12);
        assert!((ba.loa_lo - 3.0).abs() < 1e-12);
        assert!((ba.loa_hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bland_altman_matches_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pairs: Vec<(f64, f64)> = (0..500)
            .map(|_| {
                let gt = 50.0 + rng.gen::<f64>() * 100.0;
                (gt, gt + rng.gen::<f64>() * 10.0 - 5.0)
            })
            .collect();
        let ba = bland_altman(&pairs).unwrap();
        let diffs: Vec<f64> = pairs.iter().map(|(g, p)| p - g).collect();
        let n = diffs.len() as f64;
        let bias = diffs.iter().sum::<f64>() / n;
        let sd = (diffs.iter().map(|d| (d - bias).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((ba.bias - bias).abs() < 1e-10);
        assert!((ba.loa_lo - (bias - 1.96 * sd)).abs() < 1e-10);
        assert!((ba.loa_hi - (bias + 1.96 * sd)).abs() < 1e-10);
    }

    #[test]
    fn bland_altman_bias_equals_signed_mean_error() {
        let pairs = [(60.0, 62.0), (80.0, 77.0), (100.0, 104.0)];
        let ba = bland_altman(&pairs).unwrap();
        let m = compute_metrics(&named(&pairs)).unwrap();
        let signed_mean: f64 = m
            .per_video
            .iter()
            .map(|v| v.pred_bpm - v.gt_bpm)
            .sum::<f64>()
            / m.per_video.len() as f64;
        assert!((ba.bias - signed_mean).abs() < 1e-12);
    }

    #[test]
    fn bland_altman_needs_two_pairs() {
        assert!(matches!(
            bland_altman(&[(60.0, 62.0)]),
            Err(Error::Sample(_))
        ));
    }

    #[test]
    fn markdown_row_formats_worked_example() {
        let m = compute_metrics(&named(&[(60.0, 62.0), (80.0, 77.0)])).unwrap();
        let row = m.markdown_row("pos/test");
        assert!(row.contains("2.50"));
        assert!(row.contains("3.54"));
    }
}
