//! Motion statistics from head-pose and facial-action-unit tracks, motion
//! magnitude classification, and driving-pool curation.

use crate::error::{Error, Result};
use crate::scalar::{mean, sample_std, Real};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

/// Per-frame head pose rotations and facial action unit intensities.
#[derive(Debug, Clone)]
pub struct MotionProfile<F> {
    pub id: String,
    /// (Rx, Ry, Rz) per frame, radians.
    pub pose: Vec<[F; 3]>,
    /// Per-frame AU intensities (0-5), one row per frame.
    pub aus: Vec<Vec<F>>,
    pub au_names: Vec<String>,
    pub fps: F,
}

impl<F: Real> MotionProfile<F> {
    pub fn new(
        id: String,
        pose: Vec<[F; 3]>,
        aus: Vec<Vec<F>>,
        au_names: Vec<String>,
        fps: F,
    ) -> Result<Self> {
        if pose.len() != aus.len() || pose.len() < 2 {
            return Err(Error::Data(format!(
                "profile {id}: pose/AU frame counts {} / {} invalid",
                pose.len(),
                aus.len()
            )));
        }
        let n_au = au_names.len();
        for (i, row) in aus.iter().enumerate() {
            if row.len() != n_au {
                return Err(Error::Data(format!(
                    "profile {id}: AU row {i} has {} values, expected {n_au}",
                    row.len()
                )));
            }
            for &v in row {
                if v.is_finite() && !(F::zero()..=F::of(5.0)).contains(&v) {
                    return Err(Error::Data(format!(
                        "profile {id}: AU intensity {} outside [0, 5]",
                        v.as_f64()
                    )));
                }
            }
        }
        Ok(MotionProfile {
            id,
            pose,
            aus,
            au_names,
            fps,
        })
    }
}

/// Whole-video motion statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionSummary {
    /// Mean over the three axes of each axis's temporal sample std, rad.
    pub rigid_msd: f64,
    /// Mean over the AUs of each AU's temporal sample std, intensity.
    pub nonrigid_msd: f64,
    /// Per-axis temporal mean pose, degrees.
    pub mean_pose_deg: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidClass {
    VerySmall,
    Small,
    Large,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonRigidClass {
    BelowSmall,
    Small,
    Large,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionCategory {
    pub rigid: RigidClass,
    pub nonrigid: NonRigidClass,
}

/// Selection criteria over motion summaries; bounds are inclusive.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SelectionCriteria {
    pub rigid_range: Option<(f64, f64)>,
    pub nonrigid_range: Option<(f64, f64)>,
}

impl SelectionCriteria {
    pub fn validate(&self) -> Result<()> {
        for r in [self.rigid_range, self.nonrigid_range].into_iter().flatten() {
            if !(r.0 <= r.1 && r.0 >= 0.0) {
                return Err(Error::Param(format!("invalid range ({}, {})", r.0, r.1)));
            }
        }
        Ok(())
    }

    pub fn matches(&self, summary: &MotionSummary) -> bool {
        let within = |r: Option<(f64, f64)>, v: f64| match r {
            Some((lo, hi)) => v >= lo && v <= hi,
            None => true,
        };
        within(self.rigid_range, summary.rigid_msd)
            && within(self.nonrigid_range, summary.nonrigid_msd)
    }
}

/// Source-to-driver pairings produced by [`select_driving_videos`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationPlan {
    pub seed: u64,
    pub pairings: Vec<Pairing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub source_index: usize,
    pub driving_ids: Vec<String>,
}

/// Drop frames containing NaNs; error if 5% or more of frames are bad.
fn clean_rows<F: Real>(profile: &MotionProfile<F>) -> Result<(Vec<[F; 3]>, Vec<Vec<F>>)> {
    let n = profile.pose.len();
    let mut pose = Vec::with_capacity(n);
    let mut aus = Vec::with_capacity(n);
    for i in 0..n {
        let bad = profile.pose[i].iter().any(|v| !v.is_finite())
            || profile.aus[i].iter().any(|v| !v.is_finite());
        if !bad {
            pose.push(profile.pose[i]);
            aus.push(profile.aus[i].clone());
        }
    }
    let dropped = n - pose.len();
    if dropped as f64 >= 0.05 * n as f64 && dropped > 0 {
        return Err(Error::Data(format!(
            "profile {}: {dropped}/{n} frames contain NaN",
            profile.id
        )));
    }
    if pose.len() < 2 {
        return Err(Error::Data(format!(
            "profile {}: fewer than 2 clean frames",
            profile.id
        )));
    }
    Ok((pose, aus))
}

/// Per-axis and per-AU temporal sample stds, averaged, plus the mean pose.
pub fn summarize_motion<F: Real>(profile: &MotionProfile<F>) -> Result<MotionSummary> {
    let (pose, aus) = clean_rows(profile)?;
    let axis = |k: usize| -> Vec<F> { pose.iter().map(|p| p[k]).collect() };
    let rigid_msd = (0..3)
        .map(|k| sample_std(&axis(k)).as_f64())
        .sum::<f64>()
        / 3.0;
    let n_au = profile.au_names.len();
    let nonrigid_msd = if n_au == 0 {
        0.0
    } else {
        (0..n_au)
            .map(|k| {
                let col: Vec<F> = aus.iter().map(|row| row[k]).collect();
                sample_std(&col).as_f64()
            })
            .sum::<f64>()
            / n_au as f64
    };
    let mean_pose_deg = [
        mean(&axis(0)).as_f64().to_degrees(),
        mean(&axis(1)).as_f64().to_degrees(),
        mean(&axis(2)).as_f64().to_degrees(),
    ];
    Ok(MotionSummary {
        rigid_msd,
        nonrigid_msd,
        mean_pose_deg,
    })
}

/// Map a summary onto the sampled motion bands.
///
/// Values inside the deliberate gaps between bands stay unclassified.
pub fn classify_motion(summary: &MotionSummary) -> MotionCategory {
    let r = summary.rigid_msd;
    let rigid = if (0.0..0.03).contains(&r) {
        RigidClass::VerySmall
    } else if (0.03..=0.07).contains(&r) {
        RigidClass::Small
    } else if (0.10..=0.14).contains(&r) {
        RigidClass::Large
    } else {
        RigidClass::Unclassified
    };
    let a = summary.nonrigid_msd;
    let nonrigid = if (0.0..0.15).contains(&a) {
        NonRigidClass::BelowSmall
    } else if (0.15..=0.25).contains(&a) {
        NonRigidClass::Small
    } else if (0.45..=0.55).contains(&a) {
        NonRigidClass::Large
    } else {
        NonRigidClass::Unclassified
    };
    MotionCategory { rigid, nonrigid }
}

/// Keep profiles with every mean pose axis within +/- 20 degrees and a
/// mean AU standard deviation of at least 0.15.
pub fn filter_driving_pool<'a, F: Real>(
    pool: &'a [MotionProfile<F>],
) -> Result<Vec<&'a MotionProfile<F>>> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut kept = Vec::new();
    for p in pool {
        let s = summarize_motion(p)?;
        let pose_ok = s.mean_pose_deg.iter().all(|d| d.abs() <= 20.0);
        if pose_ok && s.nonrigid_msd >= 0.15 {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyPool);
    }
    Ok(kept)
}

/// Assign each source `per_source` distinct driving videos drawn from the
/// pool entries whose summaries satisfy the criteria.
pub fn select_driving_videos<F: Real>(
    pool: &[MotionProfile<F>],
    criteria: &SelectionCriteria,
    per_source: usize,
    n_sources: usize,
    seed: u64,
) -> Result<AugmentationPlan> {
    criteria.validate()?;
    if per_source == 0 {
        return Err(Error::Param("per_source must be at least 1".into()));
    }
    let mut qualifying: Vec<&MotionProfile<F>> = Vec::new();
    for p in pool {
        let s = summarize_motion(p)?;
        if criteria.matches(&s) {
            qualifying.push(p);
        }
    }
    if qualifying.len() < per_source {
        return Err(Error::InsufficientPool {
            qualifying: qualifying.len(),
            needed: per_source,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let pairings = (0..n_sources)
        .map(|source_index| {
            let picks = rand::seq::index::sample(&mut rng, qualifying.len(), per_source);
            Pairing {
                source_index,
                driving_ids: picks.iter().map(|i| qualifying[i].id.clone()).collect(),
            }
        })
        .collect();
    Ok(AugmentationPlan { seed, pairings })
}

/// Read a motion profile from OpenFace-style CSV.
///
/// Expects `pose_Rx`, `pose_Ry`, `pose_Rz` columns in radians and any set
/// of `AU??_r` intensity columns; the AU subset found is recorded on the
/// profile.
pub fn read_motion_csv<F: Real, R: Read>(
    reader: R,
    id: &str,
    fps: F,
) -> Result<MotionProfile<F>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Data(format!("motion CSV {id}: {e}")))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let pose_cols = [
        col("pose_Rx").ok_or_else(|| Error::Data(format!("{id}: missing pose_Rx")))?,
        col("pose_Ry").ok_or_else(|| Error::Data(format!("{id}: missing pose_Ry")))?,
        col("pose_Rz").ok_or_else(|| Error::Data(format!("{id}: missing pose_Rz")))?,
    ];
    let au_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("AU") && h.ends_with("_r"))
        .map(|(i, h)| (i, h.to_string()))
        .collect();
    if au_cols.is_empty() {
        return Err(Error::Data(format!("{id}: no AU??_r columns found")));
    }

    let parse = |s: &str| -> F {
        s.parse::<f64>().map(F::of).unwrap_or_else(|_| F::nan())
    };
    let mut pose = Vec::new();
    let mut aus = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Data(format!("motion CSV {id}: {e}")))?;
        pose.push([
            parse(&rec[pose_cols[0]]),
            parse(&rec[pose_cols[1]]),
            parse(&rec[pose_cols[2]]),
        ]);
        aus.push(au_cols.iter().map(|(i, _)| parse(&rec[*i])).collect());
    }
    MotionProfile::new(
        id.to_string(),
        pose,
        aus,
        au_cols.into_iter().map(|(_, n)| n).collect(),
        fps,
    )
}

pub fn read_motion_csv_file<F: Real>(path: &Path, fps: F) -> Result<MotionProfile<F>> {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let file = std::fs::File::open(path)?;
    read_motion_csv(file, &id, fps)
}
