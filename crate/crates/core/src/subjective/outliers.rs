//! Subject screening for double-stimulus ratings: per-clip thresholds from
//! mean, standard deviation and kurtosis, then a per-subject count of scores
//! beyond them.

use serde::{Deserialize, Serialize};

use super::table::ScoreTable;
use crate::error::{Error, Result};

/// Share of a subject's scores that must fall outside the thresholds.
pub const REJECT_FRACTION: f64 = 0.05;
/// Maximum `|P - Q| / (P + Q)` for a rejected subject.
pub const SYMMETRY_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipThresholds {
    pub clip: String,
    pub mean: f64,
    /// Sample standard deviation.
    pub std: f64,
    /// `m4 / m2²`; `None` when every score is equal.
    pub kurtosis: Option<f64>,
    /// 2 for a near-normal distribution, √20 otherwise.
    pub multiplier: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectDiagnostics {
    pub subject: String,
    /// Scores above the clip's upper threshold.
    pub p: usize,
    /// Scores below the clip's lower threshold.
    pub q: usize,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierScreen {
    pub rejected: Vec<String>,
    pub clips: Vec<ClipThresholds>,
    pub subjects: Vec<SubjectDiagnostics>,
    /// Set when a single clip makes the exceedance ratio meaningless.
    pub low_confidence: bool,
}

pub fn clip_thresholds(clip: &str, scores: &[f64]) -> ClipThresholds {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let m2 = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let m4 = scores.iter().map(|s| (s - mean).powi(4)).sum::<f64>() / n;
    let std = if scores.len() > 1 { (m2 * n / (n - 1.0)).sqrt() } else { 0.0 };
    let kurtosis = (m2 > 0.0).then(|| m4 / (m2 * m2));
    let multiplier = match kurtosis {
        Some(b) if !(2.0..=4.0).contains(&b) => 20f64.sqrt(),
        _ => 2.0,
    };
    ClipThresholds {
        clip: clip.to_owned(),
        mean,
        std,
        kurtosis,
        multiplier,
        lower: mean - multiplier * std,
        upper: mean + multiplier * std,
    }
}

/// Rejection rule applied to one subject's exceedance counts over `clips`.
pub fn is_rejected(p: usize, q: usize, clips: usize) -> bool {
    let total = (p + q) as f64;
    total / clips as f64 > REJECT_FRACTION && (p as f64 - q as f64).abs() / total < SYMMETRY_LIMIT
}

pub fn screen_outliers(table: &ScoreTable) -> Result<OutlierScreen> {
    if table.subject_count() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: table.subject_count() });
    }
    let clips: Vec<ClipThresholds> =
        table.clips().iter().enumerate().map(|(j, c)| clip_thresholds(&c.id, &table.column(j))).collect();
    let subjects: Vec<SubjectDiagnostics> = table
        .subjects()
        .iter()
        .zip(table.scores())
        .map(|(subject, row)| {
            let (mut p, mut q) = (0, 0);
            for (&s, t) in row.iter().zip(&clips) {
                let s = s as f64;
                if s > t.upper {
                    p += 1;
                } else if s < t.lower {
                    q += 1;
                }
            }
            SubjectDiagnostics { subject: subject.clone(), p, q, rejected: is_rejected(p, q, clips.len()) }
        })
        .collect();
    let low_confidence = table.clip_count() < 2;
    if low_confidence {
        log::warn!("outlier screening on a single clip; results are low-confidence");
    }
    Ok(OutlierScreen {
        rejected: subjects.iter().filter(|d| d.rejected).map(|d| d.subject.clone()).collect(),
        clips,
        subjects,
        low_confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::super::table::{Category, ClipInfo};
    use super::*;

    fn table(rows: Vec<Vec<i64>>) -> ScoreTable {
        let clips =
            (0..rows[0].len()).map(|j| ClipInfo::new(format!("c{j}"), "Hallway", Category::NonCompression)).collect();
        let subjects = (0..rows.len()).map(|i| format!("s{i}")).collect();
        ScoreTable::new(subjects, clips, rows).unwrap()
    }

    #[test]
    fn identical_scores_reject_nobody() {
        let s = screen_outliers(&table(vec![vec![6, 3, 8]; 5])).unwrap();
        assert!(s.rejected.is_empty());
        assert!(s.clips.iter().all(|c| c.std == 0.0 && c.kurtosis.is_none()));
    }

    #[test]
    fn thresholds_for_small_column() {
        // 1,2,3,4,5: mean 3, m2 2, m4 6.8, kurtosis 1.7 -> sqrt(20)
        let t = clip_thresholds("c", &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(t.mean, 3.0);
        assert!((t.kurtosis.unwrap() - 1.7).abs() < 1e-12);
        assert_eq!(t.multiplier, 20f64.sqrt());
        assert!((t.std - 2.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejection_rule() {
        assert!(is_rejected(10, 10, 20));
        assert!(!is_rejected(10, 0, 20));
        assert!(!is_rejected(1, 0, 20));
        assert!(is_rejected(1, 1, 20));
    }

    #[test]
    fn single_clip_is_low_confidence() {
        let s = screen_outliers(&table(vec![vec![5], vec![6], vec![7]])).unwrap();
        assert!(s.low_confidence);
        assert!(screen_outliers(&table(vec![vec![5]])).is_err());
    }
}
