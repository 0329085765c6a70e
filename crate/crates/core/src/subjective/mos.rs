use serde::{Deserialize, Serialize};

use super::table::ScoreTable;

/// z-value of the two-sided 95% normal interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipMos {
    pub clip: String,
    pub mos: f64,
    /// Half-width of the 95% confidence interval.
    pub ci95: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MosResult {
    pub clips: Vec<ClipMos>,
}

impl MosResult {
    pub fn get(&self, clip: &str) -> Option<&ClipMos> {
        self.clips.iter().find(|c| c.clip == clip)
    }
}

/// Mean and `1.96 · s / √n` of one clip's scores.
pub fn mean_ci(scores: &[f64]) -> (f64, f64) {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    if scores.len() < 2 {
        return (mean, 0.0);
    }
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Z_95 * var.sqrt() / n.sqrt())
}

pub fn mos(table: &ScoreTable) -> MosResult {
    if table.subject_count() < 2 {
        log::warn!("MOS from a single subject; confidence intervals reported as 0");
    }
    let clips = table
        .clips()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let (mos, ci95) = mean_ci(&table.column(j));
            ClipMos { clip: c.id.clone(), mos, ci95, n: table.subject_count() }
        })
        .collect();
    MosResult { clips }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(mean_ci(&[7.0]), (7.0, 0.0));
        let (m, ci) = mean_ci(&[4.0, 6.0]);
        assert_eq!(m, 5.0);
        assert!((ci - 1.96).abs() < 1e-12);
        assert_eq!(mean_ci(&[3.0; 9]), (3.0, 0.0));
    }
}
