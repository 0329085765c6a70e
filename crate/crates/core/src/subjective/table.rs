use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SCORE: i64 = 1;
pub const MAX_SCORE: i64 = 10;

/// Impairment family a clip belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    NonCompression,
    Compression,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::NonCompression => "non_compression",
            Category::Compression => "compression",
        })
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "non_compression" | "noncompression" => Ok(Category::NonCompression),
            "compression" => Ok(Category::Compression),
            other => Err(Error::InvalidParameter {
                name: "category",
                reason: format!("unknown impairment category `{other}`"),
            }),
        }
    }
}

/// Metadata of one rated clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipInfo {
    pub id: String,
    pub sequence: String,
    /// Distortion kind, e.g. `awgn` or `compression`.
    pub impairment: String,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qp: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitrate_kbps: Option<f64>,
}

impl ClipInfo {
    pub fn new(id: impl Into<String>, sequence: impl Into<String>, category: Category) -> Self {
        let impairment = match category {
            Category::Compression => "compression",
            Category::NonCompression => "unspecified",
        };
        Self {
            id: id.into(),
            sequence: sequence.into(),
            impairment: impairment.into(),
            category,
            qp: None,
            bitrate_kbps: None,
        }
    }
}

/// Subjects × clips matrix of integer scores in `1..=10`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    subjects: Vec<String>,
    clips: Vec<ClipInfo>,
    scores: Vec<Vec<i64>>,
}

impl ScoreTable {
    pub fn new(subjects: Vec<String>, clips: Vec<ClipInfo>, scores: Vec<Vec<i64>>) -> Result<Self> {
        if subjects.is_empty() {
            return Err(Error::Empty("score table has no subjects"));
        }
        if clips.is_empty() {
            return Err(Error::Empty("score table has no clips"));
        }
        if scores.len() != subjects.len() {
            return Err(Error::LengthMismatch(subjects.len(), scores.len()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = subjects.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::InvalidParameter { name: "subjects", reason: format!("duplicate subject `{dup}`") });
        }
        let mut seen = HashSet::new();
        if let Some(dup) = clips.iter().find(|c| !seen.insert(c.id.as_str())) {
            return Err(Error::InvalidParameter { name: "clips", reason: format!("duplicate clip `{}`", dup.id) });
        }
        for (subject, row) in subjects.iter().zip(&scores) {
            if row.len() != clips.len() {
                return Err(Error::LengthMismatch(clips.len(), row.len()));
            }
            for (clip, &value) in clips.iter().zip(row) {
                if !(MIN_SCORE..=MAX_SCORE).contains(&value) {
                    return Err(Error::ScoreOutOfRange { subject: subject.clone(), clip: clip.id.clone(), value });
                }
            }
        }
        Ok(Self { subjects, clips, scores })
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }

    pub fn clips(&self) -> &[ClipInfo] {
        &self.clips
    }

    /// Row-major scores, one row per subject.
    pub fn scores(&self) -> &[Vec<i64>] {
        &self.scores
    }

    pub fn subject_count(&self) -> usize {
        self.subjects.len()
    }

    pub fn clip_count(&self) -> usize {
        self.clips.len()
    }

    /// All subjects' scores for clip `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.scores.iter().map(|row| row[j] as f64).collect()
    }

    /// The table with the named subjects removed. Unknown names are ignored.
    pub fn without_subjects(&self, rejected: &[String]) -> Result<Self> {
        let (subjects, scores) = self
            .subjects
            .iter()
            .zip(&self.scores)
            .filter(|(s, _)| !rejected.contains(s))
            .map(|(s, r)| (s.clone(), r.clone()))
            .unzip();
        Self::new(subjects, self.clips.clone(), scores)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clips(n: usize) -> Vec<ClipInfo> {
        (0..n).map(|i| ClipInfo::new(format!("c{i}"), "Table", Category::NonCompression)).collect()
    }

    #[test]
    fn strict_range() {
        let err = ScoreTable::new(vec!["s0".into()], clips(2), vec![vec![1, 11]]).unwrap_err();
        match err {
            Error::ScoreOutOfRange { subject, clip, value } => {
                assert_eq!((subject.as_str(), clip.as_str(), value), ("s0", "c1", 11));
            }
            other => panic!("{other}"),
        }
        assert!(ScoreTable::new(vec!["s0".into()], clips(2), vec![vec![0, 5]]).is_err());
        assert!(ScoreTable::new(vec!["s0".into()], clips(2), vec![vec![1, 10]]).is_ok());
    }

    #[test]
    fn shape_checks() {
        assert!(ScoreTable::new(vec!["a".into()], clips(2), vec![vec![5]]).is_err());
        assert!(ScoreTable::new(vec!["a".into(), "a".into()], clips(1), vec![vec![5], vec![5]]).is_err());
        assert!(ScoreTable::new(vec![], clips(1), vec![]).is_err());
    }

    #[test]
    fn removing_subjects() {
        let t = ScoreTable::new(vec!["a".into(), "b".into()], clips(1), vec![vec![3], vec![4]]).unwrap();
        let r = t.without_subjects(&["a".into()]).unwrap();
        assert_eq!(r.subjects(), ["b".to_string()]);
        assert_eq!(r.column(0), vec![4.0]);
    }

    #[test]
    fn category_parsing() {
        assert_eq!("non-compression".parse::<Category>().unwrap(), Category::NonCompression);
        assert_eq!(Category::Compression.to_string(), "compression");
        assert!("other".parse::<Category>().is_err());
    }
}
