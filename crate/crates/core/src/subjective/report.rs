//! Agreement between objective scores and MOS, split by impairment family.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::correlation::{fitted_rmse, pearson, rmse, spearman};
use super::mos::MosResult;
use super::table::{Category, ClipInfo};
use crate::error::{Error, Result};

/// Label for scores of the external HDR-VDP-2 metric, supplied as input.
pub const HDR_VDP2_LABEL: &str = "HDR-VDP-2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportCategory {
    NonCompression,
    Compression,
    All,
}

impl ReportCategory {
    /// Column order of the correlation table.
    pub const ALL: [ReportCategory; 3] =
        [ReportCategory::NonCompression, ReportCategory::Compression, ReportCategory::All];

    pub fn key(self) -> &'static str {
        match self {
            ReportCategory::NonCompression => "non_compression",
            ReportCategory::Compression => "compression",
            ReportCategory::All => "all",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ReportCategory::NonCompression => "AWGN, intensity shifting, salt & pepper noise, low pass filtering",
            ReportCategory::Compression => "Compression, QP 22/27/32/37",
            ReportCategory::All => "All impairments",
        }
    }

    pub fn contains(self, category: Category) -> bool {
        match self {
            ReportCategory::NonCompression => category == Category::NonCompression,
            ReportCategory::Compression => category == Category::Compression,
            ReportCategory::All => true,
        }
    }
}

/// One metric's score per clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSeries {
    pub label: String,
    pub scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Also report RMSE after a least-squares linear mapping onto MOS.
    pub linear_fit: bool,
}

/// Statistics of one metric within one category. Cells are `None` when the
/// statistic is undefined (fewer than three clips or a constant vector).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub category: ReportCategory,
    pub n: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub rmse: Option<f64>,
    pub rmse_fitted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub label: String,
    pub cells: Vec<CategoryStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub clip: String,
    pub objective: f64,
    pub mos: f64,
    pub ci95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterSeries {
    pub label: String,
    pub category: ReportCategory,
    pub points: Vec<ScatterPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitratePoint {
    pub clip: String,
    pub qp: Option<u8>,
    pub bitrate_kbps: f64,
    pub mos: f64,
    pub ci95: f64,
}

/// MOS against bitrate for one source sequence, ordered by bitrate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitrateSeries {
    pub sequence: String,
    pub points: Vec<BitratePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rows: Vec<MetricRow>,
    pub scatter: Vec<ScatterSeries>,
    pub bitrate: Vec<BitrateSeries>,
    pub linear_fit: bool,
}

fn defined<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ConstantVector(_) | Error::TooFewSamples { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn category_stats(category: ReportCategory, x: &[f64], y: &[f64], fit: bool) -> Result<CategoryStats> {
    Ok(CategoryStats {
        category,
        n: x.len(),
        pearson: defined(pearson(x, y))?,
        spearman: defined(spearman(x, y))?,
        rmse: if x.is_empty() { None } else { Some(rmse(x, y)?) },
        rmse_fitted: if fit { defined(fitted_rmse(x, y))? } else { None },
    })
}

/// Correlation table, scatter series and MOS-rate curves.
///
/// Every clip must have a MOS and a score from every objective series;
/// scores for clips outside `clips` are rejected as well.
pub fn build_report(
    mos: &MosResult,
    objective: &[ObjectiveSeries],
    clips: &[ClipInfo],
    options: ReportOptions,
) -> Result<CorrelationReport> {
    if clips.is_empty() {
        return Err(Error::Empty("report needs at least one clip"));
    }
    let known: HashSet<&str> = clips.iter().map(|c| c.id.as_str()).collect();
    let mut mos_of = Vec::with_capacity(clips.len());
    for c in clips {
        mos_of.push(mos.get(&c.id).ok_or_else(|| Error::UnknownClip(c.id.clone()))?);
    }
    if let Some(extra) = mos.clips.iter().find(|m| !known.contains(m.clip.as_str())) {
        return Err(Error::UnknownClip(extra.clip.clone()));
    }

    let mut rows = Vec::with_capacity(objective.len());
    let mut scatter = Vec::new();
    for series in objective {
        if let Some(extra) = series.scores.keys().find(|k| !known.contains(k.as_str())) {
            return Err(Error::UnknownClip(extra.clone()));
        }
        let mut cells = Vec::with_capacity(3);
        for category in ReportCategory::ALL {
            let mut points = Vec::new();
            for (c, m) in clips.iter().zip(&mos_of) {
                if !category.contains(c.category) {
                    continue;
                }
                let objective = *series
                    .scores
                    .get(&c.id)
                    .ok_or_else(|| Error::UnknownClip(format!("{} (no {} score)", c.id, series.label)))?;
                points.push(ScatterPoint { clip: c.id.clone(), objective, mos: m.mos, ci95: m.ci95 });
            }
            let x: Vec<f64> = points.iter().map(|p| p.objective).collect();
            let y: Vec<f64> = points.iter().map(|p| p.mos).collect();
            cells.push(category_stats(category, &x, &y, options.linear_fit)?);
            scatter.push(ScatterSeries { label: series.label.clone(), category, points });
        }
        rows.push(MetricRow { label: series.label.clone(), cells });
    }

    let mut by_sequence: BTreeMap<&str, Vec<BitratePoint>> = BTreeMap::new();
    for (c, m) in clips.iter().zip(&mos_of) {
        if let (Category::Compression, Some(rate)) = (c.category, c.bitrate_kbps) {
            by_sequence.entry(&c.sequence).or_default().push(BitratePoint {
                clip: c.id.clone(),
                qp: c.qp,
                bitrate_kbps: rate,
                mos: m.mos,
                ci95: m.ci95,
            });
        }
    }
    let bitrate = by_sequence
        .into_iter()
        .map(|(sequence, mut points)| {
            points.sort_by(|a, b| a.bitrate_kbps.total_cmp(&b.bitrate_kbps));
            BitrateSeries { sequence: sequence.to_owned(), points }
        })
        .collect();

    Ok(CorrelationReport { rows, scatter, bitrate, linear_fit: options.linear_fit })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| format!("{v:.4}"))
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

impl CorrelationReport {
    /// One row per metric; Pearson, Spearman and RMSE for each category in
    /// [`ReportCategory::ALL`] order, four decimals.
    pub fn to_table_csv(&self) -> String {
        let mut out = String::from("metric");
        for c in ReportCategory::ALL {
            let k = c.key();
            write!(out, ",{k}_pearson,{k}_spearman,{k}_rmse").unwrap();
            if self.linear_fit {
                write!(out, ",{k}_rmse_fit").unwrap();
            }
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&field(&row.label));
            for c in &row.cells {
                write!(out, ",{},{},{}", cell(c.pearson), cell(c.spearman), cell(c.rmse)).unwrap();
                if self.linear_fit {
                    write!(out, ",{}", cell(c.rmse_fitted)).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    /// Long format: `metric,category,clip,objective,mos,ci95`.
    pub fn to_scatter_csv(&self) -> String {
        let mut out = String::from("metric,category,clip,objective,mos,ci95\n");
        for s in &self.scatter {
            for p in &s.points {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    field(&s.label),
                    s.category.key(),
                    field(&p.clip),
                    p.objective,
                    p.mos,
                    p.ci95
                )
                .unwrap();
            }
        }
        out
    }

    /// `sequence,qp,bitrate_kbps,clip,mos,ci95`, bitrates written as given.
    pub fn to_bitrate_csv(&self) -> String {
        let mut out = String::from("sequence,qp,bitrate_kbps,clip,mos,ci95\n");
        for s in &self.bitrate {
            for p in &s.points {
                let qp = p.qp.map(|q| q.to_string()).unwrap_or_default();
                writeln!(out, "{},{qp},{},{},{},{}", field(&s.sequence), p.bitrate_kbps, field(&p.clip), p.mos, p.ci95)
                    .unwrap();
            }
        }
        out
    }

    pub fn row(&self, label: &str) -> Option<&MetricRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::super::mos::ClipMos;
    use super::*;

    fn setup() -> (MosResult, Vec<ClipInfo>) {
        let mut clips = Vec::new();
        let mut mos = MosResult::default();
        for i in 0..8 {
            let category = if i < 4 { Category::NonCompression } else { Category::Compression };
            let mut c = ClipInfo::new(format!("c{i}"), if i % 2 == 0 { "Table" } else { "Hallway" }, category);
            if category == Category::Compression {
                c.qp = Some(22 + 5 * (i as u8 - 4));
                c.bitrate_kbps = Some(1000.0 / (i as f64));
            }
            clips.push(c);
            mos.clips.push(ClipMos { clip: format!("c{i}"), mos: 1.0 + i as f64, ci95: 0.5, n: 18 });
        }
        (mos, clips)
    }

    fn series(label: &str, f: impl Fn(f64) -> f64, clips: &[ClipInfo]) -> ObjectiveSeries {
        ObjectiveSeries {
            label: label.into(),
            scores: clips.iter().enumerate().map(|(i, c)| (c.id.clone(), f(1.0 + i as f64))).collect(),
        }
    }

    #[test]
    fn identical_vectors_correlate_perfectly() {
        let (mos, clips) = setup();
        let r = build_report(&mos, &[series("same", |v| v, &clips)], &clips, ReportOptions::default()).unwrap();
        for c in &r.rows[0].cells {
            assert!((c.pearson.unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(c.rmse, Some(0.0));
        }
        assert_eq!(r.rows[0].cells[0].n + r.rows[0].cells[1].n, r.rows[0].cells[2].n);
    }

    #[test]
    fn table_layout() {
        let (mos, clips) = setup();
        let r = build_report(
            &mos,
            &[series("VIF (PU encoding)", |v| v * 0.1, &clips)],
            &clips,
            ReportOptions { linear_fit: true },
        )
        .unwrap();
        let csv = r.to_table_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0].split(',').count(), 13);
        assert!(lines[1].starts_with("VIF (PU encoding),1.0000,1.0000,"));
        assert!(lines[1].ends_with(",0.0000"));
    }

    #[test]
    fn bitrate_series_sorted_per_sequence() {
        let (mos, clips) = setup();
        let r = build_report(&mos, &[], &clips, ReportOptions::default()).unwrap();
        assert_eq!(r.bitrate.len(), 2);
        for s in &r.bitrate {
            assert!(s.points.windows(2).all(|w| w[0].bitrate_kbps <= w[1].bitrate_kbps));
        }
    }

    #[test]
    fn unmatched_clips_are_errors() {
        let (mos, clips) = setup();
        let mut s = series("x", |v| v, &clips);
        s.scores.remove("c3");
        let err = build_report(&mos, &[s], &clips, ReportOptions::default()).unwrap_err();
        assert!(err.to_string().contains("c3"));
        let mut s = series("x", |v| v, &clips);
        s.scores.insert("zz".into(), 1.0);
        assert!(matches!(
            build_report(&mos, &[s], &clips, ReportOptions::default()),
            Err(Error::UnknownClip(c)) if c == "zz"
        ));
    }
}
