use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hdrqa_core::hdr_io::DatasetManifest;
use hdrqa_core::subjective::{
    build_report, mos, screen_outliers, Category, ClipInfo, CorrelationReport, ObjectiveSeries, ReportCategory,
    ReportOptions, ScoreTable, HDR_VDP2_LABEL,
};
use hdrqa_core::Metric;
use serde::Deserialize;

use crate::config::{AnalyzeArgs, RunConfig};
use crate::svg::{self, Panel, Series};
use crate::DataError;

#[derive(Debug, Deserialize)]
struct ClipRow {
    clip: String,
    sequence: String,
    #[serde(default)]
    impairment: Option<String>,
    category: String,
    #[serde(default)]
    qp: Option<u8>,
    #[serde(default)]
    bitrate_kbps: Option<f64>,
}

pub fn read_clips(path: &Path) -> Result<Vec<ClipInfo>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut clips = Vec::new();
    for (i, row) in reader.deserialize::<ClipRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| DataError(format!("{} line {line}: {e}", path.display())))?;
        let category: Category = row
            .category
            .parse()
            .map_err(|e| DataError(format!("{} line {line}, column category: {e}", path.display())))?;
        let mut info = ClipInfo::new(row.clip, row.sequence, category);
        if let Some(kind) = row.impairment.filter(|s| !s.is_empty()) {
            info.impairment = kind;
        }
        info.qp = row.qp;
        info.bitrate_kbps = row.bitrate_kbps;
        clips.push(info);
    }
    Ok(clips)
}

/// Scores CSV: a header of clip ids (optionally led by a `subject` column),
/// then one row of integer scores per subject.
fn read_scores(path: &Path, clips: &[ClipInfo]) -> Result<ScoreTable> {
    let name = path.display();
    let mut reader =
        csv::ReaderBuilder::new().flexible(true).from_path(path).with_context(|| format!("reading {name}"))?;
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    let has_ids = header.first().is_some_and(|h| h.eq_ignore_ascii_case("subject"));
    let clip_ids = &header[usize::from(has_ids)..];

    let by_id: HashMap<&str, &ClipInfo> = clips.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut ordered = Vec::with_capacity(clip_ids.len());
    for (j, id) in clip_ids.iter().enumerate() {
        let info = by_id.get(id.as_str()).ok_or_else(|| {
            DataError(format!("{name} line 1, column {}: clip `{id}` missing from clip metadata", j + 1))
        })?;
        ordered.push((*info).clone());
    }

    let (mut subjects, mut rows) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| DataError(format!("{name} line {line}: {e}")))?;
        let cells: Vec<&str> = record.iter().map(str::trim).collect();
        if cells.len() != header.len() {
            bail!(DataError(format!("{name} line {line}: expected {} columns, found {}", header.len(), cells.len())));
        }
        let (id, values) =
            if has_ids { (cells[0].to_owned(), &cells[1..]) } else { (format!("subject{}", i + 1), &cells[..]) };
        let mut row = Vec::with_capacity(values.len());
        for (j, cell) in values.iter().enumerate() {
            let col = j + 1 + usize::from(has_ids);
            if cell.is_empty() {
                bail!(DataError(format!("{name} line {line}, column {col} (clip {}): missing score", clip_ids[j])));
            }
            let v: i64 = cell.parse().map_err(|_| {
                DataError(format!(
                    "{name} line {line}, column {col} (clip {}): `{cell}` is not an integer",
                    clip_ids[j]
                ))
            })?;
            row.push(v);
        }
        subjects.push(id);
        rows.push(row);
    }
    Ok(ScoreTable::new(subjects, ordered, rows)?)
}

/// Report order of the seven metric/method rows; unknown labels follow in
/// order of appearance.
fn label_rank(label: &str) -> usize {
    use hdrqa_core::adapters::Adapter;
    let mut known = vec![HDR_VDP2_LABEL.to_owned()];
    for adapter in [Adapter::Pu, Adapter::Me] {
        known.extend(Metric::ALL.iter().map(|&m| adapter.report_label(m)));
    }
    known.iter().position(|k| k == label).unwrap_or(known.len())
}

fn read_objective(paths: &[std::path::PathBuf]) -> Result<Vec<ObjectiveSeries>> {
    let mut series: Vec<ObjectiveSeries> = Vec::new();
    for path in paths {
        let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
        for (i, row) in reader.deserialize::<(String, String, f64)>().enumerate() {
            let (clip, label, score) = row.map_err(|e| DataError(format!("{} line {}: {e}", path.display(), i + 2)))?;
            let idx = match series.iter().position(|s| s.label == label) {
                Some(k) => k,
                None => {
                    series.push(ObjectiveSeries { label: label.clone(), scores: BTreeMap::new() });
                    series.len() - 1
                }
            };
            if series[idx].scores.insert(clip.clone(), score).is_some() {
                bail!(DataError(format!(
                    "{} line {}: duplicate score for clip `{clip}`, metric `{label}`",
                    path.display(),
                    i + 2
                )));
            }
        }
    }
    series.sort_by_key(|s| label_rank(&s.label));
    Ok(series)
}

fn apply_manifest_bitrates(clips: &mut [ClipInfo], path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest = DatasetManifest::from_toml(&text).with_context(|| path.display().to_string())?;
    for c in clips.iter_mut().filter(|c| c.category == Category::Compression) {
        let Some(qp) = c.qp else { continue };
        if let Some(rate) = manifest.bitrate(&c.sequence, qp) {
            if c.bitrate_kbps.is_some_and(|r| r != rate) {
                log::warn!("clip {}: bitrate {:?} replaced by manifest value {rate}", c.id, c.bitrate_kbps);
            }
            c.bitrate_kbps = Some(rate);
        }
    }
    Ok(())
}

fn write_svgs(config: &RunConfig, report: &CorrelationReport) -> Result<()> {
    for category in ReportCategory::ALL {
        let panels: Vec<Panel> = report
            .scatter
            .iter()
            .filter(|s| s.category == category)
            .map(|s| Panel {
                title: s.label.clone(),
                x_label: "objective score".into(),
                y_label: "MOS".into(),
                series: vec![Series {
                    name: s.label.clone(),
                    points: s.points.iter().map(|p| (p.objective, p.mos, p.ci95)).collect(),
                }],
                lines: false,
            })
            .collect();
        let title = format!("MOS versus objective score: {}", category.title());
        fs::write(config.out(&format!("scatter_{}.svg", category.key())), svg::render(&title, &panels))?;
    }
    let rate = Panel {
        title: "MOS versus bitrate".into(),
        x_label: "bitrate (kb/s)".into(),
        y_label: "MOS".into(),
        series: report
            .bitrate
            .iter()
            .map(|b| Series {
                name: b.sequence.clone(),
                points: b.points.iter().map(|p| (p.bitrate_kbps, p.mos, p.ci95)).collect(),
            })
            .collect(),
        lines: true,
    };
    fs::write(config.out("mos_bitrate.svg"), svg::render("MOS versus bitrate", &[rate]))?;
    Ok(())
}

pub fn run(config: &RunConfig, args: &AnalyzeArgs) -> Result<()> {
    let mut clips = read_clips(&args.clips)?;
    if let Some(m) = &args.manifest {
        apply_manifest_bitrates(&mut clips, m)?;
    }
    let table = read_scores(&args.scores, &clips)?;
    let objective = read_objective(&args.objective)?;

    let screen = screen_outliers(&table)?;
    let kept = table.without_subjects(&screen.rejected)?;
    let mos = mos(&kept);
    let report = build_report(&mos, &objective, kept.clips(), ReportOptions { linear_fit: args.linear_fit })?;

    config.write_echo()?;
    let mut w = csv::Writer::from_path(config.out("outliers.csv"))?;
    w.write_record(["subject", "p", "q", "rejected"])?;
    for d in &screen.subjects {
        w.write_record([d.subject.clone(), d.p.to_string(), d.q.to_string(), d.rejected.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(config.out("screening.csv"))?;
    w.write_record(["clip", "mean", "std", "kurtosis", "multiplier", "lower", "upper"])?;
    for c in &screen.clips {
        let k = c.kurtosis.map(|k| k.to_string()).unwrap_or_default();
        w.write_record([
            c.clip.clone(),
            c.mean.to_string(),
            c.std.to_string(),
            k,
            c.multiplier.to_string(),
            c.lower.to_string(),
            c.upper.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(config.out("mos.csv"))?;
    w.write_record(["clip", "mos", "ci95", "n"])?;
    for m in &mos.clips {
        w.write_record([m.clip.clone(), m.mos.to_string(), m.ci95.to_string(), m.n.to_string()])?;
    }
    w.flush()?;

    fs::write(config.out("correlation.csv"), report.to_table_csv())?;
    fs::write(config.out("scatter.csv"), report.to_scatter_csv())?;
    fs::write(config.out("mos_bitrate.csv"), report.to_bitrate_csv())?;
    write_svgs(config, &report)?;

    println!("{} outliers", screen.rejected.len());
    if screen.low_confidence {
        println!("warning: single-clip table, screening is low-confidence");
    }
    for s in &screen.rejected {
        println!("rejected subject: {s}");
    }
    print!("{}", report.to_table_csv());
    Ok(())
}
