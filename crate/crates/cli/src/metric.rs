use std::fs;

use anyhow::{Context, Result};
use hdrqa_core::adapters::{Adapter, DisplayModel, ExposureParams, MeAdapter, PuAdapter, PuTransfer};
use hdrqa_core::hdr_io::NormalizeMode;
use hdrqa_core::{Metric, MetricResult};
use serde::Serialize;

use crate::config::{digest_hex, params_hash, MetricArgs, RunConfig};
use crate::seqio::{load_sequence, stem};

pub const SCORES_FILE: &str = "scores.csv";
pub const OBJECTIVE_FILE: &str = "objective.csv";

/// Everything that influences one (metric, adapter) score; hashed into the
/// `params_hash` column.
#[derive(Serialize)]
struct ScoreParams<'a> {
    metric: Metric,
    adapter: Adapter,
    display: Option<&'a DisplayModel>,
    normalize: Option<NormalizeMode>,
    pu_table_sha: Option<&'a str>,
    exposures: Option<&'a ExposureParams>,
}

fn normalize_mode(s: &str) -> NormalizeMode {
    match s {
        "frame" => NormalizeMode::Frame,
        _ => NormalizeMode::Sequence,
    }
}

pub fn run(config: &RunConfig, args: &MetricArgs) -> Result<()> {
    let reference = load_sequence(&args.reference, args.width, args.height).context("reference")?;
    let distorted = load_sequence(&args.distorted, args.width, args.height).context("distorted")?;

    let model = DisplayModel { peak: args.peak, contrast: args.contrast, black_level: args.black };
    model.validate()?;
    let (transfer, table_sha) = match &args.pu_table {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let t = PuTransfer::from_text(&text).with_context(|| path.display().to_string())?;
            (t, Some(digest_hex(text.as_bytes())))
        }
        None => (PuTransfer::built_in(), None),
    };
    let pu = PuAdapter { model, transfer, normalize: normalize_mode(&args.normalize) };
    let me = MeAdapter {
        params: ExposureParams { count: args.exposures, gamma: args.gamma, anchor_percentile: args.anchor_percentile },
    };

    let mut results: Vec<(Metric, Adapter, MetricResult, String)> = Vec::new();
    for &adapter in &args.adapter {
        for &metric in &args.metric {
            let result = match adapter {
                Adapter::Pu => pu.evaluate(&reference, &distorted, metric),
                Adapter::Me => me.evaluate(&reference, &distorted, metric),
            }
            .with_context(|| format!("{metric} with {adapter} adapter"))?;
            let params = ScoreParams {
                metric,
                adapter,
                display: (adapter == Adapter::Pu).then_some(&pu.model),
                normalize: (adapter == Adapter::Pu).then_some(pu.normalize),
                pu_table_sha: if adapter == Adapter::Pu { table_sha.as_deref() } else { None },
                exposures: (adapter == Adapter::Me).then_some(&me.params),
            };
            results.push((metric, adapter, result, params_hash(&params)?));
        }
    }

    config.write_echo()?;
    let mut w = csv::Writer::from_path(config.out(SCORES_FILE))?;
    w.write_record(["frame", "metric", "adapter", "score", "params_hash"])?;
    for (metric, adapter, result, hash) in &results {
        for (i, s) in result.per_frame.iter().enumerate() {
            w.write_record([&i.to_string(), &metric.to_string(), &adapter.to_string(), &s.to_string(), hash])?;
        }
        w.write_record(["mean", &metric.to_string(), &adapter.to_string(), &result.sequence.to_string(), hash])?;
    }
    w.flush()?;

    let clip = args.clip.clone().unwrap_or_else(|| stem(&args.distorted));
    let mut w = csv::Writer::from_path(config.out(OBJECTIVE_FILE))?;
    w.write_record(["clip", "metric", "score"])?;
    for (metric, adapter, result, _) in &results {
        w.write_record([&clip, &adapter.report_label(*metric), &result.sequence.to_string()])?;
        println!("{clip}: {} = {:.6}", adapter.report_label(*metric), result.sequence);
    }
    w.flush()?;
    Ok(())
}
