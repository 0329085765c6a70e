use anyhow::{bail, Result};
use hdrqa_core::subjective::{make_session_plan, EventKind};

use crate::analyze::read_clips;
use crate::config::{RunConfig, SessionArgs};
use crate::UsageError;

pub const PLAN_FILE: &str = "session_plan.csv";

pub fn run(config: &mut RunConfig, args: &SessionArgs) -> Result<()> {
    let clips: Vec<String> = match &args.clips {
        Some(path) => read_clips(path)?.into_iter().map(|c| c.id).collect(),
        None => args.clip_ids.clone(),
    };
    if clips.is_empty() {
        bail!(UsageError("give --clips <csv> or at least one --clip".into()));
    }
    let seed = *config.seed.get_or_insert(0);
    let plan = make_session_plan(&clips, args.dummies, seed)?;

    config.write_echo()?;
    let mut w = csv::Writer::from_path(config.out(PLAN_FILE))?;
    w.write_record(["index", "kind", "duration_s", "clip", "discard"])?;
    for (i, e) in plan.events.iter().enumerate() {
        let kind = match e.kind {
            EventKind::Reference => "reference",
            EventKind::Gray => "gray",
            EventKind::Test => "test",
            EventKind::Vote => "vote",
        };
        w.write_record([i.to_string(), kind.into(), e.duration_s.to_string(), e.clip.clone(), e.discard.to_string()])?;
    }
    w.flush()?;
    println!("{} pairs ({} training), {} s total", plan.clip_order().len(), plan.dummy_count, plan.total_seconds());
    Ok(())
}
