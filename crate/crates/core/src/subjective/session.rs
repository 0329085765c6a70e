use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REFERENCE_SECONDS: f64 = 10.0;
pub const GRAY_SECONDS: f64 = 3.0;
pub const TEST_SECONDS: f64 = 10.0;
pub const VOTE_SECONDS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Reference,
    Gray,
    Test,
    /// Gray screen shown while the subject votes.
    Vote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationEvent {
    pub kind: EventKind,
    pub duration_s: f64,
    pub clip: String,
    /// Scores collected for this pair are thrown away (training pairs).
    pub discard: bool,
}

/// Double-stimulus presentation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionPlan {
    pub events: Vec<PresentationEvent>,
    pub dummy_count: usize,
}

impl SessionPlan {
    pub fn total_seconds(&self) -> f64 {
        self.events.iter().map(|e| e.duration_s).sum()
    }

    /// Clips in presentation order, one entry per pair.
    pub fn clip_order(&self) -> Vec<(&str, bool)> {
        self.events.iter().filter(|e| e.kind == EventKind::Test).map(|e| (e.clip.as_str(), e.discard)).collect()
    }
}

fn push_pair(events: &mut Vec<PresentationEvent>, clip: &str, discard: bool) {
    for (kind, duration_s) in [
        (EventKind::Reference, REFERENCE_SECONDS),
        (EventKind::Gray, GRAY_SECONDS),
        (EventKind::Test, TEST_SECONDS),
        (EventKind::Vote, VOTE_SECONDS),
    ] {
        events.push(PresentationEvent { kind, duration_s, clip: clip.to_owned(), discard });
    }
}

/// Training pairs drawn from `clips` come first and are flagged for discard;
/// every clip then follows once in a seeded random order.
pub fn make_session_plan(clips: &[String], dummy_count: usize, seed: u64) -> Result<SessionPlan> {
    if clips.is_empty() {
        return Err(Error::Empty("session plan needs at least one clip"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::with_capacity(4 * (clips.len() + dummy_count));
    for _ in 0..dummy_count {
        let dummy = &clips[rng.random_range(0..clips.len())];
        push_pair(&mut events, dummy, true);
    }
    let mut order: Vec<&String> = clips.iter().collect();
    order.shuffle(&mut rng);
    for clip in order {
        push_pair(&mut events, clip, false);
    }
    Ok(SessionPlan { events, dummy_count })
}
