//! Sequence manifests: dataset metadata in a human-editable TOML document.
//!
//! ```toml
//! schema_version = 1
//!
//! [[sequence]]
//! name = "Playground"
//! frames = 222
//! fps = 30.0
//! width = 2048
//! height = 1080
//! environment = "outdoor"
//! motion = "fast"
//! format = "rgbe"
//! ```

use serde::{Deserialize, Serialize};

use crate::distortion::DistortionSpec;
use crate::error::{Error, Result};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Environment {
    Indoor,
    Outdoor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motion {
    Slow,
    Intermediate,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceFormat {
    Rgbe,
    Yuv12,
}

/// How a derived sequence was produced from its parent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lineage {
    pub parent: String,
    pub distortion: DistortionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Salt & pepper only: pixels replaced in every frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified_pixels_per_frame: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceManifest {
    pub name: String,
    pub frames: u32,
    pub fps: f64,
    pub width: u32,
    pub height: u32,
    pub environment: Environment,
    pub motion: Motion,
    pub format: SourceFormat,
    /// Location of the frames (directory of `.hdr` files or a raw `.yuv`),
    /// relative to the manifest file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lineage: Option<Lineage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qp: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitrate_kbps: Option<f64>,
}

impl SequenceManifest {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidManifest(format!("{}: {msg}", self.name)));
        if self.name.trim().is_empty() {
            return Err(Error::InvalidManifest("sequence with empty name".into()));
        }
        if self.frames == 0 {
            return fail("frames must be > 0".into());
        }
        if !(self.fps > 0.0) || !self.fps.is_finite() {
            return fail(format!("fps must be > 0, got {}", self.fps));
        }
        if self.width == 0 || self.height == 0 {
            return fail("resolution must be non-zero".into());
        }
        if self.format == SourceFormat::Yuv12 && (!self.width.is_multiple_of(2) || !self.height.is_multiple_of(2)) {
            return fail("4:2:0 sequences need even width and height".into());
        }
        let compression_qp = match &self.lineage {
            Some(Lineage { distortion: DistortionSpec::Compression { qp }, .. }) => Some(*qp),
            _ => None,
        };
        match (compression_qp, self.qp) {
            (Some(a), Some(b)) if a != b => return fail(format!("qp {b} disagrees with lineage qp {a}")),
            (Some(_), None) => return fail("compression lineage requires qp".into()),
            (None, Some(_)) => return fail("qp is only valid for compression lineage".into()),
            _ => {}
        }
        if let Some(rate) = self.bitrate_kbps {
            if !(rate > 0.0) || !rate.is_finite() {
                return fail(format!("bitrate must be > 0, got {rate}"));
            }
        }
        if let Some(lineage) = &self.lineage {
            lineage.distortion.validate(lineage.seed)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, rename = "sequence")]
    pub sequences: Vec<SequenceManifest>,
}

impl DatasetManifest {
    pub fn new(name: Option<String>, sequences: Vec<SequenceManifest>) -> Self {
        Self { schema_version: MANIFEST_SCHEMA_VERSION, name, sequences }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let manifest: DatasetManifest = toml::from_str(text).map_err(|e| Error::InvalidManifest(e.to_string()))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(Error::InvalidManifest(format!(
                "unsupported schema_version {} (expected {MANIFEST_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for seq in &self.sequences {
            seq.validate()?;
            if !seen.insert(seq.name.as_str()) {
                return Err(Error::InvalidManifest(format!("duplicate sequence `{}`", seq.name)));
            }
        }
        Ok(())
    }

    pub fn find(&self, name: &str) -> Option<&SequenceManifest> {
        self.sequences.iter().find(|s| s.name == name)
    }

    /// Bitrate of the compressed variant of `sequence` at `qp`, if listed.
    pub fn bitrate(&self, sequence: &str, qp: u8) -> Option<f64> {
        self.sequences
            .iter()
            .filter(|s| s.qp == Some(qp))
            .find(|s| s.lineage.as_ref().is_some_and(|l| l.parent == sequence))
            .and_then(|s| s.bitrate_kbps)
    }
}

/// Source sequences of the DML-HDR subset used for the subjective study:
/// (name, motion, frames, environment).
pub const DML_HDR_SEQUENCES: [(&str, Motion, u32, Environment); 4] = [
    ("Playground", Motion::Fast, 222, Environment::Outdoor),
    ("Table", Motion::Slow, 261, Environment::Indoor),
    ("Christmas", Motion::Intermediate, 317, Environment::Indoor),
    ("Hallway", Motion::Intermediate, 253, Environment::Indoor),
];

/// Measured HEVC bitrates (kb/s) per (sequence, QP). "Tree" has no entry in
/// the sequence table, so it appears only here.
pub const DML_HDR_BITRATES: [(&str, u8, f64); 16] = [
    ("Playground", 22, 4190.2659),
    ("Playground", 27, 1784.2595),
    ("Playground", 32, 877.7816),
    ("Playground", 37, 469.7524),
    ("Table", 22, 2187.9218),
    ("Table", 27, 1087.1641),
    ("Table", 32, 618.5536),
    ("Table", 37, 379.0299),
    ("Hallway", 22, 1092.4658),
    ("Hallway", 27, 290.2119),
    ("Hallway", 32, 311.6206),
    ("Hallway", 37, 182.0746),
    ("Tree", 22, 3141.0672),
    ("Tree", 27, 1022.0334),
    ("Tree", 32, 843.1776),
    ("Tree", 37, 488.2736),
];

/// All sequences share this capture geometry and rate.
pub const DML_HDR_RESOLUTION: (u32, u32) = (2048, 1080);
pub const DML_HDR_FPS: f64 = 30.0;

/// Built-in manifest for the dataset: the four RGBE sources plus one 12-bit
/// YUV entry per encoded (sequence, QP) whose parent is a listed source.
pub fn dml_hdr_catalog() -> DatasetManifest {
    let (width, height) = DML_HDR_RESOLUTION;
    let mut sequences: Vec<SequenceManifest> = DML_HDR_SEQUENCES
        .iter()
        .map(|&(name, motion, frames, environment)| SequenceManifest {
            name: name.to_string(),
            frames,
            fps: DML_HDR_FPS,
            width,
            height,
            environment,
            motion,
            format: SourceFormat::Rgbe,
            path: None,
            lineage: None,
            qp: None,
            bitrate_kbps: None,
        })
        .collect();
    for &(parent, qp, rate) in &DML_HDR_BITRATES {
        let Some(src) = sequences.iter().find(|s| s.name == parent).cloned() else {
            continue;
        };
        sequences.push(SequenceManifest {
            name: format!("{parent}_qp{qp}"),
            format: SourceFormat::Yuv12,
            lineage: Some(Lineage {
                parent: parent.to_string(),
                distortion: DistortionSpec::Compression { qp },
                seed: None,
                modified_pixels_per_frame: None,
            }),
            qp: Some(qp),
            bitrate_kbps: Some(rate),
            ..src
        });
    }
    DatasetManifest::new(Some("DML-HDR".into()), sequences)
}
