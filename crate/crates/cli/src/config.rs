//! Command arguments, doubling as the serialized run configuration that
//! every command echoes into its output directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use hdrqa_core::adapters::Adapter;
use hdrqa_core::Metric;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const RUN_CONFIG_VERSION: u32 = 1;
pub const ECHO_FILE: &str = "run.toml";

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for stochastic steps. Recorded in the run echo.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "HDRQA_THREADS")]
    pub threads: Option<usize>,
    /// Directory receiving all outputs.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

pub const DEFAULT_OUT_DIR: &str = "hdrqa-out";

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DistortArgs {
    /// Directory of .hdr frames, a single .hdr file, or a raw 12-bit .yuv.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = ["awgn", "intensity_shift", "salt_pepper", "lowpass", "compression"])]
    pub kind: String,
    /// AWGN standard deviation in normalized units.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Intensity shift or salt & pepper fraction.
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Low-pass kernel size.
    #[arg(long)]
    pub size: Option<usize>,
    /// Low-pass kernel sigma.
    #[arg(long)]
    pub lpf_sigma: Option<f64>,
    #[arg(long)]
    pub qp: Option<u8>,
    /// Frame geometry for .yuv input.
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Manifest describing the input; its entry seeds the derived manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Name of the input sequence inside `--manifest`.
    #[arg(long)]
    pub sequence: Option<String>,
    /// Name of the derived sequence (default `<parent>_<kind>`).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MetricArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub distorted: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "psnr,ssim,vif")]
    pub metric: Vec<Metric>,
    #[arg(long, value_delimiter = ',', default_value = "pu,me")]
    pub adapter: Vec<Adapter>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Display peak luminance, cd/m².
    #[arg(long, default_value_t = hdrqa_core::adapters::DEFAULT_PEAK_NITS)]
    pub peak: f64,
    #[arg(long, default_value_t = hdrqa_core::adapters::DEFAULT_CONTRAST)]
    pub contrast: f64,
    /// Black level, cd/m² (default peak / contrast).
    #[arg(long)]
    pub black: Option<f64>,
    #[arg(long, default_value = "sequence", value_parser = ["sequence", "frame"])]
    pub normalize: String,
    /// Two-column text table (log10 cd/m², PU value) replacing the built-in curve.
    #[arg(long)]
    pub pu_table: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub exposures: usize,
    #[arg(long, default_value_t = 2.2)]
    pub gamma: f64,
    /// Percentile of nonzero reference luminance mapped to white by the
    /// brightest exposure.
    #[arg(long, default_value_t = 1.0)]
    pub anchor_percentile: f64,
    /// Clip id used in the objective-score CSV (default: distorted file stem).
    #[arg(long)]
    pub clip: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DisplayArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, default_value_t = hdrqa_core::display::DEFAULT_KEY)]
    pub key: f64,
    #[arg(long, default_value_t = hdrqa_core::display::DEFAULT_PSF_SIZE)]
    pub psf_size: usize,
    #[arg(long, default_value_t = hdrqa_core::display::DEFAULT_PSF_SIGMA)]
    pub psf_sigma: f64,
    #[arg(long, default_value_t = hdrqa_core::adapters::DEFAULT_PEAK_NITS)]
    pub peak: f64,
    #[arg(long, default_value_t = hdrqa_core::adapters::DEFAULT_CONTRAST)]
    pub contrast: f64,
    #[arg(long)]
    pub black: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    /// Subjects × clips score matrix.
    #[arg(long)]
    pub scores: PathBuf,
    /// Clip metadata: clip,sequence,impairment,category,qp,bitrate_kbps.
    #[arg(long)]
    pub clips: PathBuf,
    /// Long-format objective scores (clip,metric,score); repeatable.
    #[arg(long, required = true)]
    pub objective: Vec<PathBuf>,
    /// Dataset manifest supplying bitrates of compressed clips.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Also report RMSE after a linear fit of objective scores onto MOS.
    #[arg(long)]
    pub linear_fit: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SessionArgs {
    /// Clip metadata CSV; its `clip` column lists the clips to present.
    #[arg(long)]
    pub clips: Option<PathBuf>,
    /// Clip id; repeatable, used when no CSV is given.
    #[arg(long = "clip")]
    pub clip_ids: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub dummies: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ManifestCommand {
    /// Parse and validate a dataset manifest.
    Validate { path: PathBuf },
    /// Write the built-in catalog of source and compressed sequences.
    Catalog,
}

/// Work a command performs; serialized into the run echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Job {
    Distort(DistortArgs),
    Metric(MetricArgs),
    DisplaySim(DisplayArgs),
    Analyze(AnalyzeArgs),
    SessionPlan(SessionArgs),
    ManifestCatalog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
    pub job: Job,
}

impl RunConfig {
    pub fn new(global: &GlobalArgs, job: Job) -> Self {
        Self {
            schema_version: RUN_CONFIG_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            seed: global.seed,
            threads: global.threads,
            out_dir: global.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            job,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: Self = toml::from_str(&text)
            .map_err(|e| hdrqa_core::Error::InvalidManifest(format!("{}: {e}", path.display())))?;
        if config.schema_version != RUN_CONFIG_VERSION {
            return Err(hdrqa_core::Error::InvalidManifest(format!(
                "{}: unsupported run config schema {}",
                path.display(),
                config.schema_version
            ))
            .into());
        }
        Ok(config)
    }

    pub fn write_echo(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir).with_context(|| format!("creating {}", self.out_dir.display()))?;
        let text = toml::to_string_pretty(self).context("serializing run config")?;
        let path = self.out_dir.join(ECHO_FILE);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// First 16 hex digits of the SHA-256 of a value's TOML form.
pub fn params_hash<T: Serialize>(value: &T) -> Result<String> {
    let text = toml::to_string(value).context("serializing parameters")?;
    Ok(digest_hex(text.as_bytes()))
}

pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}
