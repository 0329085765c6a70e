//! Full-reference quality kernels on single-channel code planes, plus
//! per-sequence aggregation.

mod psnr;
mod ssim;
mod vif;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdr_io::CodePlane;

pub use psnr::{mse, psnr, psnr_from_mse, PSNR_CAP_DB};
pub use ssim::{ssim, ssim_index, ssim_map, ssim_with, SsimParams};
pub use vif::{
    vif, vif_components, vif_window, window_information, VifComponents, VifParams, VIF_MIN_SIZE, VIF_SCALES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Psnr,
    Ssim,
    Vif,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Psnr, Metric::Ssim, Metric::Vif];

    /// Score of a plane compared with itself.
    pub fn identity_value(self) -> f64 {
        match self {
            Metric::Psnr => PSNR_CAP_DB,
            Metric::Ssim | Metric::Vif => 1.0,
        }
    }

    /// `dynamic_range` is the PSNR peak and the SSIM `L`; VIF ignores it.
    pub fn evaluate(self, reference: &CodePlane, distorted: &CodePlane, dynamic_range: f64) -> Result<f64> {
        match self {
            Metric::Psnr => psnr(reference, distorted, dynamic_range),
            Metric::Ssim => ssim(reference, distorted, dynamic_range),
            Metric::Vif => vif(reference, distorted),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Psnr => "PSNR",
            Metric::Ssim => "SSIM",
            Metric::Vif => "VIF",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Psnr => "psnr",
            Metric::Ssim => "ssim",
            Metric::Vif => "vif",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psnr" => Ok(Metric::Psnr),
            "ssim" => Ok(Metric::Ssim),
            "vif" => Ok(Metric::Vif),
            other => Err(Error::InvalidParameter { name: "metric", reason: format!("unknown metric `{other}`") }),
        }
    }
}

/// Scores of one metric over a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub metric: Metric,
    pub per_frame: Vec<f64>,
    /// Arithmetic mean of `per_frame`.
    pub sequence: f64,
    pub dynamic_range: f64,
}

impl MetricResult {
    pub fn new(metric: Metric, per_frame: Vec<f64>, dynamic_range: f64) -> Result<Self> {
        let sequence = aggregate(&per_frame)?;
        Ok(Self { metric, per_frame, sequence, dynamic_range })
    }
}

/// Arithmetic mean of per-frame scores.
pub fn aggregate(per_frame: &[f64]) -> Result<f64> {
    if per_frame.is_empty() {
        return Err(Error::Empty("no per-frame scores to aggregate"));
    }
    Ok(per_frame.iter().sum::<f64>() / per_frame.len() as f64)
}
