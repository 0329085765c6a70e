//! Running LDR metrics on HDR content.
//!
//! Two routes are provided. The PU route maps both streams to absolute
//! display luminance, encodes it perceptually uniformly and runs the metric
//! on the code values. The multi-exposure route renders each frame at
//! several virtual exposures, runs the metric per exposure and averages.

mod display_model;
mod exposure;
mod pu;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use display_model::{DisplayModel, DEFAULT_CONTRAST, DEFAULT_PEAK_NITS};
pub use exposure::{expose_value, multi_exposure, ExposureParams, ExposureSet, LdrPlane};
pub use pu::{
    cone_threshold_log10, pu_encode, PuEncoded, PuTransfer, PU_LDR_BLACK, PU_LDR_WHITE, PU_MAX_LOG10, PU_MIN_LOG10,
    PU_NODES_PER_DECADE,
};

use crate::error::{Error, Result};
use crate::hdr_io::{normalize_with, rgb_to_luminance, HdrFrame, LumaPlane, LumaScale, NormalizeMode};
use crate::metrics::{aggregate, Metric, MetricResult};

/// Dynamic range used for metrics on 8-bit exposures.
pub const LDR_PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adapter {
    Pu,
    Me,
}

impl Adapter {
    pub const ALL: [Adapter; 2] = [Adapter::Pu, Adapter::Me];

    /// Column label used in reports, e.g. "VIF (PU encoding)".
    pub fn report_label(self, metric: Metric) -> String {
        match self {
            Adapter::Pu => format!("{} (PU encoding)", metric.label()),
            Adapter::Me => format!("{} (MultiExposure)", metric.label()),
        }
    }
}

impl fmt::Display for Adapter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adapter::Pu => "pu",
            Adapter::Me => "me",
        })
    }
}

impl FromStr for Adapter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pu" => Ok(Adapter::Pu),
            "me" | "multi_exposure" => Ok(Adapter::Me),
            other => Err(Error::InvalidParameter { name: "adapter", reason: format!("unknown adapter `{other}`") }),
        }
    }
}

fn check_sequences(reference: &[HdrFrame], distorted: &[HdrFrame]) -> Result<()> {
    if reference.is_empty() {
        return Err(Error::Empty("reference sequence"));
    }
    if reference.len() != distorted.len() {
        return Err(Error::FrameCountMismatch { reference: reference.len(), distorted: distorted.len() });
    }
    reference.iter().zip(distorted).try_for_each(|(r, d)| r.same_dimensions(d))
}

/// PU route configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PuAdapter {
    pub model: DisplayModel,
    pub transfer: PuTransfer,
    pub normalize: NormalizeMode,
}

impl Default for PuAdapter {
    fn default() -> Self {
        Self { model: DisplayModel::default(), transfer: PuTransfer::built_in(), normalize: NormalizeMode::Sequence }
    }
}

impl PuAdapter {
    /// `PU(peak) - PU(black)`: the span of code values a display can emit.
    pub fn dynamic_range(&self) -> f64 {
        self.transfer.encode(self.model.peak).0 - self.transfer.encode(self.model.black()).0
    }

    /// Normalization scales taken from the reference; the distorted stream is
    /// divided by the same values so that brightness changes stay visible.
    fn reference_scales(&self, reference: &[LumaPlane]) -> Result<Vec<LumaScale>> {
        let frame_max = |p: &LumaPlane| {
            let m = p.max();
            if m > 0.0 {
                Ok(LumaScale(m))
            } else {
                Err(Error::ZeroPlane)
            }
        };
        match self.normalize {
            NormalizeMode::Frame => reference.iter().map(frame_max).collect(),
            NormalizeMode::Sequence => {
                let m = reference.iter().map(LumaPlane::max).fold(0.0, f64::max);
                if !(m > 0.0) {
                    return Err(Error::ZeroPlane);
                }
                Ok(vec![LumaScale(m); reference.len()])
            }
        }
    }

    /// PU-encoded plane of one frame under a given normalization scale.
    pub fn encode_frame(&self, frame: &HdrFrame, scale: LumaScale) -> Result<crate::hdr_io::CodePlane> {
        let rel = normalize_with(&rgb_to_luminance(frame), scale);
        let abs = self.model.to_absolute_luminance(&rel)?;
        Ok(pu_encode(&abs, &self.transfer)?.plane)
    }

    pub fn evaluate(&self, reference: &[HdrFrame], distorted: &[HdrFrame], metric: Metric) -> Result<MetricResult> {
        check_sequences(reference, distorted)?;
        self.model.validate()?;
        let ref_luma: Vec<LumaPlane> = reference.iter().map(rgb_to_luminance).collect();
        let scales = self.reference_scales(&ref_luma)?;
        let range = self.dynamic_range();
        let per_frame = reference
            .par_iter()
            .zip(distorted)
            .zip(&scales)
            .map(|((r, d), &scale)| {
                let pr = self.encode_frame(r, scale)?;
                let pd = self.encode_frame(d, scale)?;
                metric.evaluate(&pr, &pd, range)
            })
            .collect::<Result<Vec<f64>>>()?;
        MetricResult::new(metric, per_frame, range)
    }
}

/// PU-encoded metric with the default display model and sequence-level
/// normalization.
pub fn pu_metric(
    reference: &[HdrFrame],
    distorted: &[HdrFrame],
    metric: Metric,
    model: &DisplayModel,
    transfer: &PuTransfer,
) -> Result<MetricResult> {
    PuAdapter { model: *model, transfer: transfer.clone(), normalize: NormalizeMode::Sequence }
        .evaluate(reference, distorted, metric)
}

/// Multi-exposure metric: per frame, the mean over exposures of the metric
/// between the two exposed planes (peak 255). The same exposure set must be
/// used for both streams; derive it from the reference.
///
/// Exposures at which VIF is undefined (the reference exposure is flat,
/// e.g. fully saturated) are left out of the mean; the frame fails only if
/// no exposure yields a score.
pub fn me_metric(
    reference: &[HdrFrame],
    distorted: &[HdrFrame],
    metric: Metric,
    exposures: &ExposureSet,
) -> Result<MetricResult> {
    check_sequences(reference, distorted)?;
    let per_frame = reference
        .par_iter()
        .zip(distorted)
        .map(|(r, d)| {
            let mut scores = Vec::with_capacity(exposures.len());
            for (er, ed) in multi_exposure(r, exposures).iter().zip(multi_exposure(d, exposures)) {
                match metric.evaluate(&er.to_code_plane(), &ed.to_code_plane(), LDR_PEAK) {
                    Ok(v) => scores.push(v),
                    Err(Error::VifUndefined) => continue,
                    Err(e) => return Err(e),
                }
            }
            if scores.is_empty() {
                return Err(Error::VifUndefined);
            }
            aggregate(&scores)
        })
        .collect::<Result<Vec<f64>>>()?;
    MetricResult::new(metric, per_frame, LDR_PEAK)
}

/// Multi-exposure route that derives its exposures from the reference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeAdapter {
    pub params: ExposureParams,
}

impl MeAdapter {
    pub fn exposures(&self, reference: &[HdrFrame]) -> Result<ExposureSet> {
        ExposureSet::derive(reference, &self.params)
    }

    pub fn evaluate(&self, reference: &[HdrFrame], distorted: &[HdrFrame], metric: Metric) -> Result<MetricResult> {
        let set = self.exposures(reference)?;
        me_metric(reference, distorted, metric, &set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(w: usize, h: usize) -> HdrFrame {
        HdrFrame::from_fn(w, h, |x, y| {
            let base = 0.05 + 0.5 * ((x as f64 * 0.3).sin() * (y as f64 * 0.2).cos()).abs();
            let highlight = if (x / 8 + y / 8) % 5 == 0 { 20.0 } else { 1.0 };
            [base * highlight, base * highlight * 0.8, base * highlight * 0.6]
        })
        .unwrap()
    }

    #[test]
    fn identity_values() {
        let seq = vec![scene(48, 48), scene(48, 48)];
        for metric in Metric::ALL {
            let pu = PuAdapter::default().evaluate(&seq, &seq, metric).unwrap();
            let me = MeAdapter::default().evaluate(&seq, &seq, metric).unwrap();
            for r in [pu, me] {
                assert!((r.sequence - metric.identity_value()).abs() < 1e-6, "{metric}: {}", r.sequence);
            }
        }
    }

    #[test]
    fn pu_dynamic_range_is_display_span() {
        let a = PuAdapter::default();
        let t = &a.transfer;
        assert_eq!(a.dynamic_range(), t.encode(2700.0).0 - t.encode(1.35).0);
        assert!(a.dynamic_range() > 255.0);
    }

    #[test]
    fn common_radiance_scale_leaves_pu_scores_unchanged() {
        let r = vec![scene(48, 48)];
        let d: Vec<HdrFrame> = r
            .iter()
            .map(|f| HdrFrame::new(f.width(), f.height(), f.data().iter().map(|v| v * 0.9).collect()).unwrap())
            .collect();
        let scale = |s: &[HdrFrame]| -> Vec<HdrFrame> {
            s.iter()
                .map(|f| HdrFrame::new(f.width(), f.height(), f.data().iter().map(|v| v * 8.0).collect()).unwrap())
                .collect()
        };
        for metric in Metric::ALL {
            let a = pu_metric(&r, &d, metric, &DisplayModel::default(), &PuTransfer::built_in()).unwrap();
            let b =
                pu_metric(&scale(&r), &scale(&d), metric, &DisplayModel::default(), &PuTransfer::built_in()).unwrap();
            assert_eq!(a.sequence, b.sequence);
        }
    }

    #[test]
    fn mismatched_sequences_are_rejected() {
        let r = vec![scene(48, 48)];
        assert!(matches!(PuAdapter::default().evaluate(&r, &[], Metric::Psnr), Err(Error::FrameCountMismatch { .. })));
        assert!(matches!(
            MeAdapter::default().evaluate(&r, &[scene(48, 40)], Metric::Psnr),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adapter_labels() {
        assert_eq!(Adapter::Pu.report_label(Metric::Vif), "VIF (PU encoding)");
        assert_eq!(Adapter::Me.report_label(Metric::Psnr), "PSNR (MultiExposure)");
        assert_eq!("me".parse::<Adapter>().unwrap(), Adapter::Me);
    }
}
