//! Synthetic distortions: additive white Gaussian noise, global intensity
//! shift, salt & pepper noise and Gaussian low-pass filtering.
//!
//! Compression is represented only as a tag carrying the QP; encoding is done
//! by an external HEVC encoder and its decoded 12-bit YUV output is ingested
//! through [`crate::hdr_io`].

use log::warn;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::GaussianKernel;
use crate::hdr_io::{luminance, HdrFrame};
use crate::rng::frame_rng;

pub const DEFAULT_AWGN_SIGMA: f64 = 0.002;
pub const DEFAULT_SHIFT_FRACTION: f64 = 0.1;
pub const DEFAULT_SALT_PEPPER_FRACTION: f64 = 0.02;
pub const DEFAULT_LOWPASS_SIZE: usize = 8;
pub const DEFAULT_LOWPASS_SIGMA: f64 = 8.0;
/// QPs of the compressed variants (random access, main10, GOP 8, RDOQ on).
pub const HEVC_QPS: [u8; 4] = [22, 27, 32, 37];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistortionSpec {
    Awgn { sigma: f64 },
    IntensityShift { fraction: f64 },
    SaltPepper { fraction: f64 },
    GaussianLowpass { size: usize, sigma: f64 },
    Compression { qp: u8 },
}

impl DistortionSpec {
    pub fn awgn() -> Self {
        Self::Awgn { sigma: DEFAULT_AWGN_SIGMA }
    }

    pub fn intensity_shift() -> Self {
        Self::IntensityShift { fraction: DEFAULT_SHIFT_FRACTION }
    }

    pub fn salt_pepper() -> Self {
        Self::SaltPepper { fraction: DEFAULT_SALT_PEPPER_FRACTION }
    }

    pub fn gaussian_lowpass() -> Self {
        Self::GaussianLowpass { size: DEFAULT_LOWPASS_SIZE, sigma: DEFAULT_LOWPASS_SIGMA }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Awgn { .. } => "awgn",
            Self::IntensityShift { .. } => "intensity_shift",
            Self::SaltPepper { .. } => "salt_pepper",
            Self::GaussianLowpass { .. } => "gaussian_lowpass",
            Self::Compression { .. } => "compression",
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, Self::Awgn { .. } | Self::SaltPepper { .. })
    }

    /// Checks parameter ranges, and that a seed is given iff the kind is
    /// stochastic.
    pub fn validate(&self, seed: Option<u64>) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        match *self {
            Self::Awgn { sigma } if !(sigma >= 0.0) || !sigma.is_finite() => {
                return bad("sigma", format!("must be a finite value >= 0, got {sigma}"))
            }
            Self::IntensityShift { fraction } if !fraction.is_finite() => {
                return bad("fraction", format!("must be finite, got {fraction}"))
            }
            Self::SaltPepper { fraction } if !(0.0..=1.0).contains(&fraction) => {
                return bad("fraction", format!("must lie in [0, 1], got {fraction}"))
            }
            Self::GaussianLowpass { size, sigma } => {
                GaussianKernel::new(size, sigma)?;
            }
            _ => {}
        }
        match (self.is_stochastic(), seed) {
            (true, None) => bad("seed", format!("required for {}", self.kind_name())),
            (false, Some(_)) => bad("seed", format!("not used by {}", self.kind_name())),
            _ => Ok(()),
        }
    }
}

/// Adds white Gaussian noise in normalized units.
///
/// All channels are divided by the frame's largest sample, i.i.d. noise with
/// the given standard deviation is added to every sample, the result is
/// clamped to `[0, 1]` and scaled back. An all-black frame has no
/// normalization scale and is returned unchanged.
pub fn add_awgn(frame: &HdrFrame, sigma: f64, rng: &mut impl Rng) -> Result<HdrFrame> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("must be a finite value >= 0, got {sigma}"),
        });
    }
    let max = frame.max_sample();
    if sigma == 0.0 {
        return Ok(frame.clone());
    }
    if max <= 0.0 {
        warn!("AWGN on an all-black frame: nothing to normalize, frame left unchanged");
        return Ok(frame.clone());
    }
    let data = frame
        .data()
        .iter()
        .map(|&v| {
            let n: f64 = StandardNormal.sample(rng);
            (v / max + sigma * n).clamp(0.0, 1.0) * max
        })
        .collect();
    Ok(HdrFrame::from_parts(frame.width(), frame.height(), data))
}

/// Raises luminance by `fraction` of the sequence's peak luminance.
///
/// The peak is taken over every frame; the same offset is then added to R, G
/// and B of every pixel. Because the luma weights sum to one, each pixel's
/// luminance rises by exactly that offset.
pub fn intensity_shift(frames: &[HdrFrame], fraction: f64) -> Result<Vec<HdrFrame>> {
    if frames.is_empty() {
        return Err(Error::Empty("intensity shift needs at least one frame"));
    }
    let peak = frames.iter().flat_map(|f| f.pixels().map(|p| luminance([p[0], p[1], p[2]]))).fold(0.0, f64::max);
    if peak <= 0.0 {
        warn!("intensity shift on an all-black sequence: no peak luminance, output unchanged");
        return Ok(frames.to_vec());
    }
    let offset = fraction * peak;
    frames
        .iter()
        .map(|f| {
            let data: Vec<f64> = f.data().iter().map(|&v| v + offset).collect();
            HdrFrame::new(f.width(), f.height(), data)
        })
        .collect()
}

/// Number of pixels [`salt_pepper`] replaces in a frame of `pixels` pixels.
pub fn salt_pepper_count(pixels: usize, fraction: f64) -> usize {
    (fraction * pixels as f64).floor() as usize
}

/// Replaces exactly `⌊fraction · pixels⌋` distinct, uniformly chosen pixels
/// with the frame's minimum sample ("pepper") or maximum sample ("salt"),
/// each with probability ½, on all three channels.
pub fn salt_pepper(frame: &HdrFrame, fraction: f64, rng: &mut impl Rng) -> Result<HdrFrame> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter {
            name: "fraction",
            reason: format!("must lie in [0, 1], got {fraction}"),
        });
    }
    let n = frame.pixel_count();
    let count = salt_pepper_count(n, fraction);
    let (lo, hi) = (frame.min_sample(), frame.max_sample());
    let mut data = frame.data().to_vec();
    for idx in rand::seq::index::sample(rng, n, count).into_vec() {
        let value = if rng.random_bool(0.5) { hi } else { lo };
        data[idx * 3..idx * 3 + 3].fill(value);
    }
    Ok(HdrFrame::from_parts(frame.width(), frame.height(), data))
}

/// Per-channel Gaussian low-pass with a normalized `size × size` kernel and
/// edge replication. See [`crate::filter`] for the even-size anchor rule.
pub fn gaussian_lowpass(frame: &HdrFrame, size: usize, sigma: f64) -> Result<HdrFrame> {
    Ok(GaussianKernel::new(size, sigma)?.filter_frame(frame))
}

/// Applies a distortion to a whole sequence. Stochastic kinds draw frame `i`
/// from stream `i` of `seed` (see [`crate::rng`]), so the result does not
/// depend on scheduling.
pub fn distort_sequence(spec: &DistortionSpec, frames: &[HdrFrame], seed: Option<u64>) -> Result<Vec<HdrFrame>> {
    spec.validate(seed)?;
    let seed = seed.unwrap_or_default();
    match *spec {
        DistortionSpec::Awgn { sigma } => {
            frames.par_iter().enumerate().map(|(i, f)| add_awgn(f, sigma, &mut frame_rng(seed, i as u64))).collect()
        }
        DistortionSpec::SaltPepper { fraction } => frames
            .par_iter()
            .enumerate()
            .map(|(i, f)| salt_pepper(f, fraction, &mut frame_rng(seed, i as u64)))
            .collect(),
        DistortionSpec::IntensityShift { fraction } => intensity_shift(frames, fraction),
        DistortionSpec::GaussianLowpass { size, sigma } => {
            let kernel = GaussianKernel::new(size, sigma)?;
            Ok(frames.par_iter().map(|f| kernel.filter_frame(f)).collect())
        }
        DistortionSpec::Compression { qp } => Err(Error::InvalidParameter {
            name: "kind",
            reason: format!(
                "compression (QP {qp}) is produced by an external HEVC encoder; \
                 ingest its decoded 12-bit YUV output instead"
            ),
        }),
    }
}
