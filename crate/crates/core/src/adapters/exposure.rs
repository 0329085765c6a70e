//! Virtual exposures: an HDR frame seen through several 8-bit cameras with
//! different exposure times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdr_io::{rgb_to_luminance, CodePlane, HdrFrame, Plane};

/// How to derive an [`ExposureSet`] from a reference sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposureParams {
    pub count: usize,
    pub gamma: f64,
    /// Percentile (in percent) of nonzero luminance that the brightest
    /// exposure maps to 1.0.
    pub anchor_percentile: f64,
}

impl Default for ExposureParams {
    fn default() -> Self {
        Self { count: 5, gamma: 2.2, anchor_percentile: 1.0 }
    }
}

/// Exposure values in log2 stops, applied as `L · 2^e` to linear luminance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureSet {
    exposures: Vec<f64>,
    gamma: f64,
}

impl ExposureSet {
    pub fn new(exposures: Vec<f64>, gamma: f64) -> Result<Self> {
        if exposures.is_empty() {
            return Err(Error::InvalidParameter { name: "exposures", reason: "need at least one exposure".into() });
        }
        if exposures.iter().any(|e| !e.is_finite()) || exposures.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter {
                name: "exposures",
                reason: "must be finite and strictly increasing".into(),
            });
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("must be > 0, got {gamma}") });
        }
        Ok(Self { exposures, gamma })
    }

    /// Spreads `count` exposures evenly (in stops) between the one that maps
    /// the sequence maximum to 1.0 and the one that maps the anchor
    /// percentile of nonzero luminance to 1.0. If the two coincide (a flat
    /// sequence) the exposures are spaced one stop apart instead.
    pub fn derive(reference: &[HdrFrame], params: &ExposureParams) -> Result<Self> {
        if params.count == 0 {
            return Err(Error::InvalidParameter { name: "exposure count", reason: "must be at least 1".into() });
        }
        if !(0.0..=100.0).contains(&params.anchor_percentile) {
            return Err(Error::InvalidParameter {
                name: "anchor percentile",
                reason: format!("must lie in [0, 100], got {}", params.anchor_percentile),
            });
        }
        let mut nonzero: Vec<f64> =
            reference.iter().flat_map(|f| rgb_to_luminance(f).into_plane().into_data()).filter(|&l| l > 0.0).collect();
        if nonzero.is_empty() {
            return Err(Error::ZeroPlane);
        }
        nonzero.sort_by(f64::total_cmp);
        let max = *nonzero.last().unwrap();
        let rank = ((params.anchor_percentile / 100.0) * nonzero.len() as f64).ceil() as usize;
        let anchor = nonzero[rank.clamp(1, nonzero.len()) - 1];

        let e_min = -max.log2();
        let mut e_max = -anchor.log2();
        if params.count == 1 {
            return Self::new(vec![e_min], params.gamma);
        }
        if e_max - e_min < 1e-9 {
            e_max = e_min + (params.count - 1) as f64;
        }
        let step = (e_max - e_min) / (params.count - 1) as f64;
        let exposures = (0..params.count).map(|i| e_min + i as f64 * step).collect();
        Self::new(exposures, params.gamma)
    }

    pub fn exposures(&self) -> &[f64] {
        &self.exposures
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.exposures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exposures.is_empty()
    }
}

/// An 8-bit single-channel frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdrPlane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl LdrPlane {
    pub fn to_code_plane(&self) -> CodePlane {
        Plane::from_parts(self.width, self.height, self.data.iter().map(|&v| f64::from(v)).collect())
    }

    /// Fraction of samples strictly between 0 and 255.
    pub fn unclipped_fraction(&self) -> f64 {
        self.data.iter().filter(|&&v| v != 0 && v != 255).count() as f64 / self.data.len() as f64
    }
}

/// 8-bit code for linear value `v` at one exposure: `round(255 · clamp(v·2^e)^(1/γ))`.
pub fn expose_value(luminance: f64, exposure: f64, gamma: f64) -> u8 {
    let v = (luminance * exposure.exp2()).clamp(0.0, 1.0);
    (255.0 * v.powf(1.0 / gamma)).round() as u8
}

/// One 8-bit luminance plane per exposure.
pub fn multi_exposure(frame: &HdrFrame, exposures: &ExposureSet) -> Vec<LdrPlane> {
    let luma = rgb_to_luminance(frame);
    exposures
        .exposures()
        .iter()
        .map(|&e| LdrPlane {
            width: frame.width(),
            height: frame.height(),
            data: luma.data().iter().map(|&l| expose_value(l, e, exposures.gamma())).collect(),
        })
        .collect()
}
