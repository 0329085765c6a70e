//! Dual-modulation display simulation: a low-resolution projector lights a
//! diffuser behind an LCD, and the emitted light is the product of the two.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapters::DisplayModel;
use crate::error::{Error, Result};
use crate::filter::GaussianKernel;
use crate::hdr_io::{check_dims, luminance, rgb_to_luminance, HdrFrame, LumaPlane, LumaUnits, Plane};

pub const DEFAULT_KEY: f64 = 0.18;
pub const DEFAULT_PSF_SIZE: usize = 12;
pub const DEFAULT_PSF_SIGMA: f64 = 2.0;
/// Smallest lightfield value the LCD compensation divides by.
pub const DIVISION_GUARD: f64 = 1e-4;
/// Offset inside the log-average luminance.
pub const LOG_AVERAGE_DELTA: f64 = 1e-6;
/// Ratios this far above 1 are still treated as representable by the LCD;
/// blur weights summing to 1 - ulp would otherwise flag flat regions.
const CLAMP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayParams {
    pub key: f64,
    pub psf_size: usize,
    pub psf_sigma: f64,
    pub division_guard: f64,
}

impl Default for DisplayParams {
    fn default() -> Self {
        Self {
            key: DEFAULT_KEY,
            psf_size: DEFAULT_PSF_SIZE,
            psf_sigma: DEFAULT_PSF_SIGMA,
            division_guard: DIVISION_GUARD,
        }
    }
}

impl DisplayParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.key > 0.0 && self.key.is_finite()) {
            return Err(Error::InvalidParameter { name: "key", reason: format!("must be > 0, got {}", self.key) });
        }
        if !(self.division_guard > 0.0) {
            return Err(Error::InvalidParameter {
                name: "division guard",
                reason: format!("must be > 0, got {}", self.division_guard),
            });
        }
        GaussianKernel::new(self.psf_size, self.psf_sigma).map(|_| ())
    }
}

/// Global photographic tone mapping with the white point at the scene
/// maximum. Chromaticity is kept by scaling RGB with `L_d / L`; channels are
/// clamped into `[0, 1]`.
pub fn reinhard_tonemap(frame: &HdrFrame, key: f64) -> HdrFrame {
    let luma = rgb_to_luminance(frame);
    let n = luma.data().len() as f64;
    let log_avg = (luma.data().iter().map(|&l| (LOG_AVERAGE_DELTA + l).ln()).sum::<f64>() / n).exp();
    let scale = key / log_avg;
    let white = luma.max() * scale;
    let white2 = white * white;
    let mut out = Vec::with_capacity(frame.data().len());
    for (px, &l) in frame.pixels().zip(luma.data()) {
        if l <= 0.0 {
            out.extend_from_slice(&[0.0; 3]);
            continue;
        }
        let ls = l * scale;
        let ld = ls * (1.0 + ls / white2) / (1.0 + ls);
        let gain = ld / l;
        out.extend(px.iter().map(|c| (c * gain).clamp(0.0, 1.0)));
    }
    HdrFrame::from_parts(frame.width(), frame.height(), out)
}

/// Tone-curve value `L_d` for scaled luminance `ls` and white point `white`.
pub fn reinhard_curve(ls: f64, white: f64) -> f64 {
    ls * (1.0 + ls / (white * white)) / (1.0 + ls)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplaySignals {
    /// Projector drive, `sqrt` of normalized luminance.
    pub projector: Plane,
    /// Projector light after the diffuser PSF.
    pub lightfield: Plane,
    /// Tone-mapped frame the LCD should reproduce together with the lightfield.
    pub target: HdrFrame,
    /// LCD drive in `[0, 1]`.
    pub lcd: HdrFrame,
    /// LCD samples (channels) that were clamped or hit the division guard.
    pub clamped: usize,
}

impl DisplaySignals {
    pub fn width(&self) -> usize {
        self.projector.width()
    }

    pub fn height(&self) -> usize {
        self.projector.height()
    }

    pub fn clamp_fraction(&self) -> f64 {
        self.clamped as f64 / self.lcd.data().len() as f64
    }

    /// Unscaled emitted luminance: lightfield times LCD luminance.
    pub fn modulated(&self) -> Plane {
        let data = self
            .lightfield
            .data()
            .iter()
            .zip(self.lcd.pixels())
            .map(|(&lf, p)| lf * luminance([p[0], p[1], p[2]]))
            .collect();
        Plane::from_parts(self.width(), self.height(), data)
    }
}

/// Splits one frame whose luminance has already been divided by `scale`.
fn split_scaled(frame: &HdrFrame, scale: f64, kernel: &GaussianKernel, params: &DisplayParams) -> DisplaySignals {
    let luma = rgb_to_luminance(frame);
    let y = if scale > 0.0 { luma.plane().map(|v| (v / scale).clamp(0.0, 1.0)) } else { luma.plane().map(|_| 0.0) };
    let projector = y.map(f64::sqrt);
    let lightfield = kernel.filter_same(&projector);
    let target = reinhard_tonemap(frame, params.key);

    let mut clamped = 0;
    let mut lcd = Vec::with_capacity(target.data().len());
    for (px, &lf) in target.pixels().zip(lightfield.data()) {
        let guarded = lf < params.division_guard;
        let den = lf.max(params.division_guard);
        for &c in px {
            let ratio = c / den;
            if c > 0.0 && (guarded || ratio > 1.0 + CLAMP_SLACK) {
                clamped += 1;
            }
            lcd.push(ratio.clamp(0.0, 1.0));
        }
    }
    DisplaySignals {
        projector,
        lightfield,
        lcd: HdrFrame::from_parts(frame.width(), frame.height(), lcd),
        target,
        clamped,
    }
}

/// Signals for a single frame, normalized by its own maximum luminance.
pub fn split_signal(frame: &HdrFrame, params: &DisplayParams) -> Result<DisplaySignals> {
    params.validate()?;
    let kernel = GaussianKernel::new(params.psf_size, params.psf_sigma)?;
    Ok(split_scaled(frame, rgb_to_luminance(frame).max(), &kernel, params))
}

/// Signals for every frame; luminance is normalized by the sequence maximum.
pub fn split_sequence(frames: &[HdrFrame], params: &DisplayParams) -> Result<Vec<DisplaySignals>> {
    if frames.is_empty() {
        return Err(Error::Empty("display sequence"));
    }
    params.validate()?;
    let kernel = GaussianKernel::new(params.psf_size, params.psf_sigma)?;
    let scale = frames.par_iter().map(|f| rgb_to_luminance(f).max()).reduce(|| 0.0, f64::max);
    Ok(frames.par_iter().map(|f| split_scaled(f, scale, &kernel, params)).collect())
}

/// Emitted luminance in cd/m². The brightest modulated value in the sequence
/// maps to the display peak; nothing falls below the black level.
pub fn simulate_emitted(signals: &[DisplaySignals], model: &DisplayModel) -> Result<Vec<LumaPlane>> {
    model.validate()?;
    if let Some(first) = signals.first() {
        for s in signals {
            check_dims((first.width(), first.height()), (s.width(), s.height()))?;
        }
    }
    let modulated: Vec<Plane> = signals.par_iter().map(DisplaySignals::modulated).collect();
    let max = modulated.iter().map(Plane::max).fold(0.0, f64::max);
    let (black, peak) = (model.black(), model.peak);
    Ok(modulated
        .into_iter()
        .map(|p| {
            let emitted = if max > 0.0 { p.map(|v| (v / max * peak).clamp(black, peak)) } else { p.map(|_| black) };
            LumaPlane::from_parts(emitted, LumaUnits::Absolute)
        })
        .collect())
}

/// What the display would show without tone mapping or a PSF: normalized
/// scene luminance scaled to the display range.
pub fn ideal_emitted(frames: &[HdrFrame], model: &DisplayModel) -> Vec<LumaPlane> {
    let lumas: Vec<LumaPlane> = frames.iter().map(rgb_to_luminance).collect();
    let max = lumas.iter().map(LumaPlane::max).fold(0.0, f64::max);
    let (black, peak) = (model.black(), model.peak);
    lumas
        .iter()
        .map(|l| {
            let p = l.plane().map(|v| if max > 0.0 { (v / max * peak).clamp(black, peak) } else { black });
            LumaPlane::from_parts(p, LumaUnits::Absolute)
        })
        .collect()
}

/// RMS difference of `log10` luminance between two absolute planes.
pub fn reconstruction_error(emitted: &LumaPlane, ideal: &LumaPlane) -> Result<f64> {
    check_dims((emitted.width(), emitted.height()), (ideal.width(), ideal.height()))?;
    let n = emitted.data().len() as f64;
    let sum: f64 = emitted.data().iter().zip(ideal.data()).map(|(a, b)| (a.log10() - b.log10()).powi(2)).sum();
    Ok((sum / n).sqrt())
}
