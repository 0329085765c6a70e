//! Luminance extraction, normalization and the RGB <-> 12-bit YUV matrices.

use serde::{Deserialize, Serialize};

use super::frame::{HdrFrame, LumaPlane, LumaUnits, Plane};
use super::yuv::{Yuv12Frame, MAX_12BIT};
use crate::error::{Error, Result};

/// BT.709 luma weights for linear R, G, B.
pub const BT709_LUMA: [f64; 3] = [0.2126, 0.7152, 0.0722];

#[inline]
pub fn luminance(rgb: [f64; 3]) -> f64 {
    BT709_LUMA[0] * rgb[0] + BT709_LUMA[1] * rgb[1] + BT709_LUMA[2] * rgb[2]
}

/// Per-pixel luminance in the frame's own (linear, relative) units.
pub fn rgb_to_luminance(frame: &HdrFrame) -> LumaPlane {
    let data = frame.pixels().map(|p| luminance([p[0], p[1], p[2]])).collect();
    LumaPlane::from_parts(Plane::from_parts(frame.width(), frame.height(), data), LumaUnits::Linear)
}

/// Divisor applied by [`normalize`]; keep it to undo the mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LumaScale(pub f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    /// One divisor for the whole sequence (temporally stable).
    #[default]
    Sequence,
    /// Each frame divided by its own maximum.
    Frame,
}

/// Scales a plane into `[0, 1]` by its maximum.
pub fn normalize(plane: &LumaPlane) -> Result<(LumaPlane, LumaScale)> {
    let max = plane.max();
    if !(max > 0.0) {
        return Err(Error::ZeroPlane);
    }
    Ok((normalize_with(plane, LumaScale(max)), LumaScale(max)))
}

/// Divides by a caller-supplied scale, clamping into `[0, 1]`.
pub fn normalize_with(plane: &LumaPlane, scale: LumaScale) -> LumaPlane {
    let p = plane.plane().map(|v| (v / scale.0).clamp(0.0, 1.0));
    LumaPlane::from_parts(p, LumaUnits::Relative)
}

pub fn denormalize(plane: &LumaPlane, scale: LumaScale) -> LumaPlane {
    LumaPlane::from_parts(plane.plane().map(|v| v * scale.0), LumaUnits::Linear)
}

/// Normalizes a sequence of planes, returning one scale per plane.
pub fn normalize_sequence(planes: &[LumaPlane], mode: NormalizeMode) -> Result<(Vec<LumaPlane>, Vec<LumaScale>)> {
    if planes.is_empty() {
        return Err(Error::Empty("luminance sequence"));
    }
    match mode {
        NormalizeMode::Frame => Ok(planes.iter().map(normalize).collect::<Result<Vec<_>>>()?.into_iter().unzip()),
        NormalizeMode::Sequence => {
            let max = planes.iter().map(LumaPlane::max).fold(0.0, f64::max);
            if !(max > 0.0) {
                return Err(Error::ZeroPlane);
            }
            let scale = LumaScale(max);
            Ok((planes.iter().map(|p| normalize_with(p, scale)).collect(), vec![scale; planes.len()]))
        }
    }
}

/// Matrix used for the RGB <-> YCbCr conversion. Full-range quantization in
/// every case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YuvMatrix {
    #[default]
    Bt709,
    Bt601,
    Bt2020,
}

impl YuvMatrix {
    /// (Kr, Kb)
    fn coefficients(self) -> (f64, f64) {
        match self {
            YuvMatrix::Bt709 => (0.2126, 0.0722),
            YuvMatrix::Bt601 => (0.299, 0.114),
            YuvMatrix::Bt2020 => (0.2627, 0.0593),
        }
    }
}

const CODE_SCALE: f64 = MAX_12BIT as f64;
const CHROMA_ZERO: f64 = 2048.0;

fn quantize(v: f64) -> u16 {
    v.round().clamp(0.0, CODE_SCALE) as u16
}

/// Converts RGB (expected in `[0, 1]`; values above are clamped) to 12-bit
/// full-range YCbCr 4:2:0. Chroma is averaged over each 2×2 block before
/// quantization. Width and height must be even.
pub fn rgb_to_yuv(frame: &HdrFrame, matrix: YuvMatrix) -> Result<Yuv12Frame> {
    let (w, h) = (frame.width(), frame.height());
    if w % 2 != 0 || h % 2 != 0 {
        return Err(Error::InvalidDimensions { width: w, height: h });
    }
    let (kr, kb) = matrix.coefficients();
    let kg = 1.0 - kr - kb;
    let mut y = Vec::with_capacity(w * h);
    let mut cb = Vec::with_capacity(w * h);
    let mut cr = Vec::with_capacity(w * h);
    for p in frame.pixels() {
        let [r, g, b] = [p[0].min(1.0), p[1].min(1.0), p[2].min(1.0)];
        let luma = kr * r + kg * g + kb * b;
        y.push(quantize(luma * CODE_SCALE));
        cb.push((b - luma) / (2.0 * (1.0 - kb)));
        cr.push((r - luma) / (2.0 * (1.0 - kr)));
    }
    let (cw, ch) = (w / 2, h / 2);
    let mut u = Vec::with_capacity(cw * ch);
    let mut v = Vec::with_capacity(cw * ch);
    for cy in 0..ch {
        for cx in 0..cw {
            let idx = [
                2 * cy * w + 2 * cx,
                2 * cy * w + 2 * cx + 1,
                (2 * cy + 1) * w + 2 * cx,
                (2 * cy + 1) * w + 2 * cx + 1,
            ];
            let avg = |c: &[f64]| idx.iter().map(|&i| c[i]).sum::<f64>() / 4.0;
            u.push(quantize(CHROMA_ZERO + avg(&cb) * CODE_SCALE));
            v.push(quantize(CHROMA_ZERO + avg(&cr) * CODE_SCALE));
        }
    }
    Yuv12Frame::new(w, h, y, u, v)
}

/// Inverse of [`rgb_to_yuv`]. Chroma is replicated over each 2×2 block and
/// the resulting RGB is clamped to `[0, 1]`.
pub fn yuv_to_rgb(frame: &Yuv12Frame, matrix: YuvMatrix) -> HdrFrame {
    let (w, h) = (frame.width(), frame.height());
    let (kr, kb) = matrix.coefficients();
    let kg = 1.0 - kr - kb;
    let cw = frame.chroma_width();
    let mut data = Vec::with_capacity(w * h * 3);
    for py in 0..h {
        for px in 0..w {
            let ci = (py / 2) * cw + px / 2;
            let luma = f64::from(frame.y()[py * w + px]) / CODE_SCALE;
            let cb = (f64::from(frame.u()[ci]) - CHROMA_ZERO) / CODE_SCALE;
            let cr = (f64::from(frame.v()[ci]) - CHROMA_ZERO) / CODE_SCALE;
            let r = luma + 2.0 * (1.0 - kr) * cr;
            let b = luma + 2.0 * (1.0 - kb) * cb;
            let g = (luma - kr * r - kb * b) / kg;
            data.extend([r, g, b].map(|c| c.clamp(0.0, 1.0)));
        }
    }
    HdrFrame::from_parts(w, h, data)
}
