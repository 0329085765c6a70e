//! Raster containers shared by every stage of the pipeline.

use crate::error::{Error, Result};

/// Linear-light RGB raster in relative radiance units, interleaved `RGBRGB...`.
///
/// Every sample is finite and non-negative; constructors enforce this.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrFrame {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl HdrFrame {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        if data.len() != width * height * 3 {
            return Err(Error::LengthMismatch(data.len(), width * height * 3));
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidSample { index, value });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        let data = std::iter::repeat_n(rgb, width * height).flatten().collect();
        Self::new(width, height, data)
    }

    /// Builds a frame by evaluating `f(x, y)` for each pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [f64; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Constructor for internal transforms whose outputs are non-negative by
    /// construction. Still checked in debug builds.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height * 3);
        debug_assert!(data.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(3)
    }

    /// Largest channel sample in the frame.
    pub fn max_sample(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest channel sample in the frame.
    pub fn min_sample(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn same_dimensions(&self, other: &HdrFrame) -> Result<()> {
        check_dims((self.width, self.height), (other.width, other.height))
    }
}

/// Single-channel floating-point raster. Used directly as a code plane
/// (PU values, 8-bit LDR codes, 12-bit components) and wrapped by
/// [`LumaPlane`] for luminance.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

/// Plane of encoded code values fed to the metric kernels.
pub type CodePlane = Plane;

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        if data.len() != width * height {
            return Err(Error::LengthMismatch(data.len(), width * height));
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidSample { index, value });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane::from_parts(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn same_dimensions(&self, other: &Plane) -> Result<()> {
        check_dims((self.width, self.height), (other.width, other.height))
    }
}

/// What the values of a [`LumaPlane`] mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LumaUnits {
    /// Scene-referred luminance in the frame's relative radiance units, unbounded.
    Linear,
    /// Normalized to `[0, 1]`.
    Relative,
    /// Absolute display luminance in cd/m².
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LumaPlane {
    plane: Plane,
    units: LumaUnits,
}

impl LumaPlane {
    pub fn new(plane: Plane, units: LumaUnits) -> Result<Self> {
        if units == LumaUnits::Relative {
            if let Some((index, &value)) = plane.data().iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidSample { index, value });
            }
        }
        Ok(Self { plane, units })
    }

    pub(crate) fn from_parts(plane: Plane, units: LumaUnits) -> Self {
        Self { plane, units }
    }

    pub fn units(&self) -> LumaUnits {
        self.units
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn into_plane(self) -> Plane {
        self.plane
    }

    pub fn width(&self) -> usize {
        self.plane.width()
    }

    pub fn height(&self) -> usize {
        self.plane.height()
    }

    pub fn data(&self) -> &[f64] {
        self.plane.data()
    }

    pub fn max(&self) -> f64 {
        self.plane.max()
    }
}

pub(crate) fn check_dims(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { a_width: a.0, a_height: a.1, b_width: b.0, b_height: b.1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_non_finite_samples() {
        assert!(HdrFrame::new(1, 1, vec![0.0, -1.0, 0.0]).is_err());
        assert!(HdrFrame::new(1, 1, vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(HdrFrame::new(1, 1, vec![0.0, f64::INFINITY, 0.0]).is_err());
        assert!(HdrFrame::new(1, 1, vec![0.0, 1.0]).is_err());
        assert!(HdrFrame::new(0, 1, vec![]).is_err());
    }

    #[test]
    fn relative_luma_must_be_unit_range() {
        let p = Plane::new(2, 1, vec![0.5, 1.5]).unwrap();
        assert!(LumaPlane::new(p.clone(), LumaUnits::Relative).is_err());
        assert!(LumaPlane::new(p, LumaUnits::Linear).is_ok());
    }
}
