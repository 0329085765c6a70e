use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdr_io::{LumaPlane, LumaUnits};

pub const DEFAULT_PEAK_NITS: f64 = 2700.0;
pub const DEFAULT_CONTRAST: f64 = 2000.0;

/// Luminance range of the target display.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayModel {
    /// Peak luminance, cd/m².
    pub peak: f64,
    /// Contrast ratio of the light modulator; sets the default black level.
    pub contrast: f64,
    /// Overrides `peak / contrast` when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub black_level: Option<f64>,
}

impl Default for DisplayModel {
    fn default() -> Self {
        Self { peak: DEFAULT_PEAK_NITS, contrast: DEFAULT_CONTRAST, black_level: None }
    }
}

impl DisplayModel {
    pub fn black(&self) -> f64 {
        self.black_level.unwrap_or(self.peak / self.contrast)
    }

    pub fn validate(&self) -> Result<()> {
        let black = self.black();
        if !(self.peak.is_finite() && black > 0.0 && self.peak > black) {
            return Err(Error::InvalidParameter {
                name: "display model",
                reason: format!("need peak > black > 0, got peak {} black {black}", self.peak),
            });
        }
        Ok(())
    }

    /// Maps relative luminance onto the display: `clamp(v · peak, black, peak)`.
    pub fn to_absolute_luminance(&self, relative: &LumaPlane) -> Result<LumaPlane> {
        self.validate()?;
        if relative.units() != LumaUnits::Relative {
            return Err(Error::InvalidParameter {
                name: "luminance units",
                reason: format!("expected relative luminance, got {:?}", relative.units()),
            });
        }
        let (black, peak) = (self.black(), self.peak);
        let plane = relative.plane().map(|v| (v * peak).clamp(black, peak));
        Ok(LumaPlane::from_parts(plane, LumaUnits::Absolute))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdr_io::Plane;

    #[test]
    fn defaults_map_unit_range_onto_display() {
        let m = DisplayModel::default();
        assert_eq!(m.black(), 1.35);
        let rel = LumaPlane::new(Plane::new(3, 1, vec![0.0, 0.5, 1.0]).unwrap(), LumaUnits::Relative).unwrap();
        let abs = m.to_absolute_luminance(&rel).unwrap();
        assert_eq!(abs.data(), &[1.35, 1350.0, 2700.0]);
        assert_eq!(abs.units(), LumaUnits::Absolute);
    }

    #[test]
    fn validation() {
        let bad = DisplayModel { black_level: Some(3000.0), ..Default::default() };
        assert!(bad.validate().is_err());
        let lin = LumaPlane::new(Plane::filled(1, 1, 0.5).unwrap(), LumaUnits::Linear).unwrap();
        assert!(DisplayModel::default().to_absolute_luminance(&lin).is_err());
    }
}
