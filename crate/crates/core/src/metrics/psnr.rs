use crate::error::{Error, Result};
use crate::hdr_io::CodePlane;

/// Value reported when the planes are identical (and the ceiling for any
/// other pair), keeping CSV and plot output finite.
pub const PSNR_CAP_DB: f64 = 100.0;

pub fn mse(reference: &CodePlane, distorted: &CodePlane) -> Result<f64> {
    reference.same_dimensions(distorted)?;
    let sum: f64 = reference.data().iter().zip(distorted.data()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / reference.len() as f64)
}

/// Peak signal-to-noise ratio in dB, capped at [`PSNR_CAP_DB`].
pub fn psnr(reference: &CodePlane, distorted: &CodePlane, peak: f64) -> Result<f64> {
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::InvalidParameter { name: "peak", reason: format!("must be > 0, got {peak}") });
    }
    let mse = mse(reference, distorted)?;
    Ok(psnr_from_mse(mse, peak))
}

pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        return PSNR_CAP_DB;
    }
    (10.0 * (peak * peak / mse).log10()).min(PSNR_CAP_DB)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hdr_io::Plane;

    #[test]
    fn examples() {
        let a = Plane::new(2, 2, vec![0.0, 10.0, 20.0, 30.0]).unwrap();
        assert_eq!(psnr(&a, &a, 255.0).unwrap(), PSNR_CAP_DB);

        let zeros = Plane::filled(3, 3, 0.0).unwrap();
        let peaks = Plane::filled(3, 3, 255.0).unwrap();
        assert!(psnr(&zeros, &peaks, 255.0).unwrap().abs() < 1e-12);

        // 20 log10(255)
        assert!((psnr_from_mse(1.0, 255.0) - 48.130_803_608_679_1).abs() < 1e-9);

        let b = Plane::filled(3, 2, 0.0).unwrap();
        assert!(matches!(psnr(&a, &b, 255.0), Err(Error::DimensionMismatch { .. })));
        assert!(psnr(&a, &a, 0.0).is_err());
    }

    #[test]
    fn symmetric() {
        let a = Plane::new(2, 2, vec![1.0, 5.0, 9.0, 3.0]).unwrap();
        let b = Plane::new(2, 2, vec![2.0, 2.0, 8.0, 3.5]).unwrap();
        assert_eq!(psnr(&a, &b, 10.0).unwrap(), psnr(&b, &a, 10.0).unwrap());
    }
}
