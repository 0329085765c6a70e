//! Structural similarity with an 11×11, σ = 1.5 Gaussian window evaluated
//! over valid window positions only (no padding).

use crate::error::{Error, Result};
use crate::filter::GaussianKernel;
use crate::hdr_io::{CodePlane, Plane};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self { window: 11, sigma: 1.5, k1: 0.01, k2: 0.03 }
    }
}

/// Mean SSIM using the default window and constants. `dynamic_range` is the
/// span `L` of the code values, giving `C1 = (0.01 L)²`, `C2 = (0.03 L)²`.
pub fn ssim(reference: &CodePlane, distorted: &CodePlane, dynamic_range: f64) -> Result<f64> {
    ssim_with(reference, distorted, dynamic_range, &SsimParams::default())
}

pub fn ssim_with(reference: &CodePlane, distorted: &CodePlane, dynamic_range: f64, params: &SsimParams) -> Result<f64> {
    let map = ssim_map(reference, distorted, dynamic_range, params)?;
    Ok(map.mean())
}

/// Per-window SSIM indices; the map is `(w - window + 1) × (h - window + 1)`.
pub fn ssim_map(
    reference: &CodePlane,
    distorted: &CodePlane,
    dynamic_range: f64,
    params: &SsimParams,
) -> Result<Plane> {
    reference.same_dimensions(distorted)?;
    if !(dynamic_range > 0.0) || !dynamic_range.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dynamic_range",
            reason: format!("must be > 0, got {dynamic_range}"),
        });
    }
    let (w, h) = (reference.width(), reference.height());
    if w < params.window || h < params.window {
        return Err(Error::PlaneTooSmall { width: w, height: h, required: params.window });
    }
    let kernel = GaussianKernel::new(params.window, params.sigma)?;
    let c1 = (params.k1 * dynamic_range).powi(2);
    let c2 = (params.k2 * dynamic_range).powi(2);

    let x = reference;
    let y = distorted;
    let xx = Plane::from_parts(w, h, x.data().iter().map(|v| v * v).collect());
    let yy = Plane::from_parts(w, h, y.data().iter().map(|v| v * v).collect());
    let xy = Plane::from_parts(w, h, x.data().iter().zip(y.data()).map(|(a, b)| a * b).collect());
    let valid = |p: &Plane| kernel.filter_valid(p).expect("size checked above");
    let (mu_x, mu_y) = (valid(x), valid(y));
    let (e_xx, e_yy, e_xy) = (valid(&xx), valid(&yy), valid(&xy));

    let data = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x.data()[i], mu_y.data()[i]);
            let var_x = e_xx.data()[i] - mx * mx;
            let var_y = e_yy.data()[i] - my * my;
            let cov = e_xy.data()[i] - mx * my;
            ssim_index(mx, my, var_x, var_y, cov, c1, c2)
        })
        .collect();
    Ok(Plane::from_parts(mu_x.width(), mu_x.height(), data))
}

/// SSIM for one window from its weighted moments.
pub fn ssim_index(mu_x: f64, mu_y: f64, var_x: f64, var_y: f64, cov: f64, c1: f64, c2: f64) -> f64 {
    let num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2);
    let den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2);
    if den == 0.0 {
        // Only reachable with zero constants on two black, flat windows.
        return 1.0;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texture(w: usize, h: usize) -> Plane {
        Plane::from_fn(w, h, |x, y| 100.0 + 40.0 * ((x as f64 * 0.7).sin() * (y as f64 * 1.3).cos())).unwrap()
    }

    #[test]
    fn identical_planes_score_one() {
        let p = texture(24, 20);
        assert_eq!(ssim(&p, &p, 255.0).unwrap(), 1.0);
    }

    #[test]
    fn symmetric() {
        let a = texture(16, 16);
        let b = a.map(|v| v * 0.9 + 3.0);
        assert_eq!(ssim(&a, &b, 255.0).unwrap(), ssim(&b, &a, 255.0).unwrap());
    }

    #[test]
    fn errors() {
        let a = texture(16, 16);
        assert!(matches!(ssim(&a, &texture(16, 15), 255.0), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(ssim(&texture(10, 16), &texture(10, 16), 255.0), Err(Error::PlaneTooSmall { .. })));
        assert!(ssim(&a, &a, 0.0).is_err());
    }

    #[test]
    fn flat_offset_only_affects_luminance_term() {
        let a = texture(16, 16);
        let c = 20.0;
        let b = a.map(|v| v + c);
        let p = SsimParams::default();
        let map = ssim_map(&a, &b, 255.0, &p).unwrap();
        let mu = GaussianKernel::new(11, 1.5).unwrap().filter_valid(&a).unwrap();
        let c1 = (0.01f64 * 255.0).powi(2);
        for (s, m) in map.data().iter().zip(mu.data()) {
            let lum = (2.0 * m * (m + c) + c1) / (m * m + (m + c) * (m + c) + c1);
            assert!((s - lum).abs() < 1e-9, "{s} vs {lum}");
            assert!(*s < 1.0);
        }
    }
}
