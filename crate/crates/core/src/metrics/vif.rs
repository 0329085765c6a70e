//! Pixel-domain visual information fidelity over four dyadic scales.
//!
//! Scale `s` (1-based) uses a Gaussian window of size `2^(5-s) + 1` with
//! σ = size / 5. Before scales 2..4 both planes are smoothed with that
//! window (valid region) and decimated by 2. At each scale the local
//! reference variance σ_r², distorted variance σ_d² and covariance σ_rd give
//! the gain `g = σ_rd / (σ_r² + ε)` and the residual noise
//! `σ_v² = max(σ_d² - g σ_rd, 0)`. Information is accumulated as
//!
//! ```text
//! num += log2(1 + g² σ_r² / (σ_v² + σ_n²))
//! den += log2(1 + σ_r² / σ_n²)
//! ```
//!
//! with σ_n² = 2. Windows where the reference is flat (σ_r² < ε) carry no
//! information; where the distorted window is flat (σ_d² < ε) the gain is
//! zero; a negative gain is treated as zero gain with all distorted energy
//! counted as noise.

use crate::error::{Error, Result};
use crate::filter::GaussianKernel;
use crate::hdr_io::{CodePlane, Plane};

pub const VIF_SCALES: usize = 4;
/// Smallest width/height for which all four scales have valid windows.
pub const VIF_MIN_SIZE: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VifParams {
    pub noise_variance: f64,
    pub eps: f64,
}

impl Default for VifParams {
    fn default() -> Self {
        Self { noise_variance: 2.0, eps: 1e-10 }
    }
}

/// Per-scale information sums.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VifComponents {
    pub numerator: [f64; VIF_SCALES],
    pub denominator: [f64; VIF_SCALES],
}

impl VifComponents {
    pub fn score(&self) -> Result<f64> {
        let den: f64 = self.denominator.iter().sum();
        if den <= 0.0 {
            return Err(Error::VifUndefined);
        }
        Ok(self.numerator.iter().sum::<f64>() / den)
    }
}

pub fn vif(reference: &CodePlane, distorted: &CodePlane) -> Result<f64> {
    vif_components(reference, distorted, &VifParams::default())?.score()
}

/// Window size used at 1-based scale `s`.
pub fn vif_window(scale: usize) -> usize {
    (1 << (5 - scale)) + 1
}

pub fn vif_components(reference: &CodePlane, distorted: &CodePlane, params: &VifParams) -> Result<VifComponents> {
    reference.same_dimensions(distorted)?;
    let (w, h) = (reference.width(), reference.height());
    if w < VIF_MIN_SIZE || h < VIF_MIN_SIZE {
        return Err(Error::PlaneTooSmall { width: w, height: h, required: VIF_MIN_SIZE });
    }
    let mut out = VifComponents::default();
    let mut r = reference.clone();
    let mut d = distorted.clone();
    for scale in 1..=VIF_SCALES {
        let n = vif_window(scale);
        let kernel = GaussianKernel::new(n, n as f64 / 5.0)?;
        let too_small = || Error::PlaneTooSmall { width: w, height: h, required: VIF_MIN_SIZE };
        if scale > 1 {
            r = decimate(&kernel.filter_valid(&r).ok_or_else(too_small)?);
            d = decimate(&kernel.filter_valid(&d).ok_or_else(too_small)?);
        }
        let stats = LocalStats::compute(&kernel, &r, &d).ok_or_else(too_small)?;
        let (num, den) = stats.information(params);
        out.numerator[scale - 1] = num;
        out.denominator[scale - 1] = den;
    }
    Ok(out)
}

/// Keeps every second sample in each direction, starting at the origin.
fn decimate(p: &Plane) -> Plane {
    let (w, h) = (p.width(), p.height());
    let (ow, oh) = (w.div_ceil(2), h.div_ceil(2));
    let mut data = Vec::with_capacity(ow * oh);
    for y in (0..h).step_by(2) {
        data.extend(p.data()[y * w..(y + 1) * w].iter().step_by(2));
    }
    Plane::from_parts(ow, oh, data)
}

struct LocalStats {
    var_r: Vec<f64>,
    var_d: Vec<f64>,
    cov: Vec<f64>,
}

impl LocalStats {
    fn compute(kernel: &GaussianKernel, r: &Plane, d: &Plane) -> Option<Self> {
        let (w, h) = (r.width(), r.height());
        // moments are shift invariant; offsetting by the first sample keeps
        // E[x^2] - E[x]^2 free of cancellation, and flat planes exactly zero
        let offset = |p: &Plane| p.map(|v| v - p.data()[0]);
        let (r, d) = (&offset(r), &offset(d));
        let prod =
            |a: &Plane, b: &Plane| Plane::from_parts(w, h, a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect());
        let mu_r = kernel.filter_valid(r)?;
        let mu_d = kernel.filter_valid(d)?;
        let e_rr = kernel.filter_valid(&prod(r, r))?;
        let e_dd = kernel.filter_valid(&prod(d, d))?;
        let e_rd = kernel.filter_valid(&prod(r, d))?;
        let n = mu_r.len();
        let mut var_r = Vec::with_capacity(n);
        let mut var_d = Vec::with_capacity(n);
        let mut cov = Vec::with_capacity(n);
        for i in 0..n {
            let (mr, md) = (mu_r.data()[i], mu_d.data()[i]);
            var_r.push(e_rr.data()[i] - mr * mr);
            var_d.push(e_dd.data()[i] - md * md);
            cov.push(e_rd.data()[i] - mr * md);
        }
        Some(Self { var_r, var_d, cov })
    }

    fn information(&self, params: &VifParams) -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.var_r.len() {
            let (n, d) = window_information(self.var_r[i], self.var_d[i], self.cov[i], params);
            num += n;
            den += d;
        }
        (num, den)
    }
}

/// Information terms `(num, den)` of one window from its moments.
pub fn window_information(var_r: f64, var_d: f64, cov: f64, params: &VifParams) -> (f64, f64) {
    let eps = params.eps;
    let mut var_r = var_r.max(0.0);
    let var_d = var_d.max(0.0);
    let mut g = cov / (var_r + eps);
    let mut var_v = (var_d - g * cov).max(0.0);
    if var_r < eps {
        g = 0.0;
        var_v = var_d;
        var_r = 0.0;
    }
    if var_d < eps {
        g = 0.0;
        var_v = 0.0;
    }
    if g < 0.0 {
        var_v = var_d;
        g = 0.0;
    }
    let sn = params.noise_variance;
    ((1.0 + g * g * var_r / (var_v + sn)).log2(), (1.0 + var_r / sn).log2())
}
