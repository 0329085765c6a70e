//! Separable Gaussian filtering.
//!
//! Kernels are sampled at integer offsets from their geometric center
//! `(size - 1) / 2`, so even sizes are centered between samples. When such a
//! kernel is applied in "same" mode, kernel index `anchor = (size - 1) / 2`
//! (rounded down, i.e. the top-left of the central 2×2 for even sizes) sits on
//! the output pixel. Borders replicate the edge sample.

use crate::error::{Error, Result};
use crate::hdr_io::{HdrFrame, Plane};

/// Normalized, separable Gaussian kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    size: usize,
    sigma: f64,
    weights: Vec<f64>,
}

impl GaussianKernel {
    pub fn new(size: usize, sigma: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter { name: "kernel size", reason: "must be at least 1".into() });
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter { name: "kernel sigma", reason: format!("must be > 0, got {sigma}") });
        }
        let center = (size as f64 - 1.0) / 2.0;
        let raw: Vec<f64> = (0..size)
            .map(|k| {
                let d = k as f64 - center;
                (-d * d / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        Ok(Self { size, sigma, weights: raw.into_iter().map(|w| w / sum).collect() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Kernel index aligned with the output pixel in "same" filtering.
    pub fn anchor(&self) -> usize {
        (self.size - 1) / 2
    }

    /// One-dimensional weights; the 2-D kernel is their outer product.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major `size × size` weights.
    pub fn weights_2d(&self) -> Vec<f64> {
        self.weights.iter().flat_map(|&a| self.weights.iter().map(move |&b| a * b)).collect()
    }

    /// Same-size filtering with edge replication.
    pub fn filter_same(&self, plane: &Plane) -> Plane {
        let (w, h) = (plane.width(), plane.height());
        let data = filter_same_raw(plane.data(), w, h, &self.weights, self.anchor());
        Plane::from_parts(w, h, data)
    }

    /// Filters only where the kernel fits entirely inside the plane. Output is
    /// `(w - size + 1) × (h - size + 1)`; `None` if the plane is too small.
    pub fn filter_valid(&self, plane: &Plane) -> Option<Plane> {
        let (w, h) = (plane.width(), plane.height());
        if w < self.size || h < self.size {
            return None;
        }
        let (ow, oh) = (w - self.size + 1, h - self.size + 1);
        let n = self.size;
        let src = plane.data();
        let mut rows = vec![0.0; ow * h];
        for y in 0..h {
            let line = &src[y * w..(y + 1) * w];
            for x in 0..ow {
                rows[y * ow + x] = self.weights.iter().zip(&line[x..x + n]).map(|(k, v)| k * v).sum();
            }
        }
        let mut out = vec![0.0; ow * oh];
        for y in 0..oh {
            for (k, wk) in self.weights.iter().enumerate() {
                let line = &rows[(y + k) * ow..(y + k + 1) * ow];
                for (o, v) in out[y * ow..(y + 1) * ow].iter_mut().zip(line) {
                    *o += wk * v;
                }
            }
        }
        Some(Plane::from_parts(ow, oh, out))
    }

    /// Filters each channel of an RGB frame independently.
    pub fn filter_frame(&self, frame: &HdrFrame) -> HdrFrame {
        let (w, h) = (frame.width(), frame.height());
        let mut out = vec![0.0; w * h * 3];
        for c in 0..3 {
            let channel: Vec<f64> = frame.data().iter().skip(c).step_by(3).copied().collect();
            let filtered = filter_same_raw(&channel, w, h, &self.weights, self.anchor());
            for (i, v) in filtered.into_iter().enumerate() {
                // Normalized non-negative weights over non-negative input.
                out[i * 3 + c] = v.max(0.0);
            }
        }
        HdrFrame::from_parts(w, h, out)
    }
}

fn filter_same_raw(src: &[f64], w: usize, h: usize, weights: &[f64], anchor: usize) -> Vec<f64> {
    let offset = |i: usize, k: usize, len: usize| (i + k).saturating_sub(anchor).min(len - 1);
    let mut rows = vec![0.0; w * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..w {
            rows[y * w + x] = weights.iter().enumerate().map(|(k, wk)| wk * line[offset(x, k, w)]).sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (k, wk) in weights.iter().enumerate() {
            let sy = offset(y, k, h);
            let line = &rows[sy * w..(sy + 1) * w];
            for (o, v) in out[y * w..(y + 1) * w].iter_mut().zip(line) {
                *o += wk * v;
            }
        }
    }
    out
}
