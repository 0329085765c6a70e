//! Perceptually uniform (PU) encoding of absolute luminance.
//!
//! The transfer is a monotone table from log10 luminance (cd/m²) to PU code
//! values, interpolated linearly in log-luminance. The built-in table is
//! obtained by counting just-noticeable differences: integrating
//! `dL / ΔL(L)` where `ΔL` is the photopic cone threshold-versus-intensity
//! function of Ferwerda et al. (1996), then fixing the affine scale so that
//! 0.1 cd/m² encodes to 0 and 80 cd/m² to 255, the range an sRGB display
//! covers. Any other curve can be loaded from a two-column text file.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hdr_io::{CodePlane, LumaPlane, LumaUnits, Plane};

pub const PU_MIN_LOG10: f64 = -5.0;
pub const PU_MAX_LOG10: f64 = 8.0;
/// Table nodes per decade of luminance.
pub const PU_NODES_PER_DECADE: usize = 32;
/// Luminance encoded to 0 and to 255 by the built-in table.
pub const PU_LDR_BLACK: f64 = 0.1;
pub const PU_LDR_WHITE: f64 = 80.0;

const STEPS_PER_NODE: usize = 64;

/// log10 of the photopic detection threshold ΔL at adaptation luminance La.
pub fn cone_threshold_log10(log_la: f64) -> f64 {
    if log_la <= -2.6 {
        -0.72
    } else if log_la >= 1.9 {
        log_la - 1.255
    } else {
        (0.249 * log_la + 0.65).powf(2.7) - 0.72
    }
}

/// JNDs per decade of luminance: `d P / d log10 L = ln(10) · L / ΔL`.
fn jnd_density(log_l: f64) -> f64 {
    std::f64::consts::LN_10 * 10f64.powf(log_l - cone_threshold_log10(log_l))
}

/// Composite Simpson integral of the JND density over `[a, b]` in log10 L.
fn jnd_integral(a: f64, b: f64, steps: usize) -> f64 {
    let steps = steps.max(2) & !1;
    let h = (b - a) / steps as f64;
    let mut sum = jnd_density(a) + jnd_density(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * jnd_density(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuTransfer {
    log_lum: Vec<f64>,
    values: Vec<f64>,
}

impl Default for PuTransfer {
    fn default() -> Self {
        Self::built_in()
    }
}

impl PuTransfer {
    /// Validates and wraps a node table. Both columns must be strictly
    /// increasing and finite; at least two nodes are needed.
    pub fn new(log_lum: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if log_lum.len() != values.len() {
            return Err(Error::InvalidTransfer(format!(
                "{} luminance nodes but {} values",
                log_lum.len(),
                values.len()
            )));
        }
        if log_lum.len() < 2 {
            return Err(Error::InvalidTransfer("need at least two nodes".into()));
        }
        if log_lum.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTransfer("non-finite node".into()));
        }
        for i in 1..log_lum.len() {
            if log_lum[i] <= log_lum[i - 1] || values[i] <= values[i - 1] {
                return Err(Error::InvalidTransfer(format!(
                    "table is not strictly increasing at node {i} ({}, {})",
                    log_lum[i], values[i]
                )));
            }
        }
        Ok(Self { log_lum, values })
    }

    /// The JND-integrated table described in the module docs.
    pub fn built_in() -> Self {
        let n = ((PU_MAX_LOG10 - PU_MIN_LOG10) as usize) * PU_NODES_PER_DECADE;
        let step = 1.0 / PU_NODES_PER_DECADE as f64;
        let log_lum: Vec<f64> = (0..=n).map(|i| PU_MIN_LOG10 + i as f64 * step).collect();
        let mut raw = Vec::with_capacity(log_lum.len());
        let mut acc = 0.0;
        raw.push(0.0);
        for pair in log_lum.windows(2) {
            acc += jnd_integral(pair[0], pair[1], STEPS_PER_NODE);
            raw.push(acc);
        }
        let raw_at = |log_l: f64| jnd_integral(PU_MIN_LOG10, log_l, 16_384);
        let lo = raw_at(PU_LDR_BLACK.log10());
        let hi = raw_at(PU_LDR_WHITE.log10());
        let scale = 255.0 / (hi - lo);
        let values = raw.into_iter().map(|r| (r - lo) * scale).collect();
        Self::new(log_lum, values).expect("built-in PU table is monotone")
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.log_lum.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.log_lum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_lum.is_empty()
    }

    /// Luminance range (cd/m²) covered by the table.
    pub fn domain(&self) -> (f64, f64) {
        (10f64.powf(self.log_lum[0]), 10f64.powf(*self.log_lum.last().unwrap()))
    }

    /// Encodes one luminance value. Values outside the table's domain are
    /// clamped to its ends; the flag reports whether that happened.
    pub fn encode(&self, luminance: f64) -> (f64, bool) {
        let last = self.log_lum.len() - 1;
        let x = if luminance > 0.0 { luminance.log10() } else { f64::NEG_INFINITY };
        if x < self.log_lum[0] {
            return (self.values[0], true);
        }
        if x > self.log_lum[last] {
            return (self.values[last], true);
        }
        let hi = self.log_lum.partition_point(|&v| v < x).max(1);
        let lo = hi - 1;
        if self.log_lum[hi] == x {
            return (self.values[hi], false);
        }
        let t = (x - self.log_lum[lo]) / (self.log_lum[hi] - self.log_lum[lo]);
        (self.values[lo] + t * (self.values[hi] - self.values[lo]), false)
    }

    /// Parses two whitespace- or comma-separated columns
    /// (log10 luminance, PU value). `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut log_lum = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> =
                line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::InvalidTransfer(format!("line {}: bad number `{s}`", lineno + 1)))
            };
            match cols.as_slice() {
                [a, b] => {
                    log_lum.push(parse(a)?);
                    values.push(parse(b)?);
                }
                _ => return Err(Error::InvalidTransfer(format!("line {}: expected two columns", lineno + 1))),
            }
        }
        Self::new(log_lum, values)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# log10(cd/m^2)\tPU\n");
        for (l, v) in self.nodes() {
            let _ = writeln!(out, "{l:.6}\t{v:.9}");
        }
        out
    }
}

/// PU-encoded plane plus the number of samples clamped into the table domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PuEncoded {
    pub plane: CodePlane,
    pub clamped: usize,
}

/// Encodes absolute luminance (cd/m²) into PU code values.
pub fn pu_encode(luminance: &LumaPlane, transfer: &PuTransfer) -> Result<PuEncoded> {
    if luminance.units() != LumaUnits::Absolute {
        return Err(Error::InvalidParameter {
            name: "luminance units",
            reason: format!("PU encoding needs absolute luminance, got {:?}", luminance.units()),
        });
    }
    let mut clamped = 0;
    let data = luminance
        .data()
        .iter()
        .map(|&l| {
            let (v, c) = transfer.encode(l);
            clamped += usize::from(c);
            v
        })
        .collect();
    if clamped > 0 {
        log::warn!("PU encoding clamped {clamped} samples outside the table domain");
    }
    Ok(PuEncoded { plane: Plane::from_parts(luminance.width(), luminance.height(), data), clamped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_table_shape() {
        let t = PuTransfer::built_in();
        assert!(t.len() >= 64);
        let (lo, hi) = t.domain();
        assert!((lo - 1e-5).abs() < 1e-18 && (hi - 1e8).abs() < 1e-3);
        assert!((t.encode(PU_LDR_BLACK).0).abs() <= 2.0);
        assert!((t.encode(PU_LDR_WHITE).0 - 255.0).abs() <= 2.0);
    }

    #[test]
    fn nodes_reproduce_exactly() {
        let t = PuTransfer::built_in();
        for (l, v) in t.nodes().step_by(7) {
            let (enc, clamped) = t.encode(10f64.powf(l));
            assert!(!clamped);
            // 10^l then log10 may move by an ulp; the slope bounds the effect
            assert!((enc - v).abs() < 1e-9, "{l}: {enc} vs {v}");
        }
        let small = PuTransfer::new(vec![0.0, 1.0, 2.0], vec![0.0, 10.0, 30.0]).unwrap();
        assert_eq!(small.encode(10.0), (10.0, false));
        assert_eq!(small.encode(1.0), (0.0, false));
        assert_eq!(small.encode(100.0), (30.0, false));
    }

    #[test]
    fn clamps_outside_domain() {
        let t = PuTransfer::built_in();
        assert!(t.encode(0.0).1);
        assert!(t.encode(1e-6).1);
        assert!(t.encode(1e9).1);
        let p = LumaPlane::new(Plane::new(2, 1, vec![0.0, 100.0]).unwrap(), LumaUnits::Absolute).unwrap();
        assert_eq!(pu_encode(&p, &t).unwrap().clamped, 1);
    }

    #[test]
    fn text_round_trip_and_validation() {
        let t = PuTransfer::new(vec![-1.0, 0.0, 2.5], vec![-3.0, 1.0, 9.0]).unwrap();
        let back = PuTransfer::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(PuTransfer::from_text("0 1\n1 1\n").is_err());
        assert!(PuTransfer::from_text("0 1\n1\n").is_err());
        assert!(PuTransfer::from_text("0, 1\n# c\n1, 2 # trailing\n").is_ok());
        assert!(PuTransfer::from_text("1 0\n0 1\n").is_err());
    }

    #[test]
    fn threshold_branches_are_nearly_continuous() {
        let below = cone_threshold_log10(1.9 - 1e-9);
        let above = cone_threshold_log10(1.9);
        assert!((below - above).abs() < 0.01);
        assert!((cone_threshold_log10(-2.6 + 1e-9) + 0.72).abs() < 1e-6);
    }
}
