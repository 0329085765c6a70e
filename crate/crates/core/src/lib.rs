#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Quality assessment toolkit for HDR video: file formats, synthetic
//! impairments, full-reference metrics and their HDR adaptations, a
//! dual-modulation display model and subjective-score statistics.

pub mod adapters;
pub mod display;
pub mod distortion;
pub mod error;
pub mod filter;
pub mod hdr_io;
pub mod metrics;
pub mod rng;
pub mod subjective;

pub use error::{Error, Result};
pub use hdr_io::{HdrFrame, LumaPlane, Plane};
pub use metrics::{Metric, MetricResult};
