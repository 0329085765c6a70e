//! Raw planar YUV 4:2:0 with 12-bit samples in 16-bit little-endian words.
//!
//! Files carry no header; geometry comes from the sequence manifest. Frames
//! are stored back to back as `Y` (w×h), `U` (w/2×h/2), `V` (w/2×h/2).

use crate::error::{Error, Result};

pub const MAX_12BIT: u16 = 4095;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Yuv12Frame {
    width: usize,
    height: usize,
    y: Vec<u16>,
    u: Vec<u16>,
    v: Vec<u16>,
}

impl Yuv12Frame {
    pub fn new(width: usize, height: usize, y: Vec<u16>, u: Vec<u16>, v: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 || !width.is_multiple_of(2) || !height.is_multiple_of(2) {
            return Err(Error::InvalidDimensions { width, height });
        }
        let chroma = (width / 2) * (height / 2);
        if y.len() != width * height {
            return Err(Error::LengthMismatch(y.len(), width * height));
        }
        for (name, plane) in [("U", &u), ("V", &v)] {
            if plane.len() != chroma {
                return Err(Error::InvalidParameter {
                    name: "chroma plane",
                    reason: format!("{name} has {} samples, expected {chroma}", plane.len()),
                });
            }
        }
        for (name, plane) in [("Y", &y), ("U", &u), ("V", &v)] {
            if let Some((index, &value)) = plane.iter().enumerate().find(|(_, s)| **s > MAX_12BIT) {
                return Err(Error::SampleOutOfRange { plane: name, index, value });
            }
        }
        Ok(Self { width, height, y, u, v })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn chroma_width(&self) -> usize {
        self.width / 2
    }

    pub fn chroma_height(&self) -> usize {
        self.height / 2
    }

    pub fn y(&self) -> &[u16] {
        &self.y
    }

    pub fn u(&self) -> &[u16] {
        &self.u
    }

    pub fn v(&self) -> &[u16] {
        &self.v
    }
}

/// Bytes occupied by one frame.
pub fn yuv12_frame_stride(width: usize, height: usize) -> usize {
    width * height * 2 + 2 * (width / 2) * (height / 2) * 2
}

/// Number of complete frames in a buffer of `len` bytes.
pub fn yuv12_frame_count(len: usize, width: usize, height: usize) -> usize {
    match yuv12_frame_stride(width, height) {
        0 => 0,
        stride => len / stride,
    }
}

pub fn read_yuv12(bytes: &[u8], width: usize, height: usize, frame_index: usize) -> Result<Yuv12Frame> {
    if width == 0 || height == 0 || !width.is_multiple_of(2) || !height.is_multiple_of(2) {
        return Err(Error::InvalidDimensions { width, height });
    }
    let stride = yuv12_frame_stride(width, height);
    let start = frame_index * stride;
    let needed = start + stride;
    if bytes.len() < needed {
        return Err(Error::ShortRead { needed, available: bytes.len() });
    }
    let luma = width * height;
    let chroma = (width / 2) * (height / 2);
    let words = |from: usize, count: usize| -> Vec<u16> {
        bytes[from..from + count * 2].chunks_exact(2).map(|b| u16::from_le_bytes([b[0], b[1]])).collect()
    };
    let y = words(start, luma);
    let u = words(start + luma * 2, chroma);
    let v = words(start + (luma + chroma) * 2, chroma);
    Yuv12Frame::new(width, height, y, u, v)
}

pub fn write_yuv12(frame: &Yuv12Frame) -> Vec<u8> {
    let mut out = Vec::with_capacity(yuv12_frame_stride(frame.width, frame.height));
    for s in frame.y.iter().chain(&frame.u).chain(&frame.v) {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}
