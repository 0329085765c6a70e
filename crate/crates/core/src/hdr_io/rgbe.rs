//! Radiance `.hdr` (RGBE) codec.
//!
//! Pixels are four bytes: three 8-bit mantissas sharing one exponent byte.
//! Scanlines are written with the adaptive run-length scheme whenever the
//! width allows it (8..=32767), otherwise flat. Both that scheme and the
//! older repeat-pixel encoding are accepted on read.

use super::frame::HdrFrame;
use crate::error::{Error, Result};

const MIN_RLE_WIDTH: usize = 8;
const MAX_RLE_WIDTH: usize = 0x7fff;
const MIN_RUN: usize = 4;

/// Decodes one RGBE quad. A zero exponent is the exact-zero sentinel.
pub fn rgbe_decode_pixel(quad: [u8; 4]) -> [f64; 3] {
    let [r, g, b, e] = quad;
    if e == 0 {
        return [0.0; 3];
    }
    // mantissa / 256 * 2^(e - 128)
    let scale = (i32::from(e) - 136).into_exp2();
    [f64::from(r) * scale, f64::from(g) * scale, f64::from(b) * scale]
}

/// Encodes one pixel with round-to-nearest mantissas.
///
/// The largest channel's mantissa lands in `[128, 255]`, so every channel's
/// absolute error is at most `max(r, g, b) / 256`. Pixels too dark for the
/// smallest exponent encode as zero; pixels beyond the largest saturate.
pub fn rgbe_encode_pixel(rgb: [f64; 3]) -> [u8; 4] {
    let max = rgb[0].max(rgb[1]).max(rgb[2]);
    if !(max > 0.0) {
        return [0; 4];
    }
    // max lies in [2^(exp-1), 2^exp)
    let mut exp = max.log2().floor() as i32 + 1;
    while max >= exp.into_exp2() {
        exp += 1;
    }
    while max < (exp - 1).into_exp2() {
        exp -= 1;
    }
    let mut scale = (8 - exp).into_exp2();
    if (max * scale).round() >= 256.0 {
        exp += 1;
        scale *= 0.5;
    }
    let biased = exp + 128;
    if biased < 1 {
        return [0; 4];
    }
    if biased > 255 {
        return [255; 4];
    }
    let q = |c: f64| (c * scale).round().clamp(0.0, 255.0) as u8;
    [q(rgb[0]), q(rgb[1]), q(rgb[2]), biased as u8]
}

trait Exp2 {
    fn into_exp2(self) -> f64;
}

impl Exp2 for i32 {
    fn into_exp2(self) -> f64 {
        f64::from(self).exp2()
    }
}

/// Parses a complete Radiance file held in memory.
pub fn read_rgbe(bytes: &[u8]) -> Result<HdrFrame> {
    let (width, height, mut pos) = parse_header(bytes)?;
    let mut data = Vec::with_capacity(width * height * 3);
    let mut line = vec![[0u8; 4]; width];
    for row in 0..height {
        pos = read_scanline(bytes, pos, &mut line, row)?;
        for quad in &line {
            data.extend_from_slice(&rgbe_decode_pixel(*quad));
        }
    }
    Ok(HdrFrame::from_parts(width, height, data))
}

/// Serializes a frame as a Radiance file with top-to-bottom, left-to-right
/// pixel ordering.
pub fn write_rgbe(frame: &HdrFrame) -> Vec<u8> {
    let (width, height) = (frame.width(), frame.height());
    let mut out = Vec::with_capacity(width * height * 4 + 64);
    out.extend_from_slice(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n");
    out.extend_from_slice(format!("-Y {height} +X {width}\n").as_bytes());

    let use_rle = (MIN_RLE_WIDTH..=MAX_RLE_WIDTH).contains(&width);
    let mut channel = vec![0u8; width];
    for row in 0..height {
        let quads: Vec<[u8; 4]> = (0..width).map(|x| rgbe_encode_pixel(frame.pixel(x, row))).collect();
        if !use_rle {
            quads.iter().for_each(|q| out.extend_from_slice(q));
            continue;
        }
        out.extend_from_slice(&[2, 2, (width >> 8) as u8, (width & 0xff) as u8]);
        for c in 0..4 {
            for (dst, q) in channel.iter_mut().zip(&quads) {
                *dst = q[c];
            }
            encode_channel_rle(&channel, &mut out);
        }
    }
    out
}

fn parse_header(bytes: &[u8]) -> Result<(usize, usize, usize)> {
    let mut pos = 0;
    let next_line = |pos: &mut usize| -> Option<&[u8]> {
        if *pos >= bytes.len() {
            return None;
        }
        let start = *pos;
        let end = bytes[start..].iter().position(|&b| b == b'\n').map_or(bytes.len(), |i| start + i);
        *pos = (end + 1).min(bytes.len());
        Some(&bytes[start..end])
    };

    let magic = next_line(&mut pos).ok_or_else(|| Error::MalformedHeader("empty input".into()))?;
    if !magic.starts_with(b"#?") {
        return Err(Error::MalformedHeader("missing `#?RADIANCE` signature".into()));
    }
    loop {
        let line = next_line(&mut pos)
            .ok_or_else(|| Error::MalformedHeader("header is not terminated by a blank line".into()))?;
        if line.is_empty() {
            break;
        }
        if let Some(format) = line.strip_prefix(b"FORMAT=") {
            if format.trim_ascii() != b"32-bit_rle_rgbe" {
                return Err(Error::MalformedHeader(format!(
                    "unsupported FORMAT `{}`",
                    String::from_utf8_lossy(format)
                )));
            }
        }
    }
    let res = next_line(&mut pos).ok_or_else(|| Error::MalformedHeader("missing resolution line".into()))?;
    let res = std::str::from_utf8(res).map_err(|_| Error::MalformedHeader("resolution line is not text".into()))?;
    let tokens: Vec<&str> = res.split_whitespace().collect();
    if tokens.len() != 4 {
        return Err(Error::MalformedHeader(format!("bad resolution line `{res}`")));
    }
    let is_axis = |t: &str| matches!(t, "-Y" | "+Y" | "-X" | "+X");
    if !is_axis(tokens[0]) || !is_axis(tokens[2]) {
        return Err(Error::MalformedHeader(format!("bad resolution line `{res}`")));
    }
    let parse = |t: &str| {
        t.parse::<usize>().ok().filter(|v| *v > 0).ok_or_else(|| Error::MalformedHeader(format!("bad dimension `{t}`")))
    };
    let (major, minor) = (parse(tokens[1])?, parse(tokens[3])?);
    if tokens[0] != "-Y" || tokens[2] != "+X" {
        return Err(Error::UnsupportedOrientation(res.trim().to_string()));
    }
    Ok((minor, major, pos))
}

fn read_scanline(bytes: &[u8], mut pos: usize, line: &mut [[u8; 4]], row: usize) -> Result<usize> {
    let width = line.len();
    let truncated = |detail: &str| Error::TruncatedScanline { row, detail: detail.to_string() };
    let rle_marker = bytes.get(pos..pos + 4).is_some_and(|b| b[0] == 2 && b[1] == 2 && b[2] & 0x80 == 0);
    if !(MIN_RLE_WIDTH..=MAX_RLE_WIDTH).contains(&width) || !rle_marker {
        return read_flat_scanline(bytes, pos, line, row);
    }

    let encoded_width = (usize::from(bytes[pos + 2]) << 8) | usize::from(bytes[pos + 3]);
    if encoded_width != width {
        return Err(truncated(&format!("scanline width {encoded_width} does not match image width {width}")));
    }
    pos += 4;
    for c in 0..4 {
        let mut x = 0;
        while x < width {
            let count = *bytes.get(pos).ok_or_else(|| truncated("unexpected end of data"))?;
            pos += 1;
            if count > 128 {
                let run = usize::from(count - 128);
                if x + run > width {
                    return Err(truncated("run overflows scanline"));
                }
                let value = *bytes.get(pos).ok_or_else(|| truncated("unexpected end of data"))?;
                pos += 1;
                line[x..x + run].iter_mut().for_each(|q| q[c] = value);
                x += run;
            } else {
                let n = usize::from(count);
                if n == 0 || x + n > width {
                    return Err(truncated("bad literal count"));
                }
                let src = bytes.get(pos..pos + n).ok_or_else(|| truncated("unexpected end of data"))?;
                for (q, &v) in line[x..x + n].iter_mut().zip(src) {
                    q[c] = v;
                }
                pos += n;
                x += n;
            }
        }
    }
    Ok(pos)
}

/// Flat quads, with the legacy `(1, 1, 1, n)` repeat-previous-pixel runs.
fn read_flat_scanline(bytes: &[u8], mut pos: usize, line: &mut [[u8; 4]], row: usize) -> Result<usize> {
    let width = line.len();
    let mut x = 0;
    let mut shift = 0u32;
    while x < width {
        let q = bytes
            .get(pos..pos + 4)
            .ok_or_else(|| Error::TruncatedScanline { row, detail: "unexpected end of data".into() })?;
        pos += 4;
        if q[0] == 1 && q[1] == 1 && q[2] == 1 {
            if x == 0 || shift > 24 {
                return Err(Error::TruncatedScanline { row, detail: "repeat run without a preceding pixel".into() });
            }
            let count = usize::from(q[3]) << shift;
            if x + count > width {
                return Err(Error::TruncatedScanline { row, detail: "repeat run overflows scanline".into() });
            }
            let prev = line[x - 1];
            line[x..x + count].fill(prev);
            x += count;
            shift += 8;
        } else {
            line[x] = [q[0], q[1], q[2], q[3]];
            x += 1;
            shift = 0;
        }
    }
    Ok(pos)
}

fn encode_channel_rle(data: &[u8], out: &mut Vec<u8>) {
    let flush_literals = |from: usize, to: usize, out: &mut Vec<u8>| {
        for chunk in data[from..to].chunks(128) {
            out.push(chunk.len() as u8);
            out.extend_from_slice(chunk);
        }
    };
    let n = data.len();
    let mut literal_start = 0;
    let mut i = 0;
    while i < n {
        let mut run = 1;
        while i + run < n && run < 127 && data[i + run] == data[i] {
            run += 1;
        }
        if run >= MIN_RUN {
            flush_literals(literal_start, i, out);
            out.push(128 + run as u8);
            out.push(data[i]);
            i += run;
            literal_start = i;
        } else {
            i += 1;
        }
    }
    flush_literals(literal_start, n, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_pixel_examples() {
        assert_eq!(rgbe_decode_pixel([0, 0, 0, 0]), [0.0, 0.0, 0.0]);
        assert_eq!(rgbe_decode_pixel([128, 128, 128, 129]), [1.0, 1.0, 1.0]);
        assert_eq!(rgbe_decode_pixel([255, 0, 0, 128]), [0.99609375, 0.0, 0.0]);
        // zero exponent wins over non-zero mantissas
        assert_eq!(rgbe_decode_pixel([200, 10, 3, 0]), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn encode_pixel_examples() {
        assert_eq!(rgbe_encode_pixel([1.0, 1.0, 1.0]), [128, 128, 128, 129]);
        assert_eq!(rgbe_encode_pixel([0.0, 0.0, 0.0]), [0, 0, 0, 0]);
        // rounding the dominant mantissa up to 256 renormalizes the exponent
        let q = rgbe_encode_pixel([0.999_999, 0.5, 0.0]);
        assert_eq!(q, [128, 64, 0, 129]);
    }

    #[test]
    fn rle_channel_encoding_decodes_back() {
        let data: Vec<u8> = [vec![7u8; 200], (0..=255).collect(), vec![3, 3, 3], vec![9; 4]].concat();
        let mut enc = Vec::new();
        encode_channel_rle(&data, &mut enc);
        let mut dec = Vec::new();
        let mut p = 0;
        while p < enc.len() {
            let c = enc[p];
            p += 1;
            if c > 128 {
                dec.extend(std::iter::repeat_n(enc[p], usize::from(c - 128)));
                p += 1;
            } else {
                dec.extend_from_slice(&enc[p..p + usize::from(c)]);
                p += usize::from(c);
            }
        }
        assert_eq!(dec, data);
        assert!(enc.len() < data.len());
    }

    #[test]
    fn header_errors_are_distinct() {
        assert!(matches!(read_rgbe(b"P6\n"), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            read_rgbe(b"#?RADIANCE\nFORMAT=32-bit_rle_xyze\n\n-Y 1 +X 1\n\0\0\0\0"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(read_rgbe(b"#?RADIANCE\n\n+Y 1 +X 1\n\0\0\0\0"), Err(Error::UnsupportedOrientation(_))));
        assert!(matches!(
            read_rgbe(b"#?RADIANCE\n\n-Y 2 +X 1\n\0\0\0\0"),
            Err(Error::TruncatedScanline { row: 1, .. })
        ));
        assert!(matches!(read_rgbe(b"#?RADIANCE\n\n-Y two +X 1\n"), Err(Error::MalformedHeader(_))));
    }

    #[test]
    fn legacy_repeat_runs_are_expanded() {
        let mut file = b"#?RADIANCE\n\n-Y 1 +X 5\n".to_vec();
        file.extend_from_slice(&[128, 128, 128, 129, 1, 1, 1, 4]);
        let frame = read_rgbe(&file).unwrap();
        assert!(frame.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn narrow_frames_use_flat_scanlines() {
        let frame = HdrFrame::filled(3, 2, [0.5, 0.25, 2.0]).unwrap();
        let bytes = write_rgbe(&frame);
        let header_len = bytes.windows(10).position(|w| w == b"-Y 2 +X 3\n".as_slice()).unwrap() + 10;
        assert_eq!(bytes.len() - header_len, 3 * 2 * 4);
        assert_eq!(read_rgbe(&bytes).unwrap(), frame);
    }
}
