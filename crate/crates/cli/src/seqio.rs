//! Reading and writing frame sequences and the raster side outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hdrqa_core::hdr_io::{read_rgbe, read_yuv12, write_rgbe, yuv12_frame_count, yuv_to_rgb, YuvMatrix};
use hdrqa_core::{HdrFrame, Plane};

use crate::{DataError, UsageError};

fn hdr_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("hdr")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(hdrqa_core::Error::Empty("no .hdr frames in input directory"))
            .with_context(|| dir.display().to_string());
    }
    Ok(files)
}

fn read_hdr(path: &Path) -> Result<HdrFrame> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_rgbe(&bytes).with_context(|| format!("decoding {}", path.display()))
}

/// Loads a directory of `.hdr` frames (name order), one `.hdr` file, or a
/// raw 12-bit 4:2:0 `.yuv` stream of the given geometry.
pub fn load_sequence(path: &Path, width: Option<usize>, height: Option<usize>) -> Result<Vec<HdrFrame>> {
    if !path.exists() {
        bail!(DataError(format!("{}: no such file or directory", path.display())));
    }
    if path.is_dir() {
        return hdr_files(path)?.iter().map(|p| read_hdr(p)).collect();
    }
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "hdr" | "pic" => Ok(vec![read_hdr(path)?]),
        "yuv" => {
            let (Some(w), Some(h)) = (width, height) else {
                bail!(UsageError(format!("{}: .yuv input needs --width and --height", path.display())));
            };
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let count = yuv12_frame_count(bytes.len(), w, h);
            if count == 0 {
                return Err(hdrqa_core::Error::Empty("yuv stream shorter than one frame"))
                    .with_context(|| path.display().to_string());
            }
            (0..count)
                .map(|i| {
                    let f = read_yuv12(&bytes, w, h, i).with_context(|| format!("{} frame {i}", path.display()))?;
                    Ok(yuv_to_rgb(&f, YuvMatrix::Bt709))
                })
                .collect()
        }
        _ => bail!(UsageError(format!(
            "{}: expected a directory of .hdr frames, a .hdr file or a .yuv stream",
            path.display()
        ))),
    }
}

pub fn frame_name(index: usize) -> String {
    format!("frame_{index:05}.hdr")
}

pub fn write_sequence(dir: &Path, frames: &[HdrFrame]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, f) in frames.iter().enumerate() {
        let path = dir.join(frame_name(i));
        fs::write(&path, write_rgbe(f)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// 8-bit binary PGM of a `[0, 1]` plane.
pub fn pgm(plane: &Plane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend(plane.data().iter().map(|&v| to_u8(v)));
    out
}

/// 8-bit binary PPM of a `[0, 1]` RGB frame.
pub fn ppm(frame: &HdrFrame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend(frame.data().iter().map(|&v| to_u8(v)));
    out
}

/// Row-major little-endian `f32` samples, no header.
pub fn raw_f32(plane: &Plane) -> Vec<u8> {
    plane.data().iter().flat_map(|&v| (v as f32).to_le_bytes()).collect()
}

/// File stem used as a default sequence or clip name.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequence".to_owned())
}
