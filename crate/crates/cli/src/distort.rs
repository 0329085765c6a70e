use std::fs;

use anyhow::{bail, Context, Result};
use hdrqa_core::distortion::{distort_sequence, salt_pepper_count, DistortionSpec};
use hdrqa_core::hdr_io::{DatasetManifest, Environment, Lineage, Motion, SequenceManifest, SourceFormat, DML_HDR_FPS};
use hdrqa_core::HdrFrame;

use crate::config::{DistortArgs, RunConfig};
use crate::seqio::{load_sequence, stem, write_sequence};
use crate::UsageError;

pub const MANIFEST_FILE: &str = "manifest.toml";

pub fn spec_from_args(args: &DistortArgs) -> Result<DistortionSpec> {
    let d = match args.kind.as_str() {
        "awgn" => DistortionSpec::awgn(),
        "intensity_shift" => DistortionSpec::intensity_shift(),
        "salt_pepper" => DistortionSpec::salt_pepper(),
        "lowpass" => DistortionSpec::gaussian_lowpass(),
        "compression" => {
            // never runnable; report the non-goal before anything else
            let qp = args.qp.unwrap_or(22);
            return Ok(DistortionSpec::Compression { qp });
        }
        other => bail!(UsageError(format!("unknown distortion kind `{other}`"))),
    };
    Ok(match d {
        DistortionSpec::Awgn { sigma } => DistortionSpec::Awgn { sigma: args.sigma.unwrap_or(sigma) },
        DistortionSpec::IntensityShift { fraction } => {
            DistortionSpec::IntensityShift { fraction: args.fraction.unwrap_or(fraction) }
        }
        DistortionSpec::SaltPepper { fraction } => {
            DistortionSpec::SaltPepper { fraction: args.fraction.unwrap_or(fraction) }
        }
        DistortionSpec::GaussianLowpass { size, sigma } => {
            DistortionSpec::GaussianLowpass { size: args.size.unwrap_or(size), sigma: args.lpf_sigma.unwrap_or(sigma) }
        }
        other => other,
    })
}

fn parent_entry(args: &DistortArgs, frames: &[HdrFrame]) -> Result<SequenceManifest> {
    if let Some(path) = &args.manifest {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let manifest = DatasetManifest::from_toml(&text).with_context(|| path.display().to_string())?;
        let name = match (&args.sequence, manifest.sequences.as_slice()) {
            (Some(n), _) => n.clone(),
            (None, [only]) => only.name.clone(),
            (None, _) => bail!(UsageError("--sequence is required when the manifest lists several sequences".into())),
        };
        return manifest.find(&name).cloned().ok_or_else(|| {
            hdrqa_core::Error::InvalidManifest(format!("no sequence `{name}` in {}", path.display())).into()
        });
    }
    let first = &frames[0];
    Ok(SequenceManifest {
        name: args.sequence.clone().unwrap_or_else(|| stem(&args.input)),
        frames: frames.len() as u32,
        fps: DML_HDR_FPS,
        width: first.width() as u32,
        height: first.height() as u32,
        environment: Environment::Indoor,
        motion: Motion::Intermediate,
        format: SourceFormat::Rgbe,
        path: Some(args.input.display().to_string()),
        lineage: None,
        qp: None,
        bitrate_kbps: None,
    })
}

/// Seed actually used: stochastic kinds need one, deterministic kinds ignore it.
pub fn resolve_seed(spec: &DistortionSpec, seed: Option<u64>) -> Option<u64> {
    if !spec.is_stochastic() {
        return None;
    }
    Some(seed.unwrap_or_else(|| {
        let s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        log::info!("no --seed given; using {s} (recorded in the run echo)");
        s
    }))
}

pub fn run(config: &mut RunConfig, args: &DistortArgs) -> Result<()> {
    let spec = spec_from_args(args)?;
    if let DistortionSpec::Compression { .. } = spec {
        return Err(distort_sequence(&spec, &[], None).unwrap_err()).context("compression");
    }
    config.seed = resolve_seed(&spec, config.seed);
    spec.validate(config.seed)?;

    let frames = load_sequence(&args.input, args.width, args.height)?;
    let parent = parent_entry(args, &frames)?;
    let name = args.name.clone().unwrap_or_else(|| format!("{}_{}", parent.name, spec.kind_name()));
    let distorted = distort_sequence(&spec, &frames, config.seed)?;

    config.write_echo()?;
    write_sequence(&config.out(&name), &distorted)?;

    let modified = match spec {
        DistortionSpec::SaltPepper { fraction } => Some(salt_pepper_count(frames[0].pixel_count(), fraction) as u64),
        _ => None,
    };
    let entry = SequenceManifest {
        name: name.clone(),
        frames: distorted.len() as u32,
        width: frames[0].width() as u32,
        height: frames[0].height() as u32,
        format: SourceFormat::Rgbe,
        path: Some(name.clone()),
        lineage: Some(Lineage {
            parent: parent.name.clone(),
            distortion: spec.clone(),
            seed: config.seed,
            modified_pixels_per_frame: modified,
        }),
        qp: None,
        bitrate_kbps: None,
        ..parent
    };
    let manifest = DatasetManifest::new(Some(format!("{name} (derived)")), vec![entry]);
    manifest.validate()?;
    let path = config.out(MANIFEST_FILE);
    fs::write(&path, manifest.to_toml()).with_context(|| format!("writing {}", path.display()))?;
    println!(
        "{name}: {} frames, {}{}",
        distorted.len(),
        spec.kind_name(),
        modified.map(|m| format!(", {m} modified pixels per frame")).unwrap_or_default()
    );
    Ok(())
}
