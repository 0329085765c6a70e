use std::fs;

use anyhow::{Context, Result};
use hdrqa_core::adapters::DisplayModel;
use hdrqa_core::display::{ideal_emitted, reconstruction_error, simulate_emitted, split_sequence, DisplayParams};
use rayon::prelude::*;

use crate::config::{DisplayArgs, RunConfig};
use crate::seqio::{load_sequence, pgm, ppm, raw_f32};

pub const SUMMARY_FILE: &str = "summary.csv";

pub fn run(config: &RunConfig, args: &DisplayArgs) -> Result<()> {
    let frames = load_sequence(&args.input, args.width, args.height)?;
    let params =
        DisplayParams { key: args.key, psf_size: args.psf_size, psf_sigma: args.psf_sigma, ..Default::default() };
    let model = DisplayModel { peak: args.peak, contrast: args.contrast, black_level: args.black };
    let signals = split_sequence(&frames, &params)?;
    let emitted = simulate_emitted(&signals, &model)?;
    let ideal = ideal_emitted(&frames, &model);
    let errors = emitted
        .par_iter()
        .zip(&ideal)
        .map(|(e, i)| reconstruction_error(e, i))
        .collect::<hdrqa_core::Result<Vec<f64>>>()?;

    config.write_echo()?;
    let write = |name: String, bytes: Vec<u8>| {
        let path = config.out(&name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    };
    let mut summary = csv::Writer::from_path(config.out(SUMMARY_FILE))?;
    summary.write_record(["frame", "clamp_fraction", "emitted_min", "emitted_max", "log10_rms_error"])?;
    let mut sequence_max = 0f64;
    for (i, ((s, e), err)) in signals.iter().zip(&emitted).zip(&errors).enumerate() {
        write(format!("projector_{i:05}.pgm"), pgm(&s.projector))?;
        write(format!("lcd_{i:05}.ppm"), ppm(&s.lcd))?;
        write(format!("emitted_{i:05}.f32"), raw_f32(e.plane()))?;
        let (lo, hi) = (e.plane().min(), e.max());
        sequence_max = sequence_max.max(hi);
        summary.write_record([
            i.to_string(),
            s.clamp_fraction().to_string(),
            lo.to_string(),
            hi.to_string(),
            err.to_string(),
        ])?;
        println!(
            "frame {i}: clamp fraction {:.6}, emitted {lo:.4}..{hi:.4} cd/m2, log10 RMS error {err:.4}",
            s.clamp_fraction()
        );
    }
    summary.flush()?;
    println!("sequence emitted max: {sequence_max} cd/m2");
    Ok(())
}
