use std::io::Cursor;

use hdrqa_core::hdr_io::{
    read_rgbe, read_yuv12, rgbe_decode_pixel, rgbe_encode_pixel, write_rgbe, write_yuv12, Yuv12Frame,
};
use hdrqa_core::HdrFrame;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_frame(rng: &mut ChaCha8Rng, w: usize, h: usize) -> HdrFrame {
    HdrFrame::from_fn(w, h, |_, _| {
        let scale = 2f64.powi(rng.random_range(-20..20));
        [rng.random::<f64>() * scale, rng.random::<f64>() * scale, rng.random::<f64>() * scale]
    })
    .unwrap()
}

/// Per-channel bound of the shared-exponent format: the error of every
/// channel is at most 1/256 of the pixel's largest channel.
fn within_rgbe_bound(orig: &HdrFrame, back: &HdrFrame) -> bool {
    orig.pixels().zip(back.pixels()).all(|(a, b)| {
        let m = a.iter().chain(b).fold(0.0f64, |m, &v| m.max(v));
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= m / 256.0)
    })
}

#[test]
fn decoder_agrees_with_image_crate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (w, h) in [(37, 5), (64, 16), (5, 3)] {
        let frame = random_frame(&mut rng, w, h);
        let bytes = write_rgbe(&frame);
        let ours = read_rgbe(&bytes).unwrap();
        let decoder = image::codecs::hdr::HdrDecoder::new(Cursor::new(&bytes)).unwrap();
        let theirs = image::DynamicImage::from_decoder(decoder).unwrap().into_rgb32f();
        assert_eq!((theirs.width() as usize, theirs.height() as usize), (w, h));
        for (x, y, px) in theirs.enumerate_pixels() {
            let mine = ours.pixel(x as usize, y as usize);
            for (c, (&m, &t)) in mine.iter().zip(&px.0).enumerate() {
                let t = f64::from(t);
                assert!((m - t).abs() <= 1e-6 * t.abs().max(1e-30), "({x},{y})[{c}]: {m} vs {t}");
            }
        }
    }
}

#[test]
fn hundred_random_frames_round_trip_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let frame = random_frame(&mut rng, 48, 32);
        let back = read_rgbe(&write_rgbe(&frame)).unwrap();
        assert!(within_rgbe_bound(&frame, &back));
        for (a, b) in frame.pixels().zip(back.pixels()) {
            let (i, &m) = a.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap();
            if m > 0.0 {
                assert!((b[i] - m).abs() / m <= 1.0 / 256.0);
            }
        }
    }
}

#[test]
fn exponent_zero_is_black() {
    assert_eq!(rgbe_decode_pixel([200, 10, 3, 0]), [0.0; 3]);
    assert_eq!(rgbe_encode_pixel([0.0; 3]), [0, 0, 0, 0]);
    assert_eq!(rgbe_decode_pixel([128, 64, 0, 129]), [1.0, 0.5, 0.0]);
}

#[test]
fn yuv_round_trip_is_byte_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (w, h) = (16, 10);
    let mut plane = |n: usize| (0..n).map(|_| rng.random_range(0..=4095u16)).collect::<Vec<_>>();
    let (y, u, v) = (plane(w * h), plane(w * h / 4), plane(w * h / 4));
    let frame = Yuv12Frame::new(w, h, y, u, v).unwrap();
    let bytes = write_yuv12(&frame);
    let back = read_yuv12(&bytes, w, h, 0).unwrap();
    assert_eq!(write_yuv12(&back), bytes);
    assert_eq!(back, frame);
}

proptest! {
    #[test]
    fn single_pixel_bound(r in 0.0f64..1e6, g in 0.0f64..1e6, b in 0.0f64..1e6) {
        let f = HdrFrame::new(1, 1, vec![r, g, b]).unwrap();
        let back = read_rgbe(&write_rgbe(&f)).unwrap();
        prop_assert!(within_rgbe_bound(&f, &back));
    }

    #[test]
    fn encoding_is_idempotent(r in 0.0f64..1e3, g in 0.0f64..1e3, b in 0.0f64..1e3) {
        let q = rgbe_encode_pixel([r, g, b]);
        prop_assert_eq!(rgbe_encode_pixel(rgbe_decode_pixel(q)), q);
    }
}
