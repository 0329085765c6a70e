//! The built-in PU table against an independent fine-grained trapezoid
//! integration of the cone threshold-versus-intensity JND density.

use hdrqa_core::adapters::{pu_encode, PuTransfer};
use hdrqa_core::hdr_io::{LumaPlane, LumaUnits};
use hdrqa_core::Plane;

fn log_threshold(la: f64) -> f64 {
    // photopic TVI, log10 ΔL as a function of log10 La
    match la {
        l if l <= -2.6 => -0.72,
        l if l >= 1.9 => l - 1.255,
        l => (0.249 * l + 0.65).powf(2.7) - 0.72,
    }
}

fn trapezoid(a: f64, b: f64) -> f64 {
    let steps = (((b - a) / 1e-4).ceil() as usize).max(1);
    let h = (b - a) / steps as f64;
    let f = |x: f64| std::f64::consts::LN_10 * 10f64.powf(x - log_threshold(x));
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..steps {
        s += f(a + i as f64 * h);
    }
    s * h
}

fn oracle(l: f64) -> f64 {
    let lo = trapezoid(-5.0, 0.1f64.log10());
    let hi = trapezoid(-5.0, 80f64.log10());
    (trapezoid(-5.0, l.log10()) - lo) * 255.0 / (hi - lo)
}

#[test]
fn anchors() {
    let t = PuTransfer::built_in();
    // 0.1 cd/m2 is a node; 80 cd/m2 falls between nodes, so linear
    // interpolation lands within a fraction of a code value
    assert!(t.encode(0.1).0.abs() < 1e-9);
    assert!((t.encode(80.0).0 - 255.0).abs() <= 2.0, "{}", t.encode(80.0).0);
    assert_eq!(t.len(), 417);
}

#[test]
fn nodes_match_reintegration() {
    let t = PuTransfer::built_in();
    for (log_l, v) in t.nodes().step_by(7) {
        let want = oracle(10f64.powf(log_l));
        assert!((v - want).abs() <= 1e-5 * want.abs().max(1.0), "L=1e{log_l}: {v} vs {want}");
    }
}

#[test]
fn between_nodes_interpolation_is_close() {
    let t = PuTransfer::built_in();
    for l in [0.37, 2.2, 17.0, 123.0, 1350.0, 2700.0] {
        let (v, clamped) = t.encode(l);
        assert!(!clamped);
        assert!((v - oracle(l)).abs() < 0.05 * oracle(l).abs().max(1.0), "{l}");
    }
}

#[test]
fn monotone_and_clamped_outside_domain() {
    let t = PuTransfer::built_in();
    let mut prev = f64::NEG_INFINITY;
    for i in 0..2000 {
        let l = 10f64.powf(-5.0 + 13.0 * i as f64 / 1999.0);
        let v = t.encode(l).0;
        assert!(v > prev || i == 0);
        prev = v;
    }
    assert!(t.encode(1e-7).1);
    assert!(t.encode(1e9).1);
    let abs = LumaPlane::new(Plane::new(2, 1, vec![1e-9, 100.0]).unwrap(), LumaUnits::Absolute).unwrap();
    let enc = pu_encode(&abs, &t).unwrap();
    assert_eq!(enc.clamped, 1);
}

#[test]
fn text_table_round_trip() {
    let t = PuTransfer::built_in();
    let back = PuTransfer::from_text(&t.to_text()).unwrap();
    for l in [0.5, 30.0, 900.0] {
        assert!((back.encode(l).0 - t.encode(l).0).abs() < 1e-6);
    }
}
