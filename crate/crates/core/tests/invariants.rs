use hdrqa_core::filter::GaussianKernel;
use hdrqa_core::metrics::{psnr, ssim};
use hdrqa_core::subjective::{mos, pearson, rmse, screen_outliers, spearman, Category, ClipInfo, ScoreTable};
use hdrqa_core::Plane;
use proptest::prelude::*;

fn distinct(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len).prop_filter("needs spread", |v| {
        let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
        hi - lo > 1e-3
    })
}

fn table_strategy() -> impl Strategy<Value = ScoreTable> {
    (2usize..8, 1usize..6).prop_flat_map(|(subjects, clips)| {
        prop::collection::vec(prop::collection::vec(1i64..=10, clips), subjects).prop_map(move |rows| {
            let clip_info =
                (0..clips).map(|j| ClipInfo::new(format!("c{j}"), "Table", Category::NonCompression)).collect();
            ScoreTable::new((0..subjects).map(|i| format!("s{i}")).collect(), clip_info, rows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn pearson_is_affine_invariant(x in distinct(12), y in distinct(12), a in 0.1f64..10.0, b in -50.0f64..50.0) {
        let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert!((pearson(&x, &y).unwrap() - pearson(&xt, &y).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn spearman_is_monotone_invariant(x in distinct(10), y in distinct(10)) {
        let xt: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        prop_assert_eq!(spearman(&x, &y).unwrap(), spearman(&xt, &y).unwrap());
    }

    #[test]
    fn correlations_are_bounded(x in distinct(8), y in distinct(8)) {
        let p = pearson(&x, &y).unwrap();
        let s = spearman(&x, &y).unwrap();
        prop_assert!((-1.0..=1.0).contains(&p) && (-1.0..=1.0).contains(&s));
    }

    #[test]
    fn rmse_symmetric(x in prop::collection::vec(-10.0f64..10.0, 1..20), shift in -1.0f64..1.0) {
        let y: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let a = rmse(&x, &y).unwrap();
        prop_assert_eq!(a, rmse(&y, &x).unwrap());
        prop_assert!(a >= 0.0);
        prop_assert_eq!(rmse(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn mos_ignores_subject_order(t in table_strategy()) {
        let mut subjects = t.subjects().to_vec();
        let mut rows = t.scores().to_vec();
        subjects.reverse();
        rows.reverse();
        let r = ScoreTable::new(subjects, t.clips().to_vec(), rows).unwrap();
        for (a, b) in mos(&t).clips.iter().zip(&mos(&r).clips) {
            prop_assert!((a.mos - b.mos).abs() < 1e-12 && (a.ci95 - b.ci95).abs() < 1e-12);
            prop_assert!((1.0..=10.0).contains(&a.mos) && a.ci95 >= 0.0);
        }
    }

    #[test]
    fn screening_counts_are_auditable(t in table_strategy()) {
        let s = screen_outliers(&t).unwrap();
        for (d, row) in s.subjects.iter().zip(t.scores()) {
            let p = row.iter().zip(&s.clips).filter(|(v, c)| **v as f64 > c.upper).count();
            let q = row.iter().zip(&s.clips).filter(|(v, c)| (**v as f64) < c.lower).count();
            prop_assert_eq!((d.p, d.q), (p, q));
        }
        let reduced = t.without_subjects(&s.rejected);
        if let Ok(reduced) = reduced {
            if reduced.subject_count() >= 2 {
                prop_assert!(screen_outliers(&reduced).is_ok());
            }
        }
    }

    #[test]
    fn full_reference_metrics_are_symmetric(seed in 0u64..1000) {
        let a = Plane::from_fn(24, 24, |x, y| ((x * 31 + y * 7 + seed as usize) % 97) as f64).unwrap();
        let b = Plane::from_fn(24, 24, |x, y| ((x * 13 + y * 29 + seed as usize) % 89) as f64).unwrap();
        prop_assert_eq!(psnr(&a, &b, 255.0).unwrap(), psnr(&b, &a, 255.0).unwrap());
        let (s1, s2) = (ssim(&a, &b, 255.0).unwrap(), ssim(&b, &a, 255.0).unwrap());
        prop_assert!((s1 - s2).abs() < 1e-12 && s1 <= 1.0);
    }

    #[test]
    fn kernels_are_normalized(size in 1usize..20, sigma in 0.2f64..10.0) {
        let k = GaussianKernel::new(size, sigma).unwrap();
        prop_assert!((k.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let w = k.weights();
        for i in 0..size {
            prop_assert!((w[i] - w[size - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn blur_preserves_constant_planes(size in 1usize..14, v in 0.0f64..100.0) {
        let k = GaussianKernel::new(size, 2.0).unwrap();
        let p = Plane::filled(20, 17, v).unwrap();
        for &o in k.filter_same(&p).data() {
            prop_assert!((o - v).abs() <= 1e-12 * v.max(1.0));
        }
    }
}
