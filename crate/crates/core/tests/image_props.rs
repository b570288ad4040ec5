use proptest::prelude::*;
use radloc_core::image::{
    boxes_from_components, connected_components, generate_bboxes, normalize_heatmap, threshold_binary,
    BoxGenConfig, Connectivity, Heatmap, RoiMask, TaggedBox,
};

fn heatmap(max: usize) -> impl Strategy<Value = Heatmap> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        prop::collection::vec(-1000.0f64..1000.0, w * h).prop_map(move |v| Heatmap::new(w, h, v, 0).unwrap())
    })
}

fn integer_heatmap(max: usize) -> impl Strategy<Value = Heatmap> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        prop::collection::vec(-1000i32..1000, w * h)
            .prop_map(move |v| Heatmap::new(w, h, v.into_iter().map(f64::from).collect(), 0).unwrap())
    })
}

fn mask(max: usize) -> impl Strategy<Value = RoiMask> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<bool>(), w * h).prop_map(move |b| RoiMask::new(w, h, b).unwrap())
    })
}

fn connectivity() -> impl Strategy<Value = Connectivity> {
    prop_oneof![Just(Connectivity::Four), Just(Connectivity::Eight)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn components_partition_the_mask(m in mask(12), conn in connectivity()) {
        let parts = connected_components(&m, conn);
        let mut cover = vec![0u32; m.width() * m.height()];
        for p in &parts {
            prop_assert!(!p.is_empty());
            for (x, y) in p.iter_set() {
                cover[y * m.width() + x] += 1;
            }
        }
        for (i, &b) in m.bits().iter().enumerate() {
            prop_assert_eq!(cover[i], u32::from(b));
        }
    }

    #[test]
    fn boxes_are_tight(m in mask(12), conn in connectivity()) {
        let parts = connected_components(&m, conn);
        let boxes = boxes_from_components(&parts).unwrap();
        for (p, b) in parts.iter().zip(&boxes) {
            let pts: Vec<(usize, usize)> = p.iter_set().collect();
            prop_assert!(pts.iter().all(|&(x, y)| b.contains_point(x, y)));
            prop_assert!(pts.iter().any(|&(x, _)| x == b.x));
            prop_assert!(pts.iter().any(|&(x, _)| x == b.right() - 1));
            prop_assert!(pts.iter().any(|&(_, y)| y == b.y));
            prop_assert!(pts.iter().any(|&(_, y)| y == b.bottom() - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn higher_threshold_masks_nest(h in heatmap(16), t1 in 1.0f64..254.0, dt in 0.0f64..200.0) {
        let t2 = (t1 + dt).min(254.5);
        let n = normalize_heatmap(&h);
        let lo = threshold_binary(&n, t1).unwrap();
        let hi = threshold_binary(&n, t2).unwrap();
        prop_assert!(hi.is_subset_of(&lo));
    }

    #[test]
    fn high_threshold_boxes_sit_inside_low_threshold_boxes(h in heatmap(16)) {
        let boxes = generate_bboxes(&h, &BoxGenConfig::default()).unwrap();
        let (low, high): (Vec<&TaggedBox>, Vec<&TaggedBox>) = boxes.iter().partition(|b| b.threshold == 60.0);
        for hb in high {
            prop_assert!(low.iter().any(|lb| lb.bbox.contains_box(&hb.bbox)));
        }
    }

    #[test]
    fn normalization_ignores_positive_affine_maps(h in integer_heatmap(12), k in -8i32..8, b in -1000i32..1000) {
        let a = 2f64.powi(k);
        let v: Vec<f64> = h.values().iter().map(|v| a * v + f64::from(b)).collect();
        let t = Heatmap::new(h.width(), h.height(), v, 0).unwrap();
        prop_assert_eq!(normalize_heatmap(&h), normalize_heatmap(&t));
    }

    #[test]
    fn normalization_spans_zero_to_255(h in heatmap(12)) {
        let n = normalize_heatmap(&h);
        let (lo, hi) = n.pixels().iter().fold((f64::MAX, f64::MIN), |(l, u), &v| (l.min(v), u.max(v)));
        prop_assert!(n.pixels().iter().all(|v| v.fract() == 0.0));
        if h.values().iter().any(|&v| v != h.values()[0]) {
            prop_assert_eq!((lo, hi), (0.0, 255.0));
        } else {
            prop_assert_eq!((lo, hi), (0.0, 0.0));
        }
    }
}
