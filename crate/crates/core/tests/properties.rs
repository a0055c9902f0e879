use gazecenter_core::geometry::DEFAULT_RINGS;
use gazecenter_core::maps::object_weights;
use gazecenter_core::metrics::center_bias_index;
use gazecenter_core::*;
use proptest::prelude::*;

fn pixel_set() -> impl Strategy<Value = PixelSet> {
    (2usize..24, 2usize..24).prop_flat_map(|(w, h)| {
        prop::collection::vec((0..w, 0..h), 1..120)
            .prop_map(move |px| PixelSet::from_pixels(Dims::new(w, h), px).unwrap())
    })
}

fn grid(dims: Dims) -> impl Strategy<Value = DenseGrid> {
    prop::collection::vec(0.0f64..1.0, dims.len()).prop_map(move |v| DenseGrid::from_vec(dims, v).unwrap())
}

fn star_polygon(cx: f64, cy: f64, radii: &[f64]) -> Polygon {
    let n = radii.len();
    Polygon::new(
        radii
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                Point::new(cx + r * t.cos(), cy + r * t.sin())
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_partition_is_complete_balanced_monotone(ps in pixel_set(), k in 1usize..12) {
        let com = center_of_mass(&ps).unwrap();
        let part = ring_partition(&ps, com, k).unwrap();
        let mut seen: Vec<(usize, usize)> = part.iter().map(|(c, r, ring)| {
            assert!((1..=k).contains(&ring));
            (c, r)
        }).collect();
        seen.sort_by_key(|&(c, r)| (r, c));
        prop_assert_eq!(seen, ps.iter().collect::<Vec<_>>());
        prop_assert_eq!(part.counts().iter().sum::<usize>(), ps.len());
        if k <= ps.len() {
            let lo = part.counts().iter().min().unwrap();
            let hi = part.counts().iter().max().unwrap();
            prop_assert!(hi - lo <= 1);
        }
        prop_assert!(part.radii().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rotation_preserves_pixel_count(radii in prop::collection::vec(3.0f64..14.0, 5..12), cx in 14.0f64..18.0, cy in 14.0f64..18.0) {
        let size = 32usize;
        let poly = star_polygon(cx, cy, &radii);
        // 90 degree rotation about the image center maps pixel centers to pixel centers
        let rotated = Polygon::new(
            poly.vertices().iter().map(|p| Point::new(size as f64 - p.y, p.x)).collect()
        ).unwrap();
        let dims = Dims::new(size, size);
        let a = rasterize_polygon(&poly, dims, RegionMode::Polygon);
        let b = rasterize_polygon(&rotated, dims, RegionMode::Polygon);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.len(), b.len()),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn object_maps_normalized_and_local(radii in prop::collection::vec(2.0f64..9.0, 4..9),
                                        cx in 8.0f64..24.0, cy in 8.0f64..16.0,
                                        scheme in prop_oneof![Just(WeightScheme::Linear), Just(WeightScheme::Constant), Just(WeightScheme::gaussian())]) {
        let dims = Dims::new(32, 24);
        let img = ImageAnnotation {
            image_id: "p".into(),
            dims,
            objects: vec![ObjectAnnotation { object_id: "o".into(), polygon: star_polygon(cx, cy, &radii), label: None }],
        };
        let poly_cfg = ObjectMapConfig { scheme, region_mode: RegionMode::Polygon, k: DEFAULT_RINGS };
        let bbox_cfg = ObjectMapConfig { region_mode: RegionMode::BBox, ..poly_cfg };
        let Ok(m) = build_object_map(&img, &poly_cfg) else { return Ok(()) };
        prop_assert!((m.sum() - 1.0).abs() < 1e-9);
        prop_assert!(m.values().iter().all(|&v| v >= 0.0 && v.is_finite()));
        let ps = rasterize_polygon(&img.objects[0].polygon, dims, RegionMode::Polygon).unwrap();
        let bb = build_object_map(&img, &bbox_cfg).unwrap();
        for r in 0..dims.height {
            for c in 0..dims.width {
                if !ps.contains(c, r) {
                    prop_assert_eq!(m.get(c, r), 0.0);
                }
                if m.get(c, r) > 0.0 {
                    prop_assert!(bb.get(c, r) > 0.0);
                }
            }
        }
        // mean pre-normalization weight per ring never increases outward
        let raw = object_weights(&img, &poly_cfg).unwrap();
        let part = gazecenter_core::maps::object_rings(&img.objects[0], dims, RegionMode::Polygon, DEFAULT_RINGS).unwrap();
        let means: Vec<f64> = (1..=DEFAULT_RINGS).filter(|&i| part.counts()[i - 1] > 0).map(|i| {
            let v: Vec<f64> = part.ring_pixels(i).map(|(c, r)| raw.get(c, r)).collect();
            v.iter().sum::<f64>() / v.len() as f64
        }).collect();
        prop_assert!(means.windows(2).all(|w| w[0] >= w[1]));
        if scheme == WeightScheme::Constant {
            prop_assert!(means.iter().all(|&m| m == 1.0));
        }
    }

    #[test]
    fn smoothing_preserves_mass(g in grid(Dims::new(13, 9)), sigma in 0.0f64..4.0) {
        let s = smooth_map(&g, sigma).unwrap();
        prop_assert!((s.sum() - g.sum()).abs() < 1e-9);
        prop_assert!(s.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn combine_is_convex(s in grid(Dims::new(7, 5)), o in grid(Dims::new(7, 5)), beta in 0.0f64..=1.0) {
        prop_assume!(s.sum() > 0.0 && o.sum() > 0.0);
        let (s, o) = (s.normalized().unwrap(), o.normalized().unwrap());
        let m = combine(&s, &o, beta).unwrap();
        prop_assert!((m.sum() - 1.0).abs() < 1e-9);
        for ((&a, &b), &v) in s.values().iter().zip(o.values()).zip(m.values()) {
            prop_assert!(v >= a.min(b) - 1e-18 && v <= a.max(b) + 1e-18);
        }
    }

    #[test]
    fn nss_is_affine_invariant(m in grid(Dims::new(9, 6)), a in 0.01f64..50.0, b in -5.0f64..5.0,
                               fx in prop::collection::vec((0.0f64..9.0, 0.0f64..6.0), 1..20)) {
        let fix: Vec<Point> = fx.into_iter().map(Point::from).collect();
        let t = DenseGrid::from_fn(m.dims(), |c, r| a * m.get(c, r) + b);
        prop_assert!((nss(&t, &fix).unwrap() - nss(&m, &fix).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn ring_counts_equal_inside_fixations(ps in pixel_set(), fx in prop::collection::vec((0.0f64..24.0, 0.0f64..24.0), 1..60)) {
        let part = ring_partition(&ps, center_of_mass(&ps).unwrap(), 10).unwrap();
        let fix: Vec<Point> = fx.into_iter().map(Point::from).collect();
        let inside = fix.iter().filter(|p| ps.contains_point(**p)).count();
        match ring_fixation_profile(&part, &fix) {
            Ok(prof) => {
                prop_assert_eq!(prof.n_fix, inside);
                prop_assert!((0.0..=1.0).contains(&prof.obj_cnt_idx));
                prop_assert!((prof.p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!((center_bias_index(&prof.p) - prof.obj_cnt_idx).abs() < 1e-12);
            }
            Err(e) => {
                prop_assert_eq!(inside, 0);
                prop_assert_eq!(e, Error::NoObjectFixations);
            }
        }
    }

    #[test]
    fn t_test_antisymmetric(pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..30)) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let ab = paired_t_test(&a, &b).unwrap();
        let ba = paired_t_test(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        prop_assert_eq!(ab.t_statistic, -ba.t_statistic);
        prop_assert_eq!(ab.p_value, ba.p_value);
    }

    #[test]
    fn generating_map_beats_uniform(m in grid(Dims::new(12, 10)), seed in any::<u64>()) {
        prop_assume!(m.sum() > 0.0);
        let m = m.normalized().unwrap();
        let fix = sample_fixations(&m, 1000, seed).unwrap();
        let u = DenseGrid::uniform(m.dims());
        prop_assert!(nss(&m, &fix).unwrap() >= nss(&u, &fix).unwrap());
    }
}

#[test]
fn disk_radii_follow_square_root_law() {
    let dims = Dims::new(240, 240);
    for &(cx, cy, r) in &[(120.0, 120.0, 100.0), (119.3, 121.7, 50.0), (100.5, 130.25, 73.0)] {
        let px = (0..240usize).flat_map(|row| (0..240usize).map(move |col| (col, row))).filter(|&(c, rr)| {
            let dx = c as f64 + 0.5 - cx;
            let dy = rr as f64 + 0.5 - cy;
            dx * dx + dy * dy <= r * r
        });
        let ps = PixelSet::from_pixels(dims, px).unwrap();
        let part = ring_partition(&ps, center_of_mass(&ps).unwrap(), 10).unwrap();
        for (i, &radius) in part.radii().iter().enumerate() {
            let expect = r * ((i + 1) as f64 / 10.0).sqrt();
            assert!((radius - expect).abs() <= 1.5, "R={r} ring {}: {radius} vs {expect}", i + 1);
        }
    }
}
