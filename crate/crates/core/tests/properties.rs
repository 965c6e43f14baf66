use proptest::prelude::*;
use vorocell::dominance::{classify, f_value, voronoi_assign, Verdict};
use vorocell::norms::{clarkson_angle, dist, modulus, norm, NormSpec};
use vorocell::raster::{rasterize, TauPolicy};
use vorocell::scene_file::{parse_scene, to_string};
use vorocell::sites::{dist_point_site, Segment};
use vorocell::{figures, Domain, Scene, Site, SitePrimitive};

fn any_norm() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        Just(NormSpec::L1),
        Just(NormSpec::L2),
        Just(NormSpec::LINF),
        (1.0f64..8.0).prop_map(|p| NormSpec::new(p).unwrap()),
    ]
}

fn convex_norm() -> impl Strategy<Value = NormSpec> {
    (1.05f64..8.0).prop_map(|p| NormSpec::new(p).unwrap())
}

fn vec2() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 2)
}

fn point_site() -> impl Strategy<Value = Site> {
    prop::collection::vec(vec2(), 1..4).prop_map(|pts| Site::points(pts).unwrap())
}

fn mixed_site() -> impl Strategy<Value = Site> {
    (prop::collection::vec(vec2(), 1..3), vec2(), vec2()).prop_filter_map("degenerate segment", |(pts, a, b)| {
        let seg = Segment::new(a, b).ok()?;
        Site::new(vec![SitePrimitive::points(pts).ok()?, SitePrimitive::segments(vec![seg]).ok()?]).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_is_homogeneous_and_subadditive(n in any_norm(), v in vec2(), w in vec2(), lambda in 0.01f64..100.0) {
        let scaled: Vec<f64> = v.iter().map(|c| lambda * c).collect();
        prop_assert!((norm(&scaled, n) - lambda * norm(&v, n)).abs() <= 1e-12 * (1.0 + lambda * norm(&v, n)));
        let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert!(norm(&sum, n) <= norm(&v, n) + norm(&w, n) + 1e-12);
    }

    #[test]
    fn angle_ignores_positive_scaling(n in any_norm(), v in vec2(), w in vec2(), s in 0.01f64..50.0, t in 0.01f64..50.0) {
        prop_assume!(norm(&v, n) > 1e-6 && norm(&w, n) > 1e-6);
        let a = clarkson_angle(&v, &w, n).unwrap();
        let sv: Vec<f64> = v.iter().map(|c| s * c).collect();
        let tw: Vec<f64> = w.iter().map(|c| t * c).collect();
        prop_assert!((clarkson_angle(&sv, &tw, n).unwrap() - a).abs() <= 1e-12);
        prop_assert!((0.0..=2.0).contains(&a));
    }

    #[test]
    fn modulus_is_monotone(n in convex_norm()) {
        let mut prev = 0.0;
        prop_assert_eq!(modulus(n, 0.0).unwrap(), 0.0);
        for k in 1..=100 {
            let d = modulus(n, 2.0 * k as f64 / 100.0).unwrap();
            prop_assert!(d >= prev && d > 0.0);
            prev = d;
        }
    }

    #[test]
    fn f_is_two_lipschitz(n in any_norm(), p in mixed_site(), a in point_site(), x in vec2(), y in vec2()) {
        let fx = f_value(&x, &p, &a, n, 1e-12).unwrap();
        let fy = f_value(&y, &p, &a, n, 1e-12).unwrap();
        prop_assert!((fx - fy).abs() <= 2.0 * dist(&x, &y, n) + 1e-9);
    }

    #[test]
    fn union_distance_is_minimum(n in any_norm(), s in mixed_site(), t in point_site(), x in vec2()) {
        let u = Site::union([&s, &t]).unwrap();
        let du = dist_point_site(&x, &u, n, 1e-12).unwrap();
        let m = dist_point_site(&x, &s, n, 1e-12).unwrap().min(dist_point_site(&x, &t, n, 1e-12).unwrap());
        prop_assert!((du - m).abs() <= 1e-12);
    }

    #[test]
    fn swapping_sites_negates_f(n in any_norm(), p in mixed_site(), a in point_site(), x in vec2()) {
        let f = f_value(&x, &p, &a, n, 1e-12).unwrap();
        let g = f_value(&x, &a, &p, n, 1e-12).unwrap();
        prop_assert_eq!(f, -g);
        let c = classify(&x, &p, &a, n, 1e-9).unwrap().verdict;
        let d = classify(&x, &a, &p, n, 1e-9).unwrap().verdict;
        let mirrored = match c {
            Verdict::StrictInterior => Verdict::StrictExterior,
            Verdict::StrictExterior => Verdict::StrictInterior,
            Verdict::NearBisector => Verdict::NearBisector,
        };
        prop_assert_eq!(d, mirrored);
    }

    #[test]
    fn site_points_are_strict_interior_when_separated(n in convex_norm(), p in point_site(), a in point_site()) {
        let pa = p.anchors(2);
        let gap = pa.iter().flat_map(|x| a.anchors(2).into_iter().map(move |y| dist(x, &y, n))).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e-3);
        for x in pa {
            prop_assert_eq!(classify(&x, &p, &a, n, 1e-9).unwrap().verdict, Verdict::StrictInterior);
        }
    }

    #[test]
    fn nearest_set_is_the_cell_membership(n in any_norm(), sites in prop::collection::vec(point_site(), 2..5), x in vec2()) {
        let scene = Scene::new(Domain::cube(2, 5.0).unwrap(), sites, n).unwrap();
        let v = voronoi_assign(&x, &scene, 1e-9).unwrap();
        prop_assert!(!v.nearest.is_empty());
        for k in 0..scene.sites.len() {
            let (p, a) = scene.cell_pair(k).unwrap();
            let in_cell = classify(&x, &p, &a, n, 1e-9).unwrap().verdict.in_region();
            prop_assert_eq!(v.nearest.contains(&(k as u32)), in_cell);
        }
        prop_assert_eq!(v.on_boundary, v.nearest.len() >= 2);
    }

    #[test]
    fn scene_round_trips(n in any_norm(), sites in prop::collection::vec(prop_oneof![point_site(), mixed_site()], 1..4)) {
        let scene = Scene::new(Domain::cube(2, 5.0).unwrap(), sites, n).unwrap();
        prop_assert_eq!(parse_scene(&to_string(&scene, &["generated"])).unwrap(), scene);
    }
}

#[test]
fn raster_labels_match_fresh_assignment() {
    for scene in [figures::fig1(), figures::fig2(), figures::fig3()] {
        let grid = rasterize(&scene, 97, 61, TauPolicy::default()).unwrap();
        let mut rng = vorocell::sampling::rng_for(5, 0);
        for _ in 0..1000 {
            use rand::Rng;
            let (c, r) = (rng.random_range(0..grid.width), rng.random_range(0..grid.height));
            let v = voronoi_assign(&grid.pixel_center(c, r), &scene, grid.tau).unwrap();
            let l = grid.label(c, r);
            assert_eq!(l.nearest, v.nearest);
            assert_eq!(l.boundary, v.on_boundary);
        }
    }
}
