mod common;

use common::brute_all_distances;
use diamlimit::diameter::{diameter_brute, diameter_pruned, k_largest, DistanceSpec};
use diamlimit::experiments::{ks_distance, Ecdf};
use diamlimit::geometry::{build_a, min_eigenpair, PoleCapGeometry};
use diamlimit::limitlaw::{functional_g, functional_g_p};
use diamlimit::Points;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn cloud(dim: usize) -> impl Strategy<Value = Points> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, dim), 2..60).prop_map(|rows| Points::from_rows(&rows))
}

fn any_cloud() -> impl Strategy<Value = Points> {
    (1usize..5).prop_flat_map(cloud)
}

fn rotate(pts: &Points, angle: f64, shift: (f64, f64)) -> Points {
    let (c, s) = (angle.cos(), angle.sin());
    let rows: Vec<Vec<f64>> = pts
        .iter()
        .map(|z| vec![c * z[0] - s * z[1] + shift.0, s * z[0] + c * z[1] + shift.1])
        .collect();
    Points::from_rows(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pruned_equals_brute(pts in any_cloud(), p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.0])) {
        let norm = DistanceSpec { p };
        prop_assert_eq!(diameter_pruned(&pts, norm), diameter_brute(&pts, norm));
    }

    #[test]
    fn top_k_matches_enumeration(pts in any_cloud(), k in 1usize..8) {
        let all = brute_all_distances(&pts, 2.0);
        prop_assume!(k <= all.len());
        let top = k_largest(&pts, k, DistanceSpec::EUCLIDEAN).unwrap().values;
        for (a, b) in top.iter().zip(&all) {
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
        prop_assert!(top.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn euclidean_diameter_is_rigid_motion_invariant(pts in cloud(2), angle in 0.0..6.3f64, sx in -5.0..5.0f64, sy in -5.0..5.0f64) {
        let d0 = diameter_pruned(&pts, DistanceSpec::EUCLIDEAN);
        let d1 = diameter_pruned(&rotate(&pts, angle, (sx, sy)), DistanceSpec::EUCLIDEAN);
        prop_assert!((d0 - d1).abs() <= 1e-9 * d0.max(1.0));
    }

    #[test]
    fn adding_a_point_never_shrinks_the_diameter(pts in cloud(3), extra in prop::collection::vec(-20.0..20.0f64, 3)) {
        let before = diameter_pruned(&pts, DistanceSpec::EUCLIDEAN);
        let mut grown = pts.clone();
        grown.push(&extra);
        prop_assert!(diameter_pruned(&grown, DistanceSpec::EUCLIDEAN) >= before);
    }

    #[test]
    fn ks_is_a_metric(
        a in prop::collection::vec(-3.0..3.0f64, 1..40),
        b in prop::collection::vec(-3.0..3.0f64, 1..40),
        c in prop::collection::vec(-3.0..3.0f64, 1..40),
    ) {
        let (ea, eb, ec) = (Ecdf::new(a).unwrap(), Ecdf::new(b).unwrap(), Ecdf::new(c).unwrap());
        let ab = ks_distance(&ea, &eb).unwrap();
        prop_assert_eq!(ab, ks_distance(&eb, &ea).unwrap());
        prop_assert_eq!(ks_distance(&ea, &ea).unwrap(), 0.0);
        prop_assert!((0.0..=1.0).contains(&ab));
        let ac = ks_distance(&ea, &ec).unwrap();
        let cb = ks_distance(&ec, &eb).unwrap();
        prop_assert!(ab <= ac + cb + 1e-15);
    }

    #[test]
    fn lambda_min_is_nondecreasing_in_eta(
        kl in prop::collection::vec(0.6..5.0f64, 2),
        kr in prop::collection::vec(0.6..5.0f64, 2),
        off in -1.0..1.0f64,
    ) {
        let hl = DMatrix::from_row_slice(2, 2, &[kl[0], off * kl[0].min(kl[1]) * 0.5, off * kl[0].min(kl[1]) * 0.5, kl[1]]);
        let gl = PoleCapGeometry::from_hessian(1.0, &hl).unwrap();
        let gr = PoleCapGeometry::from_diagonal(1.0, &kr).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let (lam, _) = min_eigenpair(&build_a(i as f64 / 20.0, &gl, &gr).unwrap());
            prop_assert!(lam >= prev - 1e-12);
            prev = lam;
        }
    }

    #[test]
    fn functional_is_symmetric(
        x in prop::collection::vec(-2.0..2.0f64, 3),
        y in prop::collection::vec(-2.0..2.0f64, 3),
        a in 0.2..3.0f64,
    ) {
        prop_assert!((functional_g(&x, &y, a) - functional_g(&y, &x, a)).abs() < 1e-14);
        prop_assert!((functional_g_p(&x, &y, a, 2.0) - functional_g(&x, &y, a)).abs() < 1e-12);
    }
}
