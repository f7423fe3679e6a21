use convex_bm::bm::op_norm_body;
use convex_bm::bodies::canned::{cross_polytope_h, cube_v, regular_polygon};
use convex_bm::bodies::{PolyBody, VPolytope};
use convex_bm::kernel::rng::gaussian_matrix;
use convex_bm::kernel::{determinant, operator_norm, svd, RngStream};
use convex_bm::simplex::{random_simplex_point, SimplexSpec};
use convex_bm::volume::volume_exact_2d;
use convex_bm::{Matrix, Vector};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3.0f64..3.0, 3).prop_map(Vector::from_vec)
}

fn mat(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, d * d).prop_map(move |v| Matrix::from_vec(d, d, v))
}

fn random_body(seed: u64) -> VPolytope {
    let mut g = RngStream::new(seed).rng();
    let pts = gaussian_matrix(3, 8, &mut g);
    VPolytope::new(pts, true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_is_homogeneous_and_subadditive(x in vec3(), y in vec3(), t in 0.0f64..5.0, seed in 0u64..50) {
        let k = random_body(seed);
        let gx = k.gauge(&x).unwrap();
        let gy = k.gauge(&y).unwrap();
        prop_assert!((k.gauge(&(&x * t)).unwrap() - t * gx).abs() <= 1e-7 * (1.0 + t * gx));
        prop_assert!(k.gauge(&(&x + &y)).unwrap() <= gx + gy + 1e-7 * (1.0 + gx + gy));
        // Symmetric body: the gauge is a norm.
        prop_assert!((k.gauge(&-&x).unwrap() - gx).abs() <= 1e-7 * (1.0 + gx));
    }

    #[test]
    fn lp_gauge_matches_facet_gauge(x in vec3(), seed in 0u64..50) {
        let k = PolyBody::from_vpolytope(&random_body(seed)).unwrap();
        let c = Vector::zeros(3);
        let a = k.gauge_centered(&c, &x).unwrap();
        let b = k.gauge_lp(&c, &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a));
    }

    #[test]
    fn cross_polytope_gauge_is_l1(x in vec3()) {
        let g = cross_polytope_h(3).gauge(&x).unwrap();
        prop_assert!((g - x.lp_norm(1)).abs() <= 1e-9 * (1.0 + g));
        let g = cube_v(3).gauge(&x).unwrap();
        prop_assert!((g - x.amax()).abs() <= 1e-9 * (1.0 + g));
    }

    #[test]
    fn polar_pairs_dual_norms(x in vec3(), y in vec3(), seed in 0u64..50) {
        let k = random_body(seed);
        let p = k.polar().unwrap();
        prop_assert!(x.dot(&y) <= k.gauge(&x).unwrap() * p.gauge(&y).unwrap() + 1e-7);
    }

    #[test]
    fn operator_norm_is_submultiplicative(a in mat(3), b in mat(3)) {
        prop_assert!(operator_norm(&(&a * &b)) <= operator_norm(&a) * operator_norm(&b) + 1e-9);
        let k = cube_v(3);
        let kb = PolyBody::from_vpolytope(&k).unwrap();
        let lhs = op_norm_body(&(&a * &b), &k, &kb).unwrap();
        let rhs = op_norm_body(&a, &k, &kb).unwrap() * op_norm_body(&b, &k, &kb).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn svd_reconstructs_and_inverse_det(a in mat(4)) {
        let s = svd(&a);
        let recon = &s.u * Matrix::from_diagonal(&s.singular_values) * s.v.transpose();
        prop_assert!((recon - &a).amax() < 1e-10);
        let det = determinant(&a);
        if det.abs() > 1e-3 {
            let inv = a.clone().try_inverse().unwrap();
            prop_assert!((det * determinant(&inv) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn simplex_points_are_feasible(n in 1usize..12, seed in 0u64..1000) {
        let spec = SimplexSpec::new(n).unwrap();
        let x = random_simplex_point(&spec, &RngStream::new(seed));
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        prop_assert!((x.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polygon_area_is_rotation_invariant(k in 3usize..20, phase in 0.0f64..6.3, r in 0.1f64..3.0) {
        let a = volume_exact_2d(&regular_polygon(k, r, phase)).unwrap();
        let b = volume_exact_2d(&regular_polygon(k, r, 0.0)).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + b));
    }
}
