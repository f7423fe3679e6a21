use convex_bm::bm::{
    bm_lower_asymmetry, bm_lower_netcert, bm_lower_volume, bm_upper, bm_upper_with, brute_force_sl2, compose_witness,
    evaluate_witness, minkowski_asymmetry, op_norm_body, perturb_projection_check, perturb_section_check,
    verify_witness, witness_estimate, BmOptions,
};
use convex_bm::bodies::canned::{ball_proxy, cross_polytope_v, cube_v, regular_polygon};
use convex_bm::bodies::{PolyBody, VPolytope};
use convex_bm::kernel::rng::gaussian_matrix;
use convex_bm::kernel::RngStream;
use convex_bm::nets::{random_rotation_near_identity, random_subspace, GrassmannPoint};
use convex_bm::simplex::{position_section, random_section, SimplexSpec};
use convex_bm::{Matrix, Vector};

fn pb(v: &VPolytope) -> PolyBody {
    PolyBody::from_vpolytope(v).unwrap()
}

fn rot(th: f64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()])
}

#[test]
fn op_norm_examples() {
    let sq = cube_v(2);
    let k = pb(&sq);
    assert!((op_norm_body(&Matrix::identity(2, 2), &sq, &k).unwrap() - 1.0).abs() < 1e-12);
    assert!((op_norm_body(&(Matrix::identity(2, 2) * 2.0), &sq, &k).unwrap() - 2.0).abs() < 1e-12);
    // ℓ₁ → ℓ_∞: the largest entry in absolute value.
    let mut g = RngStream::new(1).rng();
    for _ in 0..20 {
        let t = gaussian_matrix(2, 2, &mut g);
        let n = op_norm_body(&t, &cross_polytope_v(2), &k).unwrap();
        assert!((n - t.amax()).abs() < 1e-12);
    }
}

#[test]
fn self_distance_is_one() {
    let tri = VPolytope::new(Matrix::from_column_slice(2, 3, &[0.0, 0.0, 1.0, 0.0, 0.2, 1.0]), false).unwrap();
    for v in [cube_v(2), regular_polygon(6, 1.0, 0.3), tri, cross_polytope_v(3)] {
        let k = pb(&v);
        let e = bm_upper(&k, &k, 4, &RngStream::new(2)).unwrap();
        assert!(e.upper <= 1.0 + 1e-6, "{}", e.upper);
        assert!(verify_witness(&k, &k, &e).unwrap());
    }
}

#[test]
fn cross_polytope_and_square_are_equivalent() {
    let (k1, k2) = (pb(&cross_polytope_v(2)), pb(&cube_v(2)));
    let e = bm_upper(&k1, &k2, 8, &RngStream::new(3)).unwrap();
    assert!(e.upper <= 1.001, "{}", e.upper);
    // Explicit witness: B_∞² = √2·R(π/4)·B₁².
    let t = rot(-std::f64::consts::FRAC_PI_4);
    let (lam, _) = evaluate_witness(&k1, &k2, &t, &Vector::zeros(2), &Vector::zeros(2)).unwrap();
    assert!((lam - 1.0).abs() < 1e-9);
}

#[test]
fn polygon_to_square_matches_rotation_grid() {
    let (k1, k2) = (pb(&regular_polygon(64, 1.0, 0.0)), pb(&cube_v(2)));
    let e = bm_upper(&k1, &k2, 8, &RngStream::new(4)).unwrap();
    let zero = Vector::zeros(2);
    let grid = (0..2000)
        .map(|i| {
            let th = std::f64::consts::FRAC_PI_2 * i as f64 / 2000.0;
            evaluate_witness(&k1, &k2, &rot(th), &zero, &zero).unwrap().0
        })
        .fold(f64::INFINITY, f64::min);
    let s2 = 2f64.sqrt();
    assert!((e.upper - s2).abs() <= 0.05, "{}", e.upper);
    assert!((grid - s2).abs() <= 0.05, "{grid}");
    assert!(e.upper <= grid + 1e-6);
}

#[test]
fn composition_is_bounded_by_product() {
    let (b1, g64, binf) = (pb(&cross_polytope_v(2)), pb(&regular_polygon(64, 1.0, 0.0)), pb(&cube_v(2)));
    let e13 = bm_upper(&b1, &g64, 4, &RngStream::new(5)).unwrap();
    let e32 = bm_upper(&g64, &binf, 4, &RngStream::new(6)).unwrap();
    let c = compose_witness(&b1, &binf, &e13, &e32).unwrap();
    assert!(c.upper <= e13.upper * e32.upper + 1e-6);
    assert!(verify_witness(&b1, &binf, &c).unwrap());
    let id = witness_estimate(&b1, &b1, &Matrix::identity(2, 2), &Vector::zeros(2), &Vector::zeros(2)).unwrap();
    let c = compose_witness(&b1, &b1, &id, &id).unwrap();
    assert!((c.witness.clone() - Matrix::identity(2, 2)).amax() < 1e-12);
}

#[test]
fn witness_transport_under_linear_maps() {
    let (k1, k2) = (pb(&regular_polygon(6, 1.0, 0.0)), pb(&cube_v(2)));
    let e = bm_upper(&k1, &k2, 4, &RngStream::new(7)).unwrap();
    let a = Matrix::from_row_slice(2, 2, &[2.0, 0.5, -0.3, 0.7]);
    let ak1 = k1.linear_image(&a).unwrap();
    let (lam, _) = evaluate_witness(&ak1, &k2, &(&a * &e.witness), &Vector::zeros(2), &Vector::zeros(2)).unwrap();
    assert!((lam - e.upper).abs() < 1e-8);
}

#[test]
fn asymmetry_values() {
    let tri = VPolytope::new(Matrix::from_column_slice(2, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]), false).unwrap();
    let (a, c) = minkowski_asymmetry(&pb(&tri)).unwrap();
    assert!((a - 2.0).abs() < 1e-9);
    assert!((c - Vector::from_vec(vec![1.0 / 3.0, 1.0 / 3.0])).amax() < 1e-9);
    let (a, _) = minkowski_asymmetry(&pb(&cube_v(3))).unwrap();
    assert!((a - 1.0).abs() < 1e-9);
    let lb = bm_lower_asymmetry(&pb(&tri), &pb(&cube_v(2))).unwrap();
    assert!((lb - 2.0).abs() < 1e-9);
    let e = bm_upper(&pb(&tri), &pb(&cube_v(2)), 8, &RngStream::new(8)).unwrap();
    assert!(e.upper >= lb - 1e-6, "{}", e.upper);
}

#[test]
fn volume_lower_bounds() {
    let k = cube_v(2);
    let lb = bm_lower_volume(&k, &k, 50_000, &RngStream::new(9)).unwrap();
    assert_eq!(lb.value, 1.0);
    assert!((lb.point - 1.0).abs() < 0.02);
    let proxy = ball_proxy(3, 100, &mut RngStream::new(10).rng());
    let lb = bm_lower_volume(&cube_v(3), &proxy, 200_000, &RngStream::new(11)).unwrap();
    assert!(lb.value >= 1.05, "{lb:?}");
    // Invariance: the same bound for a det-normalized image.
    let t = Matrix::from_row_slice(3, 3, &[1.2, 0.3, 0.0, 0.0, 0.9, 0.1, 0.2, 0.0, 1.0]);
    let t = &t / t.determinant().cbrt();
    let img = cube_v(3).linear_image(&t).unwrap();
    let lb2 = bm_lower_volume(&img, &proxy, 200_000, &RngStream::new(12)).unwrap();
    assert!((lb2.point - lb.point).abs() < 0.03, "{} vs {}", lb2.point, lb.point);
}

#[test]
fn net_certificate_identity_is_inconclusive() {
    let sq = cube_v(2);
    let c = bm_lower_netcert(&sq, &sq, 1.1, 0.1).unwrap();
    assert!(c.certified_lower().is_none());
}

#[test]
fn net_certificate_square_vs_polygon() {
    let sq = cube_v(2);
    let poly = regular_polygon(64, 2f64.powf(0.25), 0.0);
    let c = bm_lower_netcert(&sq, &poly, 1.05, 0.05).unwrap();
    let lower = c.certified_lower().expect("certificate should succeed");
    let brute = brute_force_sl2(&sq, &poly, 80, 3.0, 2.0).unwrap();
    assert!(brute >= lower - 1e-3, "{brute} < {lower}");
    let up = bm_upper(&pb(&sq), &pb(&poly), 8, &RngStream::new(13)).unwrap();
    assert!(lower <= up.upper);
}

#[test]
fn section_perturbation() {
    let spec = SimplexSpec::new(8).unwrap();
    let f = random_section(&spec, 3, false, &RngStream::new(14)).unwrap();
    let ps = position_section(&spec, &f).unwrap();
    let l1 = GrassmannPoint::new(ps.l.basis()).unwrap();
    let opts = BmOptions {
        restarts: 4,
        ..BmOptions::default()
    };
    let same = perturb_section_check(&l1, &l1, 3, &opts, &RngStream::new(15)).unwrap();
    assert!((same.bound - 1.0).abs() < 1e-5, "{}", same.bound);
    assert!(same.estimate.upper <= 1.001);
    let u = random_rotation_near_identity(9, 0.01, &RngStream::new(16));
    let l2 = l1.rotate(&u);
    let r = perturb_section_check(&l1, &l2, 3, &opts, &RngStream::new(17)).unwrap();
    assert!(r.rho_upper <= 0.01 + 1e-9);
    assert!(r.passed, "{} > {}", r.estimate.upper, r.bound);
}

#[test]
fn projection_perturbation() {
    let spec = SimplexSpec::new(7).unwrap();
    let f = random_section(&spec, 3, false, &RngStream::new(18)).unwrap();
    let k = position_section(&spec, &f).unwrap().body();
    let f1 = random_subspace(3, 2, &RngStream::new(19)).unwrap();
    let opts = BmOptions {
        restarts: 4,
        ..BmOptions::default()
    };
    let same = perturb_projection_check(&k, &f1, &f1, &opts, &RngStream::new(20)).unwrap();
    assert!((same.bound - 1.0).abs() < 1e-5, "{}", same.bound);
    assert!(same.estimate.upper <= 1.001);
    let f2 = f1.rotate(&random_rotation_near_identity(3, 0.02, &RngStream::new(21)));
    let r = perturb_projection_check(&k, &f1, &f2, &opts, &RngStream::new(22)).unwrap();
    assert!(r.passed, "{} > {}", r.estimate.upper, r.bound);
    let _ = bm_upper_with;
}
