use convex_bm::bodies::canned::{cross_polytope_h, cube_h, cube_v, regular_polygon};
use convex_bm::bodies::{Body, PolyBody, VPolytope};
use convex_bm::kernel::RngStream;
use convex_bm::volume::{
    ball_volume, cp_constant_fit, polar_volume_mc, sphere_measure_check, volume_exact_2d, volume_mc, volume_mc_poly,
};
use convex_bm::{Matrix, Vector};

fn factorial(d: usize) -> f64 {
    (1..=d).map(|i| i as f64).product()
}

/// `conv{0, e₁, …, e_d}` shifted so its barycenter is the origin.
fn corner_simplex(d: usize) -> VPolytope {
    let mut pts = vec![Vector::zeros(d)];
    for i in 0..d {
        let mut e = Vector::zeros(d);
        e[i] = 1.0;
        pts.push(e);
    }
    let c = Vector::repeat(d, 1.0 / (d as f64 + 1.0));
    VPolytope::from_vectors(&pts, false).unwrap().translate(&-c)
}

#[test]
fn cube_volumes_are_covered() {
    for d in 1..=4 {
        let v = 2f64.powi(d as i32);
        let est = volume_mc(&Body::V(cube_v(d)), 40_000, &RngStream::new(d as u64)).unwrap();
        assert!(est.covers(v), "d={d}: {est:?}");
        let est = volume_mc(&Body::H(cube_h(d)), 40_000, &RngStream::new(10 + d as u64)).unwrap();
        assert!(est.covers(v), "d={d}: {est:?}");
    }
}

#[test]
fn cross_polytope_and_simplex_volumes() {
    for d in 2..=4 {
        let v = 2f64.powi(d as i32) / factorial(d);
        let est = volume_mc(&Body::H(cross_polytope_h(d)), 40_000, &RngStream::new(20 + d as u64)).unwrap();
        assert!(est.covers(v), "d={d}: {est:?}");
        let s = PolyBody::from_vpolytope(&corner_simplex(d)).unwrap();
        let est = volume_mc_poly(&s, 40_000, &RngStream::new(30 + d as u64)).unwrap();
        assert!(est.covers(1.0 / factorial(d)), "d={d}: {est:?}");
    }
}

#[test]
fn polygon_area_agrees_with_shoelace() {
    let p = regular_polygon(7, 1.3, 0.2);
    let exact = volume_exact_2d(&p).unwrap();
    let formula = 0.5 * 7.0 * 1.3f64.powi(2) * (2.0 * std::f64::consts::PI / 7.0).sin();
    assert!((exact - formula).abs() < 1e-12);
    let est = volume_mc(&Body::V(p), 50_000, &RngStream::new(40)).unwrap();
    assert!(est.covers(exact), "{est:?}");
}

#[test]
fn polar_volume_product_of_square() {
    // vol(B_∞²)·vol(B₁²) = 8.
    let est = polar_volume_mc(&cube_v(2), 50_000, &RngStream::new(41)).unwrap();
    assert!(est.covers(2.0), "{est:?}");
    let hex = regular_polygon(6, 1.0, 0.0);
    let polar_area = volume_exact_2d(&hex.polar().unwrap().vertices().unwrap()).unwrap();
    let est = polar_volume_mc(&hex, 50_000, &RngStream::new(42)).unwrap();
    assert!(est.covers(polar_area), "{est:?} vs {polar_area}");
}

#[test]
fn sphere_measure_of_small_bodies() {
    for d in [2usize, 3, 4] {
        let scaled = cube_v(d).linear_image(&(Matrix::identity(d, d) * 0.8)).unwrap();
        let r = sphere_measure_check(&Body::V(scaled), 20_000, &RngStream::new(50 + d as u64)).unwrap();
        assert!(r.freq <= r.bound + 3.0 * r.stderr);
    }
    // A body containing the sphere hits every sample but has volume above vol(B₂ᵈ).
    let r = sphere_measure_check(&Body::H(cube_h(3)), 10_000, &RngStream::new(60)).unwrap();
    assert_eq!(r.freq, 1.0);
    assert!(r.bound > 8.0 / ball_volume(3) - 0.1);
}

#[test]
fn cp_fit_rows_are_finite() {
    let fit = cp_constant_fit(&[(2, 8), (3, 12)], 2, 20_000, &RngStream::new(70)).unwrap();
    assert_eq!(fit.rows.len(), 4);
    assert!(fit.min > 0.0 && fit.max.is_finite());
    assert!(fit.spread >= 1.0);
    assert!(cp_constant_fit(&[(3, 5)], 1, 100, &RngStream::new(0)).is_err());
}
