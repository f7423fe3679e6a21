use convex_bm::bodies::AffineSubspace;
use convex_bm::kernel::rng::random_unit_vector;
use convex_bm::kernel::RngStream;
use convex_bm::nets::random_subspace;
use convex_bm::simplex::{
    km_body, position_section, project_section, projection_gauge_lp, radial_gap, random_section,
    simplex_section, swap_representation, SimplexSpec,
};
use convex_bm::{Matrix, Vector};

#[test]
fn random_section_points_are_in_the_simplex() {
    let spec = SimplexSpec::new(5).unwrap();
    let f = random_section(&spec, 2, false, &RngStream::new(3)).unwrap();
    let h = simplex_section(&spec, &f).unwrap();
    let verts = h.vertices().unwrap();
    let mut g = RngStream::new(4).rng();
    use rand::Rng;
    for _ in 0..200 {
        // Random convex combination of vertices.
        let w: Vec<f64> = (0..verts.num_points()).map(|_| g.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let y = verts.points() * Vector::from_vec(w) / s;
        let x = f.to_ambient(&y);
        assert!(x.iter().all(|v| *v >= -1e-10));
        assert!((x.sum() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn full_triangle_position() {
    let spec = SimplexSpec::new(2).unwrap();
    let ps = position_section(&spec, &spec.hyperplane()).unwrap();
    assert!((ps.center.clone() - spec.barycenter()).amax() < 1e-7);
    assert!((ps.scaling.clone() - Vector::repeat(3, 3.0)).amax() < 1e-6);
    // Facets −1 ≤ xᵢ ≤ 2 along the rows of the L basis.
    let k = ps.body();
    for i in 0..k.num_facets() {
        let b = k.offsets()[i];
        assert!((b - 1.0).abs() < 1e-12 || (b - 2.0).abs() < 1e-12);
    }
    assert!((ps.symmetry_ratio - 2.0).abs() < 1e-6);
}

#[test]
fn position_matches_km_body_on_its_l() {
    let spec = SimplexSpec::new(6).unwrap();
    let f = random_section(&spec, 3, false, &RngStream::new(11)).unwrap();
    let ps = position_section(&spec, &f).unwrap();
    let km = km_body(6, 3, &ps.l).unwrap();
    let k = ps.body();
    let mut g = RngStream::new(12).rng();
    for _ in 0..200 {
        let u = random_unit_vector(3, &mut g);
        assert!((k.gauge(&u).unwrap() - km.gauge(&u).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn positioned_section_inner_ball_and_symmetry() {
    for seed in 0..10u64 {
        let n = 4 + (seed as usize % 6);
        let m = 2 + (seed as usize % 3);
        let spec = SimplexSpec::new(n).unwrap();
        let f = random_section(&spec, m, seed % 2 == 0, &RngStream::new(seed)).unwrap();
        let ps = position_section(&spec, &f).unwrap();
        assert!(ps.symmetry_ratio <= m as f64 + 1e-8);
        assert!(ps.inner_ok(1e-8));
        // Ambient points map into K.
        let x = f.to_ambient(&Vector::zeros(m));
        let z = ps.to_l_coords(&x);
        assert!(ps.body().contains(&z, 1e-9));
    }
}

#[test]
fn km_body_on_coordinate_subspace_is_box() {
    let l = AffineSubspace::coordinate(5, &[0, 1]);
    let k = km_body(4, 2, &l).unwrap();
    assert_eq!(k.num_facets(), 10);
    let v = k.vertices().unwrap();
    assert_eq!(v.num_points(), 4);
    assert!((k.support(&Vector::from_vec(vec![1.0, 1.0])).unwrap() - 4.0).abs() < 1e-9);
    assert!((k.support(&Vector::from_vec(vec![-1.0, 0.0])).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn km_body_contains_unit_ball() {
    let l = AffineSubspace::linear(random_subspace(7, 2, &RngStream::new(5)).unwrap().basis().clone()).unwrap();
    let k = km_body(6, 2, &l).unwrap();
    for i in 0..k.num_facets() {
        let r = k.normals().row(i).norm();
        assert!(r <= 1.0 + 1e-12 && k.offsets()[i] >= 1.0);
    }
}

#[test]
fn box_projection_onto_diagonal() {
    let l = AffineSubspace::coordinate(2, &[0, 1]);
    let k = km_body(1, 2, &l).unwrap();
    let e = AffineSubspace::linear(Matrix::from_column_slice(2, 1, &[1.0, 1.0]) / 2f64.sqrt()).unwrap();
    let p = project_section(&k, &e).unwrap();
    let hi = p.body.support(&Vector::from_vec(vec![1.0]));
    let lo = -p.body.support(&Vector::from_vec(vec![-1.0]));
    assert!((hi - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert!((lo + 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn identity_projection_keeps_gauge() {
    let spec = SimplexSpec::new(5).unwrap();
    let f = random_section(&spec, 3, true, &RngStream::new(7)).unwrap();
    let ps = position_section(&spec, &f).unwrap();
    let k = ps.body();
    let p = project_section(&k, &AffineSubspace::full(3)).unwrap();
    let mut g = RngStream::new(8).rng();
    for _ in 0..100 {
        let u = random_unit_vector(3, &mut g);
        assert!((p.body.gauge(&u).unwrap() - k.gauge(&u).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn projection_gauge_matches_fiber_lp() {
    let spec = SimplexSpec::new(7).unwrap();
    let f = random_section(&spec, 4, false, &RngStream::new(9)).unwrap();
    let ps = position_section(&spec, &f).unwrap();
    let k = ps.body();
    let e = AffineSubspace::linear(random_subspace(4, 2, &RngStream::new(10)).unwrap().basis().clone()).unwrap();
    let p = project_section(&k, &e).unwrap();
    let zero = Vector::zeros(2);
    let mut g = RngStream::new(11).rng();
    for _ in 0..100 {
        let u = random_unit_vector(2, &mut g);
        let a = p.body.gauge(&u).unwrap();
        let b = projection_gauge_lp(&k, &e, &zero, &u).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

fn nested_pair(n: usize, k: usize, j: usize, seed: u64) -> (AffineSubspace, AffineSubspace) {
    let s = RngStream::new(seed);
    let spec = SimplexSpec::new(n).unwrap();
    let e = AffineSubspace::linear(random_subspace(n + 1, k, &s.derive(0)).unwrap().basis().clone()).unwrap();
    let x0 = convex_bm::simplex::random_simplex_point(&spec, &s.derive(1));
    let inner = random_subspace(k, j, &s.derive(2)).unwrap();
    let fb = e.basis() * inner.basis();
    let f = AffineSubspace::new(e.project_point(&x0), fb).unwrap();
    (e, f)
}

#[test]
fn swap_on_random_nested_pair() {
    let spec = SimplexSpec::new(5).unwrap();
    for seed in 0..5 {
        let (e, f) = nested_pair(5, 4, 2, seed);
        let (et, _) = swap_representation(&spec, &e, &f).unwrap();
        assert_eq!(et.dim(), 2 + 2);
    }
}

#[test]
fn swap_with_f_equal_e_and_full_e() {
    let spec = SimplexSpec::new(4).unwrap();
    let (e, _) = nested_pair(4, 3, 3, 1);
    let f = e.with_offset(e.project_point(&spec.barycenter()));
    let c = radial_gap(&spec, &e, &f, 50, &RngStream::new(2)).unwrap();
    assert!(c.max_gap < 1e-7);

    let full = AffineSubspace::full(5);
    let h = spec.hyperplane();
    let f = AffineSubspace::new(h.offset().clone(), h.basis().columns(0, 2).into_owned()).unwrap();
    let (et, _) = swap_representation(&spec, &full, &f).unwrap();
    assert_eq!(et.dim(), 2);
}
