//! Standard bodies: cubes, cross-polytopes, regular polygons, ball proxies.

use std::f64::consts::PI;

use rand::Rng;

use crate::bodies::hpoly::HPolytope;
use crate::bodies::vpoly::VPolytope;
use crate::kernel::rng::random_unit_vector;
use crate::{Matrix, Vector};

/// `B_∞ᵈ = [−1, 1]ᵈ` as `2ᵈ` vertices.
pub fn cube_v(d: usize) -> VPolytope {
    let n = 1usize << d;
    let pts = Matrix::from_fn(d, n, |i, j| if (j >> i) & 1 == 1 { 1.0 } else { -1.0 });
    VPolytope::new(pts, true).expect("cube vertices are valid")
}

/// `B_∞ᵈ` as `2d` facets.
pub fn cube_h(d: usize) -> HPolytope {
    let mut n = Matrix::zeros(2 * d, d);
    for i in 0..d {
        n[(2 * i, i)] = 1.0;
        n[(2 * i + 1, i)] = -1.0;
    }
    HPolytope::new(n, Vector::repeat(2 * d, 1.0)).expect("cube facets are valid")
}

/// `B₁ᵈ` as `±eᵢ`.
pub fn cross_polytope_v(d: usize) -> VPolytope {
    VPolytope::new(Matrix::identity(d, d), true).expect("basis vectors are valid")
}

/// `B₁ᵈ` as `2ᵈ` facets `⟨s, x⟩ ≤ 1`, `s ∈ {±1}ᵈ`.
pub fn cross_polytope_h(d: usize) -> HPolytope {
    let n = 1usize << d;
    let normals = Matrix::from_fn(n, d, |j, i| if (j >> i) & 1 == 1 { 1.0 } else { -1.0 });
    HPolytope::new(normals, Vector::repeat(n, 1.0)).expect("cross-polytope facets are valid")
}

/// Regular `k`-gon inscribed in the circle of the given radius, with a vertex
/// at angle `phase`. Symmetric when `k` is even.
pub fn regular_polygon(k: usize, radius: f64, phase: f64) -> VPolytope {
    let pts = Matrix::from_fn(2, k, |i, j| {
        let a = phase + 2.0 * PI * j as f64 / k as f64;
        radius * if i == 0 { a.cos() } else { a.sin() }
    });
    VPolytope::new(pts, k % 2 == 0).expect("polygon vertices are valid")
}

/// Symmetric polytope approximating `B₂ᵈ` from inside: `±eᵢ`, the `2ᵈ`
/// normalized cube diagonals and `extra` uniform random unit vectors.
pub fn ball_proxy<R: Rng + ?Sized>(d: usize, extra: usize, rng: &mut R) -> VPolytope {
    if d == 2 {
        return regular_polygon(64, 1.0, 0.0);
    }
    let mut pts: Vec<Vector> = (0..d)
        .map(|i| {
            let mut e = Vector::zeros(d);
            e[i] = 1.0;
            e
        })
        .collect();
    let cube = cube_v(d);
    for j in 0..cube.num_points() {
        pts.push(cube.point(j) / (d as f64).sqrt());
    }
    for _ in 0..extra {
        pts.push(random_unit_vector(d, rng));
    }
    VPolytope::from_vectors(&pts, true).expect("ball proxy vertices are valid")
}
