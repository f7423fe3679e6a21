//! Maximal-volume inscribed ellipsoid of an H-polytope.
//!
//! The ellipsoid is parametrized as `{L u + c : |u| ≤ 1}` with `L` lower
//! triangular with positive diagonal, so its volume is proportional to
//! `Π Lⱼⱼ` and the facet constraints read `‖Lᵀaᵢ‖ + ⟨aᵢ, c⟩ ≤ bᵢ`. Both are
//! convex in `(c, L)`, and the problem is solved with a log-barrier method
//! using exact Newton steps on the analytic gradient and Hessian.

use nalgebra::Cholesky;

use crate::bodies::hpoly::HPolytope;
use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

pub const JOHN_DIM_CAP: usize = 10;

/// `{x : (x − c)ᵀ shape⁻¹ (x − c) ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    pub center: Vector,
    pub shape: Matrix,
}

impl Ellipsoid {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `log det shape / 2`, the log-volume up to the unit-ball constant.
    pub fn log_volume(&self) -> f64 {
        self.shape.clone().lu().determinant().ln() / 2.0
    }

    /// Support function `⟨u, c⟩ + sqrt(uᵀ shape u)`.
    pub fn support(&self, u: &Vector) -> f64 {
        u.dot(&self.center) + (u.transpose() * &self.shape * u)[(0, 0)].max(0.0).sqrt()
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        let y = x - &self.center;
        match self.shape.clone().cholesky() {
            Some(ch) => y.dot(&ch.solve(&y)) <= 1.0 + tol,
            None => false,
        }
    }

    /// Lower-triangular factor `L` with `shape = L Lᵀ`.
    pub fn factor(&self) -> Option<Matrix> {
        Cholesky::new(self.shape.clone()).map(|c| c.l())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct JohnOptions {
    /// Barrier duality-gap target in log-volume units.
    pub gap: f64,
    pub max_newton: usize,
}

impl Default for JohnOptions {
    fn default() -> Self {
        Self {
            gap: 1e-13,
            max_newton: 5000,
        }
    }
}

pub fn john_ellipsoid(k: &HPolytope) -> Result<Ellipsoid> {
    john_ellipsoid_with(k, &JohnOptions::default())
}

struct Layout {
    d: usize,
    /// (row, col) of each lower-triangular entry, after the `d` center entries.
    tri: Vec<(usize, usize)>,
}

impl Layout {
    fn new(d: usize) -> Self {
        let mut tri = Vec::with_capacity(d * (d + 1) / 2);
        for j in 0..d {
            for k in 0..=j {
                tri.push((j, k));
            }
        }
        Self { d, tri }
    }

    fn len(&self) -> usize {
        self.d + self.tri.len()
    }

    fn unpack(&self, z: &Vector) -> (Vector, Matrix) {
        let c = z.rows(0, self.d).into_owned();
        let mut l = Matrix::zeros(self.d, self.d);
        for (p, &(j, k)) in self.tri.iter().enumerate() {
            l[(j, k)] = z[self.d + p];
        }
        (c, l)
    }

    fn pack(&self, c: &Vector, l: &Matrix) -> Vector {
        let mut z = Vector::zeros(self.len());
        z.rows_mut(0, self.d).copy_from(c);
        for (p, &(j, k)) in self.tri.iter().enumerate() {
            z[self.d + p] = l[(j, k)];
        }
        z
    }
}

/// Barrier objective `−t Σ log Lⱼⱼ − Σ log sᵢ`, or `None` outside the domain.
fn barrier(k: &HPolytope, lay: &Layout, z: &Vector, t: f64) -> Option<f64> {
    let (c, l) = lay.unpack(z);
    let mut f = 0.0;
    for j in 0..lay.d {
        if l[(j, j)] <= 0.0 {
            return None;
        }
        f -= t * l[(j, j)].ln();
    }
    let w = k.normals() * &l;
    let ac = k.normals() * &c;
    for i in 0..k.num_facets() {
        let s = k.offsets()[i] - ac[i] - w.row(i).norm();
        if s <= 0.0 {
            return None;
        }
        f -= s.ln();
    }
    Some(f)
}

fn grad_hess(k: &HPolytope, lay: &Layout, z: &Vector, t: f64) -> (Vector, Matrix) {
    let d = lay.d;
    let p = lay.len();
    let (c, l) = lay.unpack(z);
    let mut g = Vector::zeros(p);
    let mut h = Matrix::zeros(p, p);
    for j in 0..d {
        let idx = d + lay.tri.iter().position(|&e| e == (j, j)).unwrap();
        g[idx] -= t / l[(j, j)];
        h[(idx, idx)] += t / (l[(j, j)] * l[(j, j)]);
    }
    let mut gi = Vector::zeros(p);
    for i in 0..k.num_facets() {
        let a = k.normal(i);
        // wᵢ = Lᵀ aᵢ, so (Lᵀa)_k = Σ_j L_jk a_j.
        let w = l.transpose() * &a;
        let r = w.norm();
        let s = k.offsets()[i] - a.dot(&c) - r;
        gi.rows_mut(0, d).copy_from(&a);
        for (q, &(j, kk)) in lay.tri.iter().enumerate() {
            gi[d + q] = a[j] * w[kk] / r;
        }
        g.axpy(1.0 / s, &gi, 1.0);
        h.ger(1.0 / (s * s), &gi, &gi, 1.0);
        // Curvature of r = ‖Lᵀa‖ in the L block:
        // ∂²r/∂L_jk∂L_pq = a_j a_p δ_kq / r − a_j w_k a_p w_q / r³.
        for (q1, &(j, kk)) in lay.tri.iter().enumerate() {
            for (q2, &(pp, qq)) in lay.tri.iter().enumerate() {
                let mut v = -a[j] * w[kk] * a[pp] * w[qq] / (r * r * r);
                if kk == qq {
                    v += a[j] * a[pp] / r;
                }
                h[(d + q1, d + q2)] += v / s;
            }
        }
    }
    (g, h)
}

pub fn john_ellipsoid_with(k: &HPolytope, opts: &JohnOptions) -> Result<Ellipsoid> {
    let d = k.dim();
    if d > JOHN_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "john_ellipsoid",
            dim: d,
            cap: JOHN_DIM_CAP,
        });
    }
    let (c0, r0) = k.chebyshev_center()?;
    let lay = Layout::new(d);
    let mut z = lay.pack(&c0, &(Matrix::identity(d, d) * (r0 / 2.0)));
    let m = k.num_facets() as f64;
    let mut t = 1.0;
    let mut newton = 0;
    loop {
        // Centering at the current t. Rounding limits how small the Newton
        // decrement can get once t is large, so centering also stops on a
        // failed line search or after a bounded number of steps.
        for _ in 0..100 {
            newton += 1;
            if newton > opts.max_newton {
                return Err(GeomError::IterationLimit("john_ellipsoid"));
            }
            let (g, h) = grad_hess(k, &lay, &z, t);
            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    let reg = &h + Matrix::identity(h.nrows(), h.nrows()) * (1e-12 * h.amax());
                    reg.lu().solve(&(-&g)).ok_or_else(|| {
                        GeomError::NumericalFailure("singular barrier Hessian".into())
                    })?
                }
            };
            let decrement = -g.dot(&step);
            if decrement / 2.0 <= 1e-11 {
                break;
            }
            let f0 = barrier(k, &lay, &z, t).expect("iterate stays in the domain");
            let mut alpha = 1.0;
            loop {
                let cand = &z + &step * alpha;
                if let Some(f1) = barrier(k, &lay, &cand, t) {
                    if f1 <= f0 - 0.25 * alpha * decrement {
                        z = cand;
                        break;
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-10 {
                    break;
                }
            }
            if alpha < 1e-10 {
                break;
            }
        }
        if m / t < opts.gap {
            break;
        }
        t *= 10.0;
    }
    let (c, l) = lay.unpack(&z);
    Ok(Ellipsoid {
        center: c,
        shape: &l * l.transpose(),
    })
}

/// Centering point for Eq.-(1)-type inclusions: the John center `a`, checked
/// to satisfy `−(K − a) ⊆ m(K − a)` facet by facet through support functions.
pub fn center_position(k: &HPolytope) -> Result<Vector> {
    let a = john_ellipsoid(k)?.center;
    let m = k.dim() as f64;
    let ratio = inclusion_ratio(k, &a)?;
    if ratio > m + 1e-8 {
        return Err(GeomError::VerificationFailed(format!(
            "-(K-a) is not inside {m}(K-a): ratio {ratio}"
        )));
    }
    Ok(a)
}

/// Smallest `s` with `−(K − a) ⊆ s(K − a)`: `maxᵢ (h_K(−nᵢ) + ⟨nᵢ,a⟩) / (bᵢ − ⟨nᵢ,a⟩)`.
pub fn inclusion_ratio(k: &HPolytope, a: &Vector) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..k.num_facets() {
        let n = k.normal(i);
        let na = n.dot(a);
        let slack = k.offsets()[i] - na;
        if slack <= 0.0 {
            return Err(GeomError::NotInterior);
        }
        let h = k.support(&(-&n))? + na;
        worst = worst.max(h / slack);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(d: usize) -> HPolytope {
        let mut n = Matrix::zeros(2 * d, d);
        for i in 0..d {
            n[(2 * i, i)] = 1.0;
            n[(2 * i + 1, i)] = -1.0;
        }
        HPolytope::new(n, Vector::repeat(2 * d, 1.0)).unwrap()
    }

    #[test]
    fn cube_gives_unit_ball() {
        for d in 1..=4 {
            let e = john_ellipsoid(&cube(d)).unwrap();
            assert!(e.center.amax() < 1e-9);
            assert!((&e.shape - Matrix::identity(d, d)).amax() < 1e-8, "{}", e.shape);
        }
    }

    #[test]
    fn shifted_box_is_axis_aligned() {
        // [0, 4] × [−1, 1]: center (2, 0), semi-axes 2 and 1.
        let n = Matrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]);
        let h = HPolytope::new(n, Vector::from_vec(vec![4.0, 0.0, 1.0, 1.0])).unwrap();
        let e = john_ellipsoid(&h).unwrap();
        assert!((e.center[0] - 2.0).abs() < 1e-8 && e.center[1].abs() < 1e-8);
        assert!((e.shape[(0, 0)] - 4.0).abs() < 1e-7 && (e.shape[(1, 1)] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn triangle_center_is_barycenter_and_tight() {
        // Triangle x ≥ 0, y ≥ 0, x + y ≤ 1: barycenter (1/3, 1/3), ratio exactly 2.
        let n = Matrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 1.0]);
        let h = HPolytope::new(n, Vector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let a = center_position(&h).unwrap();
        assert!((a[0] - 1.0 / 3.0).abs() < 1e-9 && (a[1] - 1.0 / 3.0).abs() < 1e-9);
        assert!((inclusion_ratio(&h, &a).unwrap() - 2.0).abs() < 1e-8);
    }
}

#[cfg(test)]
mod derivative_tests {
    use super::*;

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        let n = Matrix::from_row_slice(4, 2, &[1.0, 0.2, -1.0, 0.0, 0.3, 1.0, 0.0, -1.0]);
        let k = HPolytope::new(n, Vector::from_vec(vec![2.0, 1.0, 1.5, 1.0])).unwrap();
        let lay = Layout::new(2);
        let l = Matrix::from_row_slice(2, 2, &[0.4, 0.0, 0.1, 0.3]);
        let z = lay.pack(&Vector::from_vec(vec![0.1, -0.05]), &l);
        let t = 3.0;
        let (g, h) = grad_hess(&k, &lay, &z, t);
        let eps = 1e-6;
        for p in 0..lay.len() {
            let mut zp = z.clone();
            zp[p] += eps;
            let mut zm = z.clone();
            zm[p] -= eps;
            let fd = (barrier(&k, &lay, &zp, t).unwrap() - barrier(&k, &lay, &zm, t).unwrap()) / (2.0 * eps);
            assert!((fd - g[p]).abs() < 1e-6, "grad {p}: {fd} vs {}", g[p]);
            let (gp, _) = grad_hess(&k, &lay, &zp, t);
            let (gm, _) = grad_hess(&k, &lay, &zm, t);
            for q in 0..lay.len() {
                let fdh = (gp[q] - gm[q]) / (2.0 * eps);
                assert!((fdh - h[(q, p)]).abs() < 1e-5, "hess {q},{p}: {fdh} vs {}", h[(q, p)]);
            }
        }
    }
}
