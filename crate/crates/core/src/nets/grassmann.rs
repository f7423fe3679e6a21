use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::kernel::linalg::{orthonormalize, svd};
use crate::kernel::rng::{gaussian_matrix, RngStream};
use crate::{Matrix, Vector};

/// A point of `G_{d,k}` stored by an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannPoint {
    basis: Matrix,
}

impl GrassmannPoint {
    /// Orthonormalizes the spanning columns.
    pub fn new(span: &Matrix) -> Result<Self> {
        Ok(Self {
            basis: orthonormalize(span)?,
        })
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `U·E`.
    pub fn rotate(&self, u: &Matrix) -> Self {
        Self {
            basis: u * &self.basis,
        }
    }

    /// Orthogonal projector `E Eᵀ`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }
}

/// Bracket `lower ≤ ρ(E, F) ≤ upper` for `ρ(E,F) = inf{‖U − I‖ : U ∈ O(d), UE = F}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Principal angles between `E` and `F`, ascending, with the principal
/// vectors `(u_i, v_i)` as columns of two matrices.
pub fn principal_angles(e: &GrassmannPoint, f: &GrassmannPoint) -> Result<(Vec<f64>, Matrix, Matrix)> {
    if e.ambient_dim() != f.ambient_dim() || e.dim() != f.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: e.dim(),
            got: f.dim(),
        });
    }
    let k = e.dim();
    let m = e.basis.transpose() * &f.basis;
    let svd = svd(&m);
    let y = svd.u;
    let zt = svd.v.transpose();
    // Singular values come sorted descending, i.e. angles ascending.
    let angles: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect();
    let u = &e.basis * y.columns(0, k);
    let v = &f.basis * zt.transpose().columns(0, k);
    Ok((angles, u, v))
}

/// `lower = sin θ_max` and `upper = 2 sin(θ_max / 2)`.
pub fn grassmann_metric(e: &GrassmannPoint, f: &GrassmannPoint) -> Result<MetricBracket> {
    let (angles, _, _) = principal_angles(e, f)?;
    let theta = angles.iter().copied().fold(0.0, f64::max);
    Ok(MetricBracket {
        lower: theta.sin(),
        upper: 2.0 * (theta / 2.0).sin(),
    })
}

/// Orthogonal `U` with `U·E = F` rotating each principal pair `(uᵢ, vᵢ)`
/// in its own plane; `‖U − I‖ = 2 sin(θ_max/2)`.
pub fn aligning_rotation(e: &GrassmannPoint, f: &GrassmannPoint) -> Result<Matrix> {
    let (angles, u, v) = principal_angles(e, f)?;
    let d = e.ambient_dim();
    let mut rot = Matrix::identity(d, d);
    for (i, &theta) in angles.iter().enumerate() {
        if theta <= 1e-14 {
            continue;
        }
        let ui = u.column(i).into_owned();
        let vi = v.column(i).into_owned();
        let (s, c) = theta.sin_cos();
        let wi: Vector = (&vi - &ui * c) / s;
        let wi = wi.normalize();
        rot += (&ui * ui.transpose() + &wi * wi.transpose()) * (c - 1.0)
            + (&wi * ui.transpose() - &ui * wi.transpose()) * s;
    }
    Ok(rot)
}

/// Haar-distributed `k`-dimensional subspace of `ℝᵈ`.
pub fn random_subspace(d: usize, k: usize, rng: &RngStream) -> Result<GrassmannPoint> {
    if k == 0 || k > d {
        return Err(GeomError::ParameterRange(format!("subspace dim {k} not in 1..={d}")));
    }
    let mut g = rng.rng();
    loop {
        if let Ok(p) = GrassmannPoint::new(&gaussian_matrix(d, k, &mut g)) {
            return Ok(p);
        }
    }
}

/// Rotation `exp(A)` of a random skew-symmetric `A` scaled so `‖U − I‖ = eps`
/// (`eps ≤ 2`).
pub fn random_rotation_near_identity(d: usize, eps: f64, rng: &RngStream) -> Matrix {
    let mut g = rng.rng();
    let a = gaussian_matrix(d, d, &mut g);
    let skew = (&a - a.transpose()) * 0.5;
    // Eigenvalues of exp(tS) are e^{±iθ_j t}; ‖U − I‖ = 2 sin(t·θ_max/2).
    let theta_max = svd(&skew).singular_values[0];
    if theta_max == 0.0 || eps == 0.0 {
        return Matrix::identity(d, d);
    }
    let angle = 2.0 * (eps / 2.0).clamp(0.0, 1.0).asin();
    let s = skew * (angle / theta_max);
    s.exp()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrassmannNet {
    pub d: usize,
    pub k: usize,
    pub eps: f64,
    pub points: Vec<GrassmannPoint>,
    /// False when the point cap stopped the construction early.
    pub complete: bool,
    pub log_cardinality: f64,
}

pub const GRASSMANN_DIM_CAP: usize = 8;

/// Greedy packing in the metric upper bound: Haar samples whose upper
/// distance to every chosen point exceeds `eps` are added, until
/// `2000·max(1, k(d−k))` samples in a row fail or `max_points` is reached.
pub fn grassmann_net(d: usize, k: usize, eps: f64, max_points: usize, rng: &RngStream) -> Result<GrassmannNet> {
    if d > GRASSMANN_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "grassmann_net",
            dim: d,
            cap: GRASSMANN_DIM_CAP,
        });
    }
    if k == 0 || k > d || !(eps > 0.0 && eps < 1.0) {
        return Err(GeomError::ParameterRange(format!("G({d},{k}) with eps {eps}")));
    }
    let mut points: Vec<GrassmannPoint> = Vec::new();
    let limit = 2000 * (k * (d - k)).max(1);
    let mut failures = 0;
    let mut draw = 0u64;
    let mut complete = true;
    while failures < limit {
        let p = random_subspace(d, k, &rng.derive(draw))?;
        draw += 1;
        let far = points
            .iter()
            .all(|q| grassmann_metric(q, &p).map(|b| b.upper > eps).unwrap_or(false));
        if far {
            points.push(p);
            failures = 0;
            if points.len() >= max_points {
                complete = false;
                break;
            }
        } else {
            failures += 1;
        }
    }
    let log_cardinality = (points.len() as f64).ln();
    Ok(GrassmannNet {
        d,
        k,
        eps,
        points,
        complete,
        log_cardinality,
    })
}

/// Largest upper-bound distance from `samples` Haar subspaces to the net.
pub fn certify_grassmann_net(net: &GrassmannNet, samples: usize, rng: &RngStream) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let p = random_subspace(net.d, net.k, &rng.derive(s as u64))?;
        let mut best = f64::INFINITY;
        for q in &net.points {
            best = best.min(grassmann_metric(q, &p)?.upper);
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::linalg::operator_norm;

    fn line(angle: f64) -> GrassmannPoint {
        GrassmannPoint::new(&Matrix::from_column_slice(2, 1, &[angle.cos(), angle.sin()])).unwrap()
    }

    #[test]
    fn equal_subspaces_have_zero_distance() {
        let e = random_subspace(5, 2, &RngStream::new(1)).unwrap();
        let b = grassmann_metric(&e, &e).unwrap();
        assert!(b.lower < 1e-7 && b.upper < 1e-7);
    }

    #[test]
    fn orthogonal_lines() {
        let b = grassmann_metric(&line(0.0), &line(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!((b.upper - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn aligning_rotation_maps_and_attains_upper() {
        for seed in 0..20 {
            let s = RngStream::new(seed);
            let e = random_subspace(6, 3, &s.derive(0)).unwrap();
            let f = random_subspace(6, 3, &s.derive(1)).unwrap();
            let u = aligning_rotation(&e, &f).unwrap();
            assert!((u.transpose() * &u - Matrix::identity(6, 6)).amax() < 1e-10);
            let mapped = GrassmannPoint::new(&(&u * e.basis())).unwrap();
            assert!(grassmann_metric(&mapped, &f).unwrap().upper < 1e-7);
            let b = grassmann_metric(&e, &f).unwrap();
            assert!((operator_norm(&(u - Matrix::identity(6, 6))) - b.upper).abs() < 1e-10);
        }
    }

    #[test]
    fn near_identity_rotation_has_requested_distance() {
        let u = random_rotation_near_identity(5, 0.03, &RngStream::new(4));
        assert!((operator_norm(&(u - Matrix::identity(5, 5))) - 0.03).abs() < 1e-12);
    }

    #[test]
    fn full_grassmannian_is_one_point() {
        let net = grassmann_net(3, 3, 0.5, 100, &RngStream::new(0)).unwrap();
        assert_eq!(net.points.len(), 1);
    }
}
