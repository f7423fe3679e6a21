use crate::bodies::hpoly::HPolytope;
use crate::bodies::subspace::AffineSubspace;
use crate::error::{GeomError, Result};
use crate::kernel::linalg::rank;
use crate::kernel::lp::{lp_solve, LpProblem, LpStatus, Sense};
use crate::{Matrix, Vector};

/// Slack used by every containment test.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// A polytope given by points (the columns of a `dim × n` matrix).
///
/// With `symmetric` the body is the absolute convex hull of the points; the
/// stored list is then closed under negation and free of duplicates, so
/// [`VPolytope::points`] is always the full candidate vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    points: Matrix,
    symmetric: bool,
}

impl VPolytope {
    pub fn new(points: Matrix, symmetric: bool) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(GeomError::InvalidData("empty vertex list".into()));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidData("non-finite vertex".into()));
        }
        let points = if symmetric {
            symmetric_closure(&points)
        } else {
            points
        };
        Ok(Self { points, symmetric })
    }

    pub fn from_vectors(points: &[Vector], symmetric: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(GeomError::InvalidData("empty vertex list".into()));
        }
        Self::new(Matrix::from_columns(points), symmetric)
    }

    pub fn dim(&self) -> usize {
        self.points.nrows()
    }

    pub fn num_points(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn point(&self, j: usize) -> Vector {
        self.points.column(j).into_owned()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.num_points())
            .map(|j| self.points.column(j).norm())
            .fold(0.0, f64::max)
    }

    /// `0 ∈ int K`: the points span the space and 0 is a strictly positive
    /// convex combination of them.
    pub fn has_interior_origin(&self) -> Result<bool> {
        let d = self.dim();
        if rank(&self.points, 1e-10) < d {
            return Ok(false);
        }
        if self.symmetric {
            return Ok(true);
        }
        let n = self.num_points();
        let mut obj = Vector::zeros(n + 1);
        obj[n] = 1.0;
        let mut b = LpProblem::maximize(obj);
        let mut row = vec![0.0; n + 1];
        for i in 0..d {
            for j in 0..n {
                row[j] = self.points[(i, j)];
            }
            row[n] = 0.0;
            b.push_row(&row, Sense::Eq, 0.0);
        }
        let mut sum = vec![1.0; n + 1];
        sum[n] = 0.0;
        b.push_row(&sum, Sense::Eq, 1.0);
        for j in 0..n {
            let mut r = vec![0.0; n + 1];
            r[j] = 1.0;
            r[n] = -1.0;
            b.push_row(&r, Sense::Ge, 0.0);
        }
        b.set_bounds(n, f64::NEG_INFINITY, 1.0);
        let s = lp_solve(&b.build())?;
        Ok(s.is_optimal() && s.value > 1e-12)
    }

    /// Minkowski functional via `min Σλ` subject to `Σ λᵢ vᵢ = x, λ ≥ 0`.
    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        self.gauge_centered(&Vector::zeros(self.dim()), x)
    }

    /// Gauge of `K − c` at `y`: `min Σλ` subject to `Σ λᵢ (vᵢ − c) = y`.
    pub fn gauge_centered(&self, c: &Vector, y: &Vector) -> Result<f64> {
        let d = self.dim();
        if y.len() != d || c.len() != d {
            return Err(GeomError::DimensionMismatch {
                expected: d,
                got: y.len(),
            });
        }
        if y.amax() == 0.0 {
            return Ok(0.0);
        }
        let n = self.num_points();
        let mut b = LpProblem::minimize(Vector::repeat(n, 1.0));
        let mut row = vec![0.0; n];
        for i in 0..d {
            for j in 0..n {
                row[j] = self.points[(i, j)] - c[i];
            }
            b.push_row(&row, Sense::Eq, y[i]);
        }
        let s = lp_solve(&b.build())?;
        match s.status {
            LpStatus::Optimal => Ok(s.value),
            _ => Err(GeomError::NotInterior),
        }
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.gauge(x)? <= 1.0 + CONTAINMENT_TOL)
    }

    /// `max_v ⟨v, u⟩` over the vertex list.
    pub fn support(&self, u: &Vector) -> f64 {
        (self.points.transpose() * u).max()
    }

    /// Polar body `{y : ⟨v, y⟩ ≤ 1 for every vertex v}`.
    pub fn polar(&self) -> Result<HPolytope> {
        if !self.has_interior_origin()? {
            return Err(GeomError::NotInterior);
        }
        HPolytope::new(self.points.transpose(), Vector::repeat(self.num_points(), 1.0))
    }

    /// Drop points that are convex combinations of the remaining ones.
    pub fn prune_vertices(&self) -> Result<VPolytope> {
        let d = self.dim();
        let mut keep: Vec<usize> = (0..self.num_points()).collect();
        let mut k = 0;
        while k < keep.len() {
            let target = self.points.column(keep[k]).into_owned();
            let others: Vec<usize> = keep.iter().copied().filter(|&j| j != keep[k]).collect();
            if others.is_empty() {
                break;
            }
            let n = others.len();
            let mut b = LpProblem::minimize(Vector::zeros(n));
            let mut row = vec![0.0; n];
            for i in 0..d {
                for (c, &j) in others.iter().enumerate() {
                    row[c] = self.points[(i, j)];
                }
                b.push_row(&row, Sense::Eq, target[i]);
            }
            b.push_row(&vec![1.0; n], Sense::Eq, 1.0);
            let s = lp_solve(&b.build())?;
            if s.is_optimal() {
                keep.remove(k);
            } else {
                k += 1;
            }
        }
        let cols: Vec<Vector> = keep.iter().map(|&j| self.point(j)).collect();
        Self::new(Matrix::from_columns(&cols), self.symmetric)
    }

    /// Orthogonal projection onto a linear subspace, in its intrinsic
    /// coordinates, followed by pruning.
    pub fn project(&self, e: &AffineSubspace) -> Result<VPolytope> {
        if e.ambient_dim() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                got: e.ambient_dim(),
            });
        }
        if !e.is_linear() {
            return Err(GeomError::InvalidData("projection subspace must be linear".into()));
        }
        let pts = e.basis().transpose() * &self.points;
        Self::new(pts, self.symmetric)?.prune_vertices()
    }

    pub fn linear_image(&self, a: &Matrix) -> Result<VPolytope> {
        Self::new(a * &self.points, self.symmetric)
    }

    pub fn translate(&self, t: &Vector) -> VPolytope {
        let mut pts = self.points.clone();
        for mut c in pts.column_iter_mut() {
            c += t;
        }
        Self {
            points: pts,
            symmetric: false,
        }
    }
}

/// `list ∪ −list` with near-duplicates removed, order preserved.
fn symmetric_closure(points: &Matrix) -> Matrix {
    let mut out: Vec<Vector> = Vec::new();
    let push = |out: &mut Vec<Vector>, v: Vector| {
        let tol = 1e-12 * (1.0 + v.amax());
        if !out.iter().any(|u| (u - &v).amax() <= tol) {
            out.push(v);
        }
    };
    for j in 0..points.ncols() {
        let p = points.column(j).into_owned();
        if p.amax() == 0.0 {
            continue;
        }
        push(&mut out, p.clone());
        push(&mut out, -p);
    }
    if out.is_empty() {
        return Matrix::zeros(points.nrows(), 1);
    }
    Matrix::from_columns(&out)
}

/// Either body representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    V(VPolytope),
    H(HPolytope),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::V(v) => v.dim(),
            Body::H(h) => h.dim(),
        }
    }

    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        match self {
            Body::V(v) => v.gauge(x),
            Body::H(h) => h.gauge(x),
        }
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        match self {
            Body::V(v) => v.contains(x),
            Body::H(h) => Ok(h.contains(x, CONTAINMENT_TOL)),
        }
    }
}

impl From<VPolytope> for Body {
    fn from(v: VPolytope) -> Self {
        Body::V(v)
    }
}

impl From<HPolytope> for Body {
    fn from(h: HPolytope) -> Self {
        Body::H(h)
    }
}

/// `K₁ ⊆ λ·K₂`, decided on the vertices of `K₁`.
pub fn contains_scaled(k1: &VPolytope, lambda: f64, k2: &Body) -> Result<bool> {
    for j in 0..k1.num_points() {
        if k2.gauge(&k1.point(j))? > lambda + CONTAINMENT_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
