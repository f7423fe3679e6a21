use crate::bodies::enumerate::{vertices_of_halfspaces, SUBSET_BUDGET};
use crate::bodies::subspace::AffineSubspace;
use crate::bodies::vpoly::VPolytope;
use crate::error::{GeomError, Result};
use crate::kernel::lp::{lp_solve, LpProblem, LpStatus, Sense};
use crate::{Matrix, Vector};

/// `{x : ⟨nᵢ, x⟩ ≤ bᵢ}` with normals stored as the rows of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    normals: Matrix,
    offsets: Vector,
}

impl HPolytope {
    pub fn new(normals: Matrix, offsets: Vector) -> Result<Self> {
        if normals.nrows() != offsets.len() {
            return Err(GeomError::DimensionMismatch {
                expected: normals.nrows(),
                got: offsets.len(),
            });
        }
        if normals.ncols() == 0 {
            return Err(GeomError::InvalidData("zero-dimensional H-polytope".into()));
        }
        if normals.iter().chain(offsets.iter()).any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidData("non-finite facet data".into()));
        }
        Ok(Self { normals, offsets })
    }

    pub fn dim(&self) -> usize {
        self.normals.ncols()
    }

    pub fn num_facets(&self) -> usize {
        self.normals.nrows()
    }

    pub fn normals(&self) -> &Matrix {
        &self.normals
    }

    pub fn offsets(&self) -> &Vector {
        &self.offsets
    }

    pub fn normal(&self, i: usize) -> Vector {
        self.normals.row(i).transpose()
    }

    /// Facet slacks `bᵢ − ⟨nᵢ, x⟩`.
    pub fn slacks(&self, x: &Vector) -> Vector {
        &self.offsets - &self.normals * x
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.slacks(x).iter().all(|s| *s >= -tol)
    }

    /// Minkowski functional `maxᵢ ⟨nᵢ,x⟩ / bᵢ`; needs every offset positive.
    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x.len())?;
        if self.offsets.iter().any(|b| *b <= 0.0) {
            return Err(GeomError::NotInterior);
        }
        let nx = &self.normals * x;
        Ok(nx
            .iter()
            .zip(self.offsets.iter())
            .map(|(a, b)| a / b)
            .fold(0.0, f64::max))
    }

    /// Gauge of `K − c` at `y`.
    pub fn gauge_centered(&self, c: &Vector, y: &Vector) -> Result<f64> {
        self.translate(&(-c)).gauge(y)
    }

    /// `K + t`.
    pub fn translate(&self, t: &Vector) -> Self {
        Self {
            normals: self.normals.clone(),
            offsets: &self.offsets + &self.normals * t,
        }
    }

    /// `s·K` for `s > 0`.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            normals: self.normals.clone(),
            offsets: &self.offsets * s,
        }
    }

    /// Image `A·K` under an invertible linear map.
    pub fn linear_image(&self, a: &Matrix) -> Result<Self> {
        let inv = a
            .clone()
            .try_inverse()
            .ok_or(GeomError::SingularWitness(0.0))?;
        Ok(Self {
            normals: &self.normals * inv,
            offsets: self.offsets.clone(),
        })
    }

    /// Support function `max_{x ∈ K} ⟨u, x⟩` by LP.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        self.check_dim(u.len())?;
        Ok(self.maximize(u)?.0)
    }

    /// Maximizer and value of a linear functional over K.
    pub fn maximize(&self, u: &Vector) -> Result<(f64, Vector)> {
        let d = self.dim();
        let mut b = LpProblem::maximize(u.clone());
        for i in 0..self.num_facets() {
            b.push_row(self.normals.row(i).transpose().as_slice(), Sense::Le, self.offsets[i]);
        }
        for j in 0..d {
            b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
        }
        let s = lp_solve(&b.build())?;
        match s.status {
            LpStatus::Optimal => Ok((s.value, s.x)),
            LpStatus::Infeasible => Err(GeomError::EmptyInterior),
            LpStatus::Unbounded => Err(GeomError::InvalidData("H-polytope is unbounded".into())),
        }
    }

    /// Center and radius of the largest inscribed Euclidean ball.
    pub fn chebyshev_center(&self) -> Result<(Vector, f64)> {
        let d = self.dim();
        let mut obj = Vector::zeros(d + 1);
        obj[d] = 1.0;
        let mut b = LpProblem::maximize(obj);
        let mut row = vec![0.0; d + 1];
        for i in 0..self.num_facets() {
            for j in 0..d {
                row[j] = self.normals[(i, j)];
            }
            row[d] = self.normals.row(i).norm();
            b.push_row(&row, Sense::Le, self.offsets[i]);
        }
        for j in 0..d {
            b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
        }
        let s = lp_solve(&b.build())?;
        match s.status {
            LpStatus::Optimal if s.value > 0.0 => Ok((s.x.rows(0, d).into_owned(), s.value)),
            LpStatus::Optimal | LpStatus::Infeasible => Err(GeomError::EmptyInterior),
            LpStatus::Unbounded => Err(GeomError::InvalidData("H-polytope is unbounded".into())),
        }
    }

    /// Section by `f`, in the intrinsic coordinates of `f`: substitute
    /// `x = offset + basis·y` into every facet. Facets constant on `f` are
    /// dropped when satisfied.
    pub fn section(&self, f: &AffineSubspace) -> Result<HPolytope> {
        self.check_dim(f.ambient_dim())?;
        let n = &self.normals * f.basis();
        let b = &self.offsets - &self.normals * f.offset();
        let mut rows = Vec::new();
        let mut offs = Vec::new();
        for i in 0..n.nrows() {
            let r = n.row(i);
            if r.norm() <= 1e-12 * (1.0 + self.normals.row(i).norm()) {
                if b[i] < 1e-12 {
                    return Err(GeomError::EmptyInterior);
                }
                continue;
            }
            rows.push(r.into_owned());
            offs.push(b[i]);
        }
        if rows.is_empty() {
            return Err(GeomError::InvalidData("section is unbounded".into()));
        }
        let h = HPolytope::new(Matrix::from_rows(&rows), Vector::from_vec(offs))?;
        let (_, r) = h.chebyshev_center()?;
        if r <= 1e-10 {
            return Err(GeomError::EmptyInterior);
        }
        Ok(h)
    }

    /// Vertex list (conv semantics) by facet-subset enumeration.
    pub fn vertices(&self) -> Result<VPolytope> {
        let verts = vertices_of_halfspaces(&self.normals, &self.offsets, SUBSET_BUDGET)?;
        if verts.is_empty() {
            return Err(GeomError::EmptyInterior);
        }
        VPolytope::new(Matrix::from_columns(&verts), false)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}
