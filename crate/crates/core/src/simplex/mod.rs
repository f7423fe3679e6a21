//! The standard simplex `Δ_N = {x ∈ ℝ^{N+1} : x ≥ 0, Σxᵢ = 1}`, its sections,
//! the normal-form position of a section, projections of sections and the
//! section/projection swap.

pub mod duality;
pub mod position;
pub mod project;

use serde::{Deserialize, Serialize};

use crate::bodies::{AffineSubspace, HPolytope};
use crate::error::{GeomError, Result};
use crate::kernel::linalg::{orthogonal_complement, orthonormalize};
use crate::kernel::rng::{gaussian_matrix, RngStream};
use crate::{Matrix, Vector};

pub use duality::{radial_gap, swap_representation, SwapCheck, SWAP_DIRECTIONS, SWAP_TOL};
pub use position::{km_body, position_section, PositionedSection};
pub use project::{project_section, projection_gauge_lp, ProjectedBody, PROJECT_DIM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexSpec {
    pub n: usize,
}

impl SimplexSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeomError::ParameterRange("simplex needs N >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    pub fn barycenter(&self) -> Vector {
        Vector::repeat(self.n + 1, 1.0 / (self.n + 1) as f64)
    }

    /// Orthonormal basis of `H₀ = {x : Σxᵢ = 0}`.
    pub fn hyperplane_basis(&self) -> Matrix {
        let ones = Vector::repeat(self.n + 1, 1.0 / ((self.n + 1) as f64).sqrt());
        orthogonal_complement(&Matrix::from_columns(&[ones]))
    }

    /// `H` itself as an affine subspace through the barycenter.
    pub fn hyperplane(&self) -> AffineSubspace {
        AffineSubspace::new(self.barycenter(), self.hyperplane_basis()).expect("orthonormal basis")
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.n + 1 && x.iter().all(|v| *v >= -tol) && (x.sum() - 1.0).abs() <= tol
    }
}

/// Section `Δ_N ∩ F` in the intrinsic coordinates of `F` (which must lie in
/// `H`): facets `−(B y)ᵢ ≤ oᵢ`. Coordinates vanishing identically on `F`
/// contribute no facet.
pub fn simplex_section(spec: &SimplexSpec, f: &AffineSubspace) -> Result<HPolytope> {
    check_in_hyperplane(spec, f)?;
    let (h, _) = section_facets(spec, f)?;
    Ok(h)
}

/// Section facets plus the list of coordinates identically zero on `F`.
pub(crate) fn section_facets(spec: &SimplexSpec, f: &AffineSubspace) -> Result<(HPolytope, Vec<usize>)> {
    let b = f.basis();
    let o = f.offset();
    let mut rows = Vec::new();
    let mut offs = Vec::new();
    let mut zero = Vec::new();
    for i in 0..spec.ambient_dim() {
        let r = b.row(i);
        if r.amax() <= 1e-12 {
            if o[i] < -1e-12 {
                return Err(GeomError::EmptyInterior);
            }
            if o[i] <= 1e-12 {
                zero.push(i);
            }
            continue;
        }
        rows.push(-r.into_owned());
        offs.push(o[i]);
    }
    if rows.is_empty() {
        return Err(GeomError::EmptyInterior);
    }
    let h = HPolytope::new(Matrix::from_rows(&rows), Vector::from_vec(offs))?;
    let (_, r) = h.chebyshev_center()?;
    if r <= 1e-10 {
        return Err(GeomError::EmptyInterior);
    }
    Ok((h, zero))
}

fn check_in_hyperplane(spec: &SimplexSpec, f: &AffineSubspace) -> Result<()> {
    if f.ambient_dim() != spec.ambient_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: spec.ambient_dim(),
            got: f.ambient_dim(),
        });
    }
    let col_sums = f.basis().row_sum();
    if (f.offset().sum() - 1.0).abs() > 1e-9 || col_sums.amax() > 1e-9 {
        return Err(GeomError::ParameterRange("section subspace must lie in the hyperplane sum = 1".into()));
    }
    Ok(())
}

/// Uniform random point of `Δ_N` (normalized exponentials).
pub fn random_simplex_point(spec: &SimplexSpec, rng: &RngStream) -> Vector {
    use rand::Rng;
    let mut g = rng.rng();
    let e = Vector::from_fn(spec.ambient_dim(), |_, _| -(1.0 - g.random::<f64>()).ln());
    let s = e.sum();
    e / s
}

/// Random `m`-dimensional section of `Δ_N`: a Haar-random direction space
/// inside `H₀` through either the barycenter or a uniform random point.
pub fn random_section(spec: &SimplexSpec, m: usize, through_barycenter: bool, rng: &RngStream) -> Result<AffineSubspace> {
    if m == 0 || m > spec.n {
        return Err(GeomError::ParameterRange(format!("section dim {m} not in 1..={}", spec.n)));
    }
    let h0 = spec.hyperplane_basis();
    let g = gaussian_matrix(spec.n, m, &mut rng.derive(0).rng());
    let basis = orthonormalize(&(&h0 * g))?;
    let offset = if through_barycenter {
        spec.barycenter()
    } else {
        random_simplex_point(spec, &rng.derive(1))
    };
    AffineSubspace::new(offset, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_section_has_n_plus_one_facets() {
        let s = SimplexSpec::new(4).unwrap();
        let h = simplex_section(&s, &s.hyperplane()).unwrap();
        assert_eq!(h.num_facets(), 5);
        assert_eq!(h.dim(), 4);
    }

    #[test]
    fn line_through_barycenter_is_segment() {
        // N = 2, direction (1, -1, 0)/√2: x = (1/3 + t/√2, 1/3 − t/√2, 1/3), t ∈ [−√2/3, √2/3].
        let s = SimplexSpec::new(2).unwrap();
        let dir = Matrix::from_column_slice(3, 1, &[1.0, -1.0, 0.0]) / 2f64.sqrt();
        let f = AffineSubspace::new(s.barycenter(), dir).unwrap();
        let h = simplex_section(&s, &f).unwrap();
        let hi = h.support(&Vector::from_vec(vec![1.0])).unwrap();
        let lo = -h.support(&Vector::from_vec(vec![-1.0])).unwrap();
        assert!((hi - 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((lo + 2f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_subspace_outside_hyperplane() {
        let s = SimplexSpec::new(2).unwrap();
        let f = AffineSubspace::coordinate(3, &[0, 1]);
        assert!(simplex_section(&s, &f).is_err());
    }
}
