use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::kernel::linalg::{orthogonal_complement, orthonormalize};
use crate::{Matrix, Vector};

/// `offset + span(basis)` with orthonormal basis columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSubspace {
    offset: Vector,
    basis: Matrix,
}

impl AffineSubspace {
    /// Basis columns must already be orthonormal (checked to 1e-9).
    pub fn new(offset: Vector, basis: Matrix) -> Result<Self> {
        if offset.len() != basis.nrows() {
            return Err(GeomError::DimensionMismatch {
                expected: basis.nrows(),
                got: offset.len(),
            });
        }
        let k = basis.ncols();
        let gram = basis.transpose() * &basis;
        if (gram - Matrix::identity(k, k)).amax() > 1e-9 {
            return Err(GeomError::InvalidData("basis columns are not orthonormal".into()));
        }
        Ok(Self { offset, basis })
    }

    /// Orthonormalizes the spanning columns first.
    pub fn from_spanning(offset: Vector, span: &Matrix) -> Result<Self> {
        let basis = orthonormalize(span)?;
        Self::new(offset, basis)
    }

    pub fn linear(basis: Matrix) -> Result<Self> {
        let d = basis.nrows();
        Self::new(Vector::zeros(d), basis)
    }

    /// The whole space with the standard basis.
    pub fn full(d: usize) -> Self {
        Self {
            offset: Vector::zeros(d),
            basis: Matrix::identity(d, d),
        }
    }

    /// `span(e_i : i ∈ coords)`.
    pub fn coordinate(d: usize, coords: &[usize]) -> Self {
        let mut basis = Matrix::zeros(d, coords.len());
        for (j, &i) in coords.iter().enumerate() {
            basis[(i, j)] = 1.0;
        }
        Self {
            offset: Vector::zeros(d),
            basis,
        }
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
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

    pub fn is_linear(&self) -> bool {
        self.offset.iter().all(|v| *v == 0.0)
    }

    /// The linear subspace parallel to this one.
    pub fn direction(&self) -> Self {
        Self {
            offset: Vector::zeros(self.ambient_dim()),
            basis: self.basis.clone(),
        }
    }

    pub fn with_offset(&self, offset: Vector) -> Self {
        Self {
            offset,
            basis: self.basis.clone(),
        }
    }

    pub fn to_ambient(&self, y: &Vector) -> Vector {
        &self.offset + &self.basis * y
    }

    pub fn to_intrinsic(&self, x: &Vector) -> Vector {
        self.basis.transpose() * (x - &self.offset)
    }

    /// Orthogonal projection of an ambient point onto the subspace.
    pub fn project_point(&self, x: &Vector) -> Vector {
        self.to_ambient(&self.to_intrinsic(x))
    }

    pub fn distance(&self, x: &Vector) -> f64 {
        (x - self.project_point(x)).norm()
    }

    /// Orthogonal complement of the direction space (linear).
    pub fn complement(&self) -> Self {
        Self {
            offset: Vector::zeros(self.ambient_dim()),
            basis: orthogonal_complement(&self.basis),
        }
    }

    /// True when `other` lies inside `self` within `tol`.
    pub fn contains_subspace(&self, other: &AffineSubspace, tol: f64) -> bool {
        if self.distance(&other.offset) > tol {
            return false;
        }
        let resid = &other.basis - &self.basis * (self.basis.transpose() * &other.basis);
        resid.amax() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_coordinates() {
        let span = Matrix::from_column_slice(3, 2, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0]);
        let s = AffineSubspace::from_spanning(Vector::from_vec(vec![1.0, 2.0, 3.0]), &span).unwrap();
        let y = Vector::from_vec(vec![0.3, -0.7]);
        let x = s.to_ambient(&y);
        assert!((s.to_intrinsic(&x) - y).amax() < 1e-14);
        assert!(s.distance(&x) < 1e-14);
    }

    #[test]
    fn complement_dimension() {
        let s = AffineSubspace::coordinate(5, &[0, 3]);
        let c = s.complement();
        assert_eq!(c.dim(), 3);
        assert!((s.basis().transpose() * c.basis()).amax() < 1e-14);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let b = Matrix::from_column_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        assert!(AffineSubspace::linear(b).is_err());
    }
}
