//! Sections of projections as projections of sections.
//!
//! For a linear subspace `E` and an affine subspace `F ⊆ E`,
//! `P_E Δ ∩ F = P_F(Δ ∩ Ẽ)` with `Ẽ = F + E^⊥`: a point `x` has `P_E x ∈ F`
//! exactly when `x ∈ F + E^⊥`, and on that set `P_F` and `P_E` agree.

use crate::bodies::AffineSubspace;
use crate::error::{GeomError, Result};
use crate::kernel::linalg::{orthonormalize, svd};
use crate::kernel::lp::{lp_solve, LpProblem, LpStatus, Sense};
use crate::kernel::rng::{random_unit_vector, RngStream};
use crate::simplex::SimplexSpec;
use crate::{Matrix, Vector};

/// Directions used by the built-in verification.
pub const SWAP_DIRECTIONS: usize = 200;
pub const SWAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct SwapCheck {
    pub e_tilde: AffineSubspace,
    pub f: AffineSubspace,
    /// Interior point of both sides in F-coordinates.
    pub interior: Vector,
    /// Largest relative gauge discrepancy over the tested directions.
    pub max_gap: f64,
}

/// Returns `(Ẽ, F)` with `P_E Δ ∩ F = P_F(Δ ∩ Ẽ)`, verified by comparing the
/// two gauges (each from its own LP) at 200 directions.
pub fn swap_representation(
    spec: &SimplexSpec,
    e: &AffineSubspace,
    f: &AffineSubspace,
) -> Result<(AffineSubspace, AffineSubspace)> {
    let check = radial_gap(spec, e, f, SWAP_DIRECTIONS, &RngStream::new(0x5EED_D0A1))?;
    if check.max_gap > SWAP_TOL {
        return Err(GeomError::VerificationFailed(format!(
            "section/projection gauges differ by {:e}",
            check.max_gap
        )));
    }
    Ok((check.e_tilde, check.f))
}

/// `Ẽ = F + E^⊥`.
pub fn e_tilde(e: &AffineSubspace, f: &AffineSubspace) -> Result<AffineSubspace> {
    let comp = e.complement();
    let span = if comp.dim() == 0 {
        f.basis().clone()
    } else {
        let mut cols: Vec<Vector> = (0..f.dim()).map(|j| f.basis().column(j).into_owned()).collect();
        cols.extend((0..comp.dim()).map(|j| comp.basis().column(j).into_owned()));
        Matrix::from_columns(&cols)
    };
    AffineSubspace::from_spanning(f.offset().clone(), &orthonormalize(&span)?)
}

/// Both gauges at `directions` random directions around a common interior
/// point; reports the largest relative discrepancy.
pub fn radial_gap(
    spec: &SimplexSpec,
    e: &AffineSubspace,
    f: &AffineSubspace,
    directions: usize,
    rng: &RngStream,
) -> Result<SwapCheck> {
    let n1 = spec.ambient_dim();
    if e.ambient_dim() != n1 || f.ambient_dim() != n1 {
        return Err(GeomError::DimensionMismatch {
            expected: n1,
            got: e.ambient_dim(),
        });
    }
    if !e.is_linear() {
        return Err(GeomError::ParameterRange("E must be linear".into()));
    }
    if !e.contains_subspace(f, 1e-9) {
        return Err(GeomError::ParameterRange("F must lie inside E".into()));
    }
    let et = e_tilde(e, f)?;
    let interior = interior_point(spec, &et, f)?;
    let mut g = rng.rng();
    let mut max_gap: f64 = 0.0;
    for _ in 0..directions {
        let u = random_unit_vector(f.dim(), &mut g);
        let lhs = radial_section_of_projection(spec, e, f, &interior, &u)?;
        let rhs = radial_projection_of_section(spec, &et, f, &interior, &u)?;
        let (gl, gr) = (1.0 / lhs, 1.0 / rhs);
        max_gap = max_gap.max((gl - gr).abs() / gl.abs().max(1.0));
    }
    Ok(SwapCheck {
        e_tilde: et,
        f: f.clone(),
        interior,
        max_gap,
    })
}

/// Point of `Δ ∩ Ẽ` maximizing its smallest coordinate, in F-coordinates.
fn interior_point(spec: &SimplexSpec, et: &AffineSubspace, f: &AffineSubspace) -> Result<Vector> {
    let n1 = spec.ambient_dim();
    let k = et.dim();
    // Variables (w ∈ ℝ^k free, s free): x = o + B w, xᵢ ≥ s, Σx = 1.
    let mut obj = Vector::zeros(k + 1);
    obj[k] = 1.0;
    let mut b = LpProblem::maximize(obj);
    let mut row = vec![0.0; k + 1];
    for i in 0..n1 {
        for j in 0..k {
            row[j] = -et.basis()[(i, j)];
        }
        row[k] = 1.0;
        b.push_row(&row, Sense::Le, et.offset()[i]);
    }
    for j in 0..k {
        row[j] = et.basis().column(j).sum();
    }
    row[k] = 0.0;
    b.push_row(&row, Sense::Eq, 1.0 - et.offset().sum());
    for j in 0..=k {
        b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    b.set_bounds(k, f64::NEG_INFINITY, 1.0);
    let s = lp_solve(&b.build())?;
    if !s.is_optimal() || s.value <= 1e-10 {
        return Err(GeomError::EmptyInterior);
    }
    let x = et.to_ambient(&s.x.rows(0, k).into_owned());
    Ok(f.to_intrinsic(&x))
}

/// `max t` with `p + t·u ∈ P_E Δ ∩ F`: variables `x ∈ Δ` and `t`, with
/// `Eᵀx = Eᵀ(f₀ + F(p + t·u))`.
fn radial_section_of_projection(
    spec: &SimplexSpec,
    e: &AffineSubspace,
    f: &AffineSubspace,
    p: &Vector,
    u: &Vector,
) -> Result<f64> {
    let n1 = spec.ambient_dim();
    let k = e.dim();
    let target = e.basis().transpose() * f.to_ambient(p);
    let dir = e.basis().transpose() * (f.basis() * u);
    let mut obj = Vector::zeros(n1 + 1);
    obj[n1] = 1.0;
    let mut b = LpProblem::maximize(obj);
    let mut row = vec![0.0; n1 + 1];
    for r in 0..k {
        for i in 0..n1 {
            row[i] = e.basis()[(i, r)];
        }
        row[n1] = -dir[r];
        b.push_row(&row, Sense::Eq, target[r]);
    }
    let mut sum = vec![1.0; n1 + 1];
    sum[n1] = 0.0;
    b.push_row(&sum, Sense::Eq, 1.0);
    radial_value(&b.build())
}

/// `max t` with `p + t·u ∈ P_F(Δ ∩ Ẽ)`: variables `w` along `E^⊥` and `t`,
/// with `x = f₀ + F(p + t·u) + C w ≥ 0` and `Σx = 1`.
fn radial_projection_of_section(
    spec: &SimplexSpec,
    et: &AffineSubspace,
    f: &AffineSubspace,
    p: &Vector,
    u: &Vector,
) -> Result<f64> {
    let n1 = spec.ambient_dim();
    // Directions of Ẽ orthogonal to F.
    let fb = f.basis();
    let resid = et.basis() - fb * (fb.transpose() * et.basis());
    let c = column_basis(&resid);
    let q = c.ncols();
    let base = f.to_ambient(p);
    let dir = fb * u;
    let mut obj = Vector::zeros(q + 1);
    obj[q] = 1.0;
    let mut b = LpProblem::maximize(obj);
    let mut row = vec![0.0; q + 1];
    for i in 0..n1 {
        for j in 0..q {
            row[j] = -c[(i, j)];
        }
        row[q] = -dir[i];
        b.push_row(&row, Sense::Le, base[i]);
    }
    for j in 0..q {
        row[j] = c.column(j).sum();
    }
    row[q] = dir.sum();
    b.push_row(&row, Sense::Eq, 1.0 - base.sum());
    for j in 0..q {
        b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    let prob = b.build();
    radial_value(&prob)
}

fn radial_value(p: &LpProblem) -> Result<f64> {
    let s = lp_solve(p)?;
    match s.status {
        LpStatus::Optimal if s.value > 0.0 => Ok(s.value),
        LpStatus::Optimal | LpStatus::Infeasible => Err(GeomError::NotInterior),
        LpStatus::Unbounded => Err(GeomError::InvalidData("unbounded radial LP".into())),
    }
}

/// Orthonormal basis of the column space of `m`, whose singular values are
/// known to be 0 or 1 (a projected orthonormal basis).
fn column_basis(m: &Matrix) -> Matrix {
    let svd = svd(m);
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > 0.5)
        .map(|(j, _)| svd.u.column(j).into_owned())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(m.nrows(), 0)
    } else {
        Matrix::from_columns(&cols)
    }
}
