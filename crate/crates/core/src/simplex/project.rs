use crate::bodies::{AffineSubspace, HPolytope, VPolytope};
use crate::error::{GeomError, Result};
use crate::kernel::lp::{lp_solve, LpProblem, LpStatus, Sense};
use crate::Vector;

/// Vertex enumeration of the section is only attempted up to this dimension.
pub const PROJECT_DIM_CAP: usize = 6;

/// `P_E K` in the intrinsic coordinates of `E`.
#[derive(Debug, Clone)]
pub struct ProjectedBody {
    pub source: HPolytope,
    pub e: AffineSubspace,
    pub body: VPolytope,
}

/// Enumerate the vertices of `k` (dimension ≤ 6), project them onto the
/// linear subspace `e` of `k`'s coordinate space and prune.
pub fn project_section(k: &HPolytope, e: &AffineSubspace) -> Result<ProjectedBody> {
    let m = k.dim();
    if m > PROJECT_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "project_section",
            dim: m,
            cap: PROJECT_DIM_CAP,
        });
    }
    if e.ambient_dim() != m {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: e.ambient_dim(),
        });
    }
    let verts = k.vertices()?;
    let body = verts.project(e)?;
    Ok(ProjectedBody {
        source: k.clone(),
        e: e.clone(),
        body,
    })
}

/// Gauge of `P_E K − c` at `u` computed on the H-representation with free
/// fiber coordinates: `min t` subject to `Eᵀz = c·t + u`, `z ∈ tK`.
pub fn projection_gauge_lp(k: &HPolytope, e: &AffineSubspace, c: &Vector, u: &Vector) -> Result<f64> {
    let m = k.dim();
    let n = e.dim();
    // Variables (z ∈ ℝ^m, t ≥ 0).
    let mut obj = Vector::zeros(m + 1);
    obj[m] = 1.0;
    let mut b = LpProblem::minimize(obj);
    let mut row = vec![0.0; m + 1];
    for i in 0..k.num_facets() {
        for j in 0..m {
            row[j] = k.normals()[(i, j)];
        }
        row[m] = -k.offsets()[i];
        b.push_row(&row, Sense::Le, 0.0);
    }
    for r in 0..n {
        for j in 0..m {
            row[j] = e.basis()[(j, r)];
        }
        row[m] = -c[r];
        b.push_row(&row, Sense::Eq, u[r]);
    }
    for j in 0..m {
        b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    let s = lp_solve(&b.build())?;
    match s.status {
        LpStatus::Optimal => Ok(s.value),
        _ => Err(GeomError::NotInterior),
    }
}
