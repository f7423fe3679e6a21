//! Distances between nearby `K_m ∩ L` bodies and between projections of one
//! such body onto nearby subspaces.

use serde::{Deserialize, Serialize};

use crate::bm::upper::{bm_upper_with, BmOptions};
use crate::bm::{evaluate_witness, BMEstimate};
use crate::bodies::{AffineSubspace, HPolytope, PolyBody};
use crate::error::{GeomError, Result};
use crate::kernel::RngStream;
use crate::nets::{aligning_rotation, grassmann_metric, GrassmannPoint};
use crate::simplex::{km_body, project_section};
use crate::{Matrix, Vector};

/// Allowance for the optimizer on top of the theoretical bound.
pub const PERTURB_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbResult {
    /// `2 sin(θ_max/2)`, the distance of the aligning rotation to `I`.
    pub rho_upper: f64,
    pub rho_lower: f64,
    pub estimate: BMEstimate,
    /// Value of the aligning rotation itself as a witness.
    pub rotation_value: f64,
    /// `(1 + ρ·m^{3/2})²`.
    pub bound: f64,
    pub passed: bool,
}

fn finish(
    k1: &PolyBody,
    k2: &PolyBody,
    hint: Matrix,
    rho: (f64, f64),
    m: usize,
    opts: &BmOptions,
    rng: &RngStream,
) -> Result<PerturbResult> {
    let d = k1.dim();
    let zero = Vector::zeros(d);
    let (rotation_value, _) = evaluate_witness(k1, k2, &hint, &zero, &zero)?;
    let mut o = opts.clone();
    o.hints.insert(0, (hint, Some((zero.clone(), zero))));
    let estimate = bm_upper_with(k1, k2, &o, rng)?;
    let bound = (1.0 + rho.1 * (m as f64).powf(1.5)).powi(2);
    let passed = estimate.upper <= bound + PERTURB_SLACK;
    Ok(PerturbResult {
        rho_upper: rho.1,
        rho_lower: rho.0,
        estimate,
        rotation_value,
        bound,
        passed,
    })
}

/// `K_j = K_m ∩ L_j` for two `m`-dimensional subspaces of `ℝ^{N+1}`, compared
/// through `bm_upper` seeded with the aligning rotation.
pub fn perturb_section_check(
    l1: &GrassmannPoint,
    l2: &GrassmannPoint,
    m: usize,
    opts: &BmOptions,
    rng: &RngStream,
) -> Result<PerturbResult> {
    if l1.dim() != m || l2.dim() != m || l1.ambient_dim() != l2.ambient_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: l2.dim(),
        });
    }
    if m > 5 {
        return Err(GeomError::DimensionCap {
            what: "perturb_section_check",
            dim: m,
            cap: 5,
        });
    }
    let n = l1.ambient_dim() - 1;
    let s1 = AffineSubspace::linear(l1.basis().clone())?;
    let s2 = AffineSubspace::linear(l2.basis().clone())?;
    let k1 = PolyBody::from_hpolytope(&km_body(n, m, &s1)?, false)?;
    let k2 = PolyBody::from_hpolytope(&km_body(n, m, &s2)?, false)?;
    let metric = grassmann_metric(l1, l2)?;
    let u = aligning_rotation(l1, l2)?;
    // K₂-coordinates → L₂ → U⁻¹ → L₁ → K₁-coordinates.
    let hint = l1.basis().transpose() * u.transpose() * l2.basis();
    finish(&k1, &k2, hint, (metric.lower, metric.upper), m, opts, rng)
}

/// `P₁K` and `P₂K` for `K` given in the coordinates of an `m`-dimensional
/// space and `F₁, F₂` subspaces of it.
pub fn perturb_projection_check(
    k: &HPolytope,
    f1: &GrassmannPoint,
    f2: &GrassmannPoint,
    opts: &BmOptions,
    rng: &RngStream,
) -> Result<PerturbResult> {
    let m = k.dim();
    if f1.ambient_dim() != m || f2.ambient_dim() != m || f1.dim() != f2.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: f2.ambient_dim(),
        });
    }
    if m > 5 {
        return Err(GeomError::DimensionCap {
            what: "perturb_projection_check",
            dim: m,
            cap: 5,
        });
    }
    let e1 = AffineSubspace::linear(f1.basis().clone())?;
    let e2 = AffineSubspace::linear(f2.basis().clone())?;
    let p1 = PolyBody::from_vpolytope(&project_section(k, &e1)?.body)?;
    let p2 = PolyBody::from_vpolytope(&project_section(k, &e2)?.body)?;
    let metric = grassmann_metric(f1, f2)?;
    let u = aligning_rotation(f1, f2)?;
    let hint = f1.basis().transpose() * u.transpose() * f2.basis();
    finish(&p1, &p2, hint, (metric.lower, metric.upper), m, opts, rng)
}
