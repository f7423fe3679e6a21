//! Banach–Mazur distance: witnessed upper bounds, volume-product, asymmetry
//! and operator-net lower bounds, and the subspace perturbation checks.
//!
//! Witness convention: `(T, a, b)` certifies `λ` when
//! `K₁ − a ⊆ T(K₂ − b) ⊆ λ(K₁ − a)`.

pub mod lower;
pub mod netcert;
pub mod perturb;
pub mod upper;

use serde::{Deserialize, Serialize};

use crate::bodies::{PolyBody, VPolytope};
use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

pub use lower::{bm_lower_asymmetry, bm_lower_volume, minkowski_asymmetry, VolumeLowerBound};
pub use netcert::{bm_lower_netcert, brute_force_sl2, NetCertificate, NetOutcome, NET_BUDGET};
pub use perturb::{perturb_projection_check, perturb_section_check, PerturbResult, PERTURB_SLACK};
pub use upper::{bm_upper, bm_upper_with, BmOptions};

/// Slack of the witness verification.
pub const WITNESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperMethod {
    PatternSearch,
    Composition,
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerMethod {
    Trivial,
    VolumeProduct,
    Asymmetry,
    NetCertificate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BMEstimate {
    pub upper: f64,
    pub lower: f64,
    pub witness: Matrix,
    pub center1: Vector,
    pub center2: Vector,
    pub upper_method: UpperMethod,
    pub lower_method: LowerMethod,
    pub seed: Option<u64>,
    pub evaluations: usize,
}

impl BMEstimate {
    /// Raise the lower bound if `value` improves it.
    pub fn with_lower(mut self, value: f64, method: LowerMethod) -> Self {
        if value > self.lower {
            self.lower = value;
            self.lower_method = method;
        }
        self
    }

    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper + 1e-6
    }
}

/// `‖T : K₁ → K₂‖ = max_{v ∈ V(K₁)} ‖T v‖_{K₂}`.
pub fn op_norm_body(t: &Matrix, k1: &VPolytope, k2: &PolyBody) -> Result<f64> {
    op_norm_centered(t, k1, &Vector::zeros(k1.dim()), k2, &Vector::zeros(k2.dim()))
}

/// `max_{v ∈ V(K₁)} ‖T(v − a)‖_{K₂ − b}`.
pub fn op_norm_centered(t: &Matrix, k1: &VPolytope, a: &Vector, k2: &PolyBody, b: &Vector) -> Result<f64> {
    check_shapes(t, k1.dim(), k2.dim())?;
    let mut worst: f64 = 0.0;
    for j in 0..k1.num_points() {
        let y = t * (k1.point(j) - a);
        worst = worst.max(k2.gauge_centered(b, &y)?);
    }
    Ok(worst)
}

fn check_shapes(t: &Matrix, d_in: usize, d_out: usize) -> Result<()> {
    if t.ncols() != d_in || t.nrows() != d_out {
        return Err(GeomError::DimensionMismatch {
            expected: d_in,
            got: t.ncols(),
        });
    }
    Ok(())
}

/// Scale a candidate `(T, a, b)` into a witness and return `(λ, T′)` with
/// `T′ = s₁T`, `s₁ = max_v ‖T⁻¹(v − a)‖_{K₂−b}`, `λ = s₁ · max_w ‖T(w − b)‖_{K₁−a}`.
///
/// Gauges come from the vertex LPs only, so the value does not depend on
/// facet enumeration.
pub fn evaluate_witness(k1: &PolyBody, k2: &PolyBody, t: &Matrix, a: &Vector, b: &Vector) -> Result<(f64, Matrix)> {
    let d = k1.dim();
    if k2.dim() != d || t.nrows() != d || t.ncols() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: t.nrows(),
        });
    }
    let det = t.determinant();
    if det.abs() < 1e-10 * t.norm().powi(d as i32).max(1e-300) {
        return Err(GeomError::SingularWitness(det));
    }
    let inv = t.clone().try_inverse().ok_or(GeomError::SingularWitness(det))?;
    let mut s1: f64 = 0.0;
    for j in 0..k1.num_vertices() {
        let v = k1.vertices().column(j) - a;
        s1 = s1.max(k2.gauge_lp(b, &(&inv * v))?);
    }
    let mut s2: f64 = 0.0;
    for j in 0..k2.num_vertices() {
        let w = k2.vertices().column(j) - b;
        s2 = s2.max(k1.gauge_lp(a, &(t * w))?);
    }
    Ok((s1 * s2, t * s1))
}

/// Check `K₁ − a ⊆ T(K₂ − b) ⊆ λ(K₁ − a)` vertex by vertex.
pub fn verify_witness(k1: &PolyBody, k2: &PolyBody, est: &BMEstimate) -> Result<bool> {
    let t = &est.witness;
    let inv = t.clone().try_inverse().ok_or(GeomError::SingularWitness(0.0))?;
    for j in 0..k1.num_vertices() {
        let v = k1.vertices().column(j) - &est.center1;
        if k2.gauge_lp(&est.center2, &(&inv * v))? > 1.0 + WITNESS_TOL {
            return Ok(false);
        }
    }
    for j in 0..k2.num_vertices() {
        let w = k2.vertices().column(j) - &est.center2;
        if k1.gauge_lp(&est.center1, &(t * w))? > est.upper + WITNESS_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness for a given map, verified and scaled.
pub fn witness_estimate(k1: &PolyBody, k2: &PolyBody, t: &Matrix, a: &Vector, b: &Vector) -> Result<BMEstimate> {
    let (upper, witness) = evaluate_witness(k1, k2, t, a, b)?;
    Ok(BMEstimate {
        upper,
        lower: 1.0,
        witness,
        center1: a.clone(),
        center2: b.clone(),
        upper_method: UpperMethod::Given,
        lower_method: LowerMethod::Trivial,
        seed: None,
        evaluations: 1,
    })
}

/// Chain `K₁ → K₃ → K₂`: `e13` witnesses `(K₁, K₃)` and `e32` witnesses
/// `(K₃, K₂)`. The composed map is `T₁₃ T₃₂` with the center of `K₂` moved so
/// that the first inclusion is preserved; the bound is re-verified.
pub fn compose_witness(k1: &PolyBody, k2: &PolyBody, e13: &BMEstimate, e32: &BMEstimate) -> Result<BMEstimate> {
    let t1 = &e13.witness;
    let t2 = &e32.witness;
    let t2inv = t2.clone().try_inverse().ok_or(GeomError::SingularWitness(0.0))?;
    // K₃ − b₁₃ = (K₃ − a₃₂) + (a₃₂ − b₁₃) ⊆ T₂(K₂ − b₃₂ + T₂⁻¹(a₃₂ − b₁₃)).
    let b = &e32.center2 - t2inv * (&e32.center1 - &e13.center2);
    let t = t1 * t2;
    let mut est = witness_estimate(k1, k2, &t, &e13.center1, &b)?;
    est.upper_method = UpperMethod::Composition;
    if k1.is_symmetric() && k2.is_symmetric() && est.upper > e13.upper * e32.upper * (1.0 + 1e-9) + 1e-9 {
        return Err(GeomError::VerificationFailed(format!(
            "composed bound {} exceeds product {}",
            est.upper,
            e13.upper * e32.upper
        )));
    }
    Ok(est)
}
