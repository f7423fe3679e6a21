use serde::{Deserialize, Serialize};

use crate::bodies::{PolyBody, VPolytope};
use crate::error::{GeomError, Result};
use crate::kernel::lp::{lp_solve, LpProblem, Sense};
use crate::kernel::RngStream;
use crate::volume::{polar_volume_mc, volume_mc, VolumeEstimate};
use crate::bodies::Body;
use crate::Vector;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeLowerBound {
    /// `max(1, forward, backward)`.
    pub value: f64,
    /// `(P₁/P₂)^{1/d}` from CI-conservative volume products.
    pub forward: f64,
    /// `(P₂/P₁)^{1/d}`, same convention.
    pub backward: f64,
    /// Point-estimate ratio `(P₁/P₂)^{1/d}`.
    pub point: f64,
    pub volumes: [VolumeEstimate; 4],
}

/// For symmetric bodies, `K₁ ⊆ TK₂ ⊆ λK₁` gives `λᵈ ≥ P(K₁)/P(K₂)` and
/// `λᵈ ≥ P(K₂)/P(K₁)` with `P(K) = vol(K)·vol(K°)` invariant under linear
/// maps. The four volumes use independent streams; the bound divides lower
/// CI ends by upper CI ends.
pub fn bm_lower_volume(k1: &VPolytope, k2: &VPolytope, samples: usize, rng: &RngStream) -> Result<VolumeLowerBound> {
    if !k1.is_symmetric() || !k2.is_symmetric() {
        return Err(GeomError::InvalidData("volume-product bound needs symmetric bodies".into()));
    }
    let d = k1.dim();
    if k2.dim() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: k2.dim(),
        });
    }
    let v1 = volume_mc(&Body::V(k1.clone()), samples, &rng.derive(0))?;
    let p1 = polar_volume_mc(k1, samples, &rng.derive(1))?;
    let v2 = volume_mc(&Body::V(k2.clone()), samples, &rng.derive(2))?;
    let p2 = polar_volume_mc(k2, samples, &rng.derive(3))?;
    let root = |x: f64| if x > 0.0 { x.powf(1.0 / d as f64) } else { 0.0 };
    let forward = root(v1.lo * p1.lo / (v2.hi * p2.hi));
    let backward = root(v2.lo * p2.lo / (v1.hi * p1.hi));
    let point = root(v1.value * p1.value / (v2.value * p2.value));
    Ok(VolumeLowerBound {
        value: forward.max(backward).max(1.0),
        forward,
        backward,
        point,
        volumes: [v1, p1, v2, p2],
    })
}

/// Minkowski asymmetry `α(K) = min_c min{s : −(K − c) ⊆ s(K − c)}` and its
/// center. With `u = (1 + s)c` the condition `⟨nᵢ, c − v⟩ ≤ s(bᵢ − ⟨nᵢ, c⟩)`
/// for all facets `i` and vertices `v` becomes linear in `(u, s)`.
pub fn minkowski_asymmetry(k: &PolyBody) -> Result<(f64, Vector)> {
    let d = k.dim();
    let h = k
        .facets()
        .ok_or_else(|| GeomError::InvalidData("asymmetry needs the facets of K".into()))?;
    let mut obj = Vector::zeros(d + 1);
    obj[d] = 1.0;
    let mut b = LpProblem::minimize(obj);
    let mut row = vec![0.0; d + 1];
    for i in 0..h.num_facets() {
        let n = h.normal(i);
        for j in 0..d {
            row[j] = n[j];
        }
        row[d] = -h.offsets()[i];
        // max over vertices of ⟨n, v⟩ is the support in direction n; the
        // constraint must hold for min over v of ⟨n, v⟩.
        let lo = (0..k.num_vertices())
            .map(|j| n.dot(&k.vertices().column(j)))
            .fold(f64::INFINITY, f64::min);
        b.push_row(&row, Sense::Le, lo);
    }
    for j in 0..d {
        b.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    let s = lp_solve(&b.build())?;
    if !s.is_optimal() {
        return Err(GeomError::NumericalFailure("asymmetry LP did not solve".into()));
    }
    let alpha = s.value;
    let c = s.x.rows(0, d) / (1.0 + alpha);
    Ok((alpha, c))
}

/// `d(K₁, K₂) ≥ max(α(K₁)/α(K₂), α(K₂)/α(K₁))`, valid with arbitrary
/// centers.
pub fn bm_lower_asymmetry(k1: &PolyBody, k2: &PolyBody) -> Result<f64> {
    let (a1, _) = minkowski_asymmetry(k1)?;
    let (a2, _) = minkowski_asymmetry(k2)?;
    Ok((a1 / a2).max(a2 / a1).max(1.0))
}
