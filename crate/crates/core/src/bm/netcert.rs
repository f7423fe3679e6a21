//! Operator-net lower bounds for `d ≤ 3`.
//!
//! A sweep from `K₁` to `K₂` at level `η` tries to rule out every operator
//! `T` with `|det T| = 1` and `‖T : K₁ → K₂‖ ≤ η`:
//!
//! * with `ρ B₁ᵈ ⊆ K₁`, each column of such `T` has `K₂`-gauge at most `η/ρ`;
//! * columns are snapped to the grid `hℤᵈ`, `h = 2ε/d`, so the snapped map `G`
//!   has per-column error at most `h√d/2` and `‖G − T‖ ≤ ε`;
//! * `G` is kept only if `||det G| − 1|` is within the multilinear bound
//!   `Π(|gⱼ| + h√d/2) − Π|gⱼ|`;
//! * `‖G : K₁ → K₂‖ ≤ η + ε·R₁·ξ₂ = τ` would follow (`K₁ ⊆ R₁B₂`,
//!   `B₂ ⊆ ξ₂K₂`), so a sweep succeeds when every kept `G` exceeds `τ`.
//!
//! Both sweeps succeeding rules out a determinant-one witness with either
//! norm at most `η`, hence `d(K₁, K₂) ≥ η²`.

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bm::op_norm_body;
use crate::bodies::{PolyBody, VPolytope};
use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

/// Cap on the number of grid operators examined per sweep.
pub const NET_BUDGET: u128 = 10_000_000;
pub const NET_DIM_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum NetOutcome {
    Certified { lower: f64 },
    /// A grid operator with norm at most `τ` was found in this sweep.
    Inconclusive { sweep: Sweep, operator: Matrix, norm: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub tau: f64,
    /// `ξ` with `B₂ ⊆ ξ·K_dst`.
    pub xi: f64,
    /// `ρ` with `ρB₁ ⊆ K_src`.
    pub rho: f64,
    pub grid_columns: usize,
    /// Operators surviving the determinant filter.
    pub net_size: usize,
    /// `min (‖G‖ − τ)` over the net (negative means a passing operator).
    pub min_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetCertificate {
    pub eta: f64,
    pub eps: f64,
    pub forward: SweepReport,
    pub backward: Option<SweepReport>,
    pub outcome: NetOutcome,
}

impl NetCertificate {
    pub fn certified_lower(&self) -> Option<f64> {
        match self.outcome {
            NetOutcome::Certified { lower } => Some(lower),
            NetOutcome::Inconclusive { .. } => None,
        }
    }
}

pub fn bm_lower_netcert(k1: &VPolytope, k2: &VPolytope, eta: f64, eps: f64) -> Result<NetCertificate> {
    let d = k1.dim();
    if k2.dim() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: k2.dim(),
        });
    }
    if d > NET_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "bm_lower_netcert",
            dim: d,
            cap: NET_DIM_CAP,
        });
    }
    if !(eta >= 1.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(GeomError::ParameterRange(format!("need eta ≥ 1 and eps in (0,1), got {eta}, {eps}")));
    }
    if !k1.is_symmetric() || !k2.is_symmetric() {
        return Err(GeomError::InvalidData("net certificates need symmetric bodies".into()));
    }
    let p1 = PolyBody::from_vpolytope(k1)?;
    let p2 = PolyBody::from_vpolytope(k2)?;
    let (forward, hit) = sweep(&p1, &p2, eta, eps)?;
    if let Some((operator, norm)) = hit {
        return Ok(NetCertificate {
            eta,
            eps,
            forward,
            backward: None,
            outcome: NetOutcome::Inconclusive {
                sweep: Sweep::Forward,
                operator,
                norm,
            },
        });
    }
    let (backward, hit) = sweep(&p2, &p1, eta, eps)?;
    let outcome = match hit {
        Some((operator, norm)) => NetOutcome::Inconclusive {
            sweep: Sweep::Backward,
            operator,
            norm,
        },
        None => NetOutcome::Certified { lower: eta * eta },
    };
    Ok(NetCertificate {
        eta,
        eps,
        forward,
        backward: Some(backward),
        outcome,
    })
}

fn inner_radius(k: &PolyBody) -> Result<f64> {
    k.inner_radius()
        .ok_or_else(|| GeomError::InvalidData("net certificate needs facets of the target body".into()))
}

/// Largest `ρ` with `ρ·(±eⱼ) ∈ K` for all `j`.
fn cross_radius(k: &PolyBody) -> Result<f64> {
    let d = k.dim();
    let mut worst: f64 = 0.0;
    for j in 0..d {
        let mut e = Vector::zeros(d);
        e[j] = 1.0;
        worst = worst.max(k.gauge(&e)?).max(k.gauge(&-e)?);
    }
    Ok(1.0 / worst)
}

fn sweep(src: &PolyBody, dst: &PolyBody, eta: f64, eps: f64) -> Result<(SweepReport, Option<(Matrix, f64)>)> {
    let d = src.dim();
    let h = 2.0 * eps / d as f64;
    let col_err = h * (d as f64).sqrt() / 2.0;
    let rho = cross_radius(src)?;
    let xi = 1.0 / inner_radius(dst)?;
    let kappa = eta / rho;
    let gauge_cap = kappa + xi * col_err;
    let tau = eta + eps * src.outer_radius() * xi;

    // Candidate columns: grid points with K₂-gauge at most gauge_cap.
    let reach = gauge_cap * dst.outer_radius();
    let steps = (reach / h).ceil() as i64;
    let mut columns: Vec<Vector> = Vec::new();
    let mut idx = vec![-steps; d];
    loop {
        let c = Vector::from_fn(d, |i, _| idx[i] as f64 * h);
        if c.norm() <= reach + 1e-12 && dst.gauge(&c)? <= gauge_cap {
            columns.push(c);
        }
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = -steps;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    let count = (columns.len() as u128).saturating_pow(d as u32);
    if count > NET_BUDGET {
        return Err(GeomError::NetTooLarge {
            size: count,
            budget: NET_BUDGET,
        });
    }
    let norms: Vec<f64> = columns.iter().map(|c| c.norm()).collect();
    let nc = columns.len();
    let src_v = src.vpolytope();

    // Parallel over the first column; each task scans the remaining tuples in
    // lexicographic order, so the reported operator is the first in that order.
    let per_first: Vec<Result<(usize, f64, Option<(Matrix, f64)>)>> = (0..nc)
        .into_par_iter()
        .map(|first| {
            let mut kept = 0usize;
            let mut margin = f64::INFINITY;
            let mut hit = None;
            let mut rest = vec![0usize; d - 1];
            loop {
                let mut cols = Vec::with_capacity(d);
                cols.push(first);
                cols.extend(rest.iter().copied());
                let g = Matrix::from_fn(d, d, |i, j| columns[cols[j]][i]);
                let prod: f64 = cols.iter().map(|&c| norms[c]).product();
                let prod_hi: f64 = cols.iter().map(|&c| norms[c] + col_err).product();
                let det = g.determinant().abs();
                if (det - 1.0).abs() <= prod_hi - prod {
                    kept += 1;
                    let n = op_norm_body(&g, src_v, dst)?;
                    margin = margin.min(n - tau);
                    if n <= tau && hit.is_none() {
                        hit = Some((g, n));
                    }
                }
                // Next tuple for the remaining columns.
                let mut k = 0;
                while k < d - 1 {
                    rest[k] += 1;
                    if rest[k] < nc {
                        break;
                    }
                    rest[k] = 0;
                    k += 1;
                }
                if k == d - 1 {
                    break;
                }
            }
            Ok((kept, margin, hit))
        })
        .collect();
    let mut net_size = 0;
    let mut min_margin = f64::INFINITY;
    let mut hit = None;
    for r in per_first {
        let (k, m, h) = r?;
        net_size += k;
        min_margin = min_margin.min(m);
        if hit.is_none() {
            hit = h;
        }
    }
    Ok((
        SweepReport {
            tau,
            xi,
            rho,
            grid_columns: nc,
            net_size,
            min_margin,
        },
        hit,
    ))
}

/// Brute-force minimum of `‖T : K₁ → K₂‖·‖T⁻¹ : K₂ → K₁‖` over a grid of
/// planar determinant-±1 maps `R(θ)·diag(s, 1/s)·[[1, t], [0, 1]]·F`,
/// `F ∈ {I, diag(1, −1)}`, with `θ ∈ [0, π)`, `ln s ∈ [−ln s_max, ln s_max]`,
/// `t ∈ [−t_max, t_max]`; `n` points per axis.
pub fn brute_force_sl2(k1: &VPolytope, k2: &VPolytope, n: usize, s_max: f64, t_max: f64) -> Result<f64> {
    if k1.dim() != 2 || k2.dim() != 2 {
        return Err(GeomError::DimensionMismatch {
            expected: 2,
            got: k1.dim(),
        });
    }
    let p1 = PolyBody::from_vpolytope(k1)?;
    let p2 = PolyBody::from_vpolytope(k2)?;
    let (h1, h2) = match (p1.facets(), p2.facets()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(GeomError::InvalidData("brute force needs facets".into())),
    };
    let pts = |m: &Matrix| -> Vec<Vector2<f64>> { (0..m.ncols()).map(|j| Vector2::new(m[(0, j)], m[(1, j)])).collect() };
    let scaled = |h: &crate::bodies::HPolytope| -> Vec<Vector2<f64>> {
        (0..h.num_facets())
            .map(|i| Vector2::new(h.normals()[(i, 0)], h.normals()[(i, 1)]) / h.offsets()[i])
            .collect()
    };
    let (v1, v2) = (pts(k1.points()), pts(k2.points()));
    let (n1, n2) = (scaled(&h1), scaled(&h2));
    // ‖T : K₁ → K₂‖ = max over vertices v of K₁ and scaled facet normals n of K₂ of ⟨n, Tv⟩.
    let norm = |t: &Matrix2<f64>, vs: &[Vector2<f64>], ns: &[Vector2<f64>]| -> f64 {
        let mut best = f64::NEG_INFINITY;
        for v in vs {
            let tv = t * v;
            for n in ns {
                best = best.max(n.dot(&tv));
            }
        }
        best
    };
    let ls = s_max.ln();
    let axis = |k: usize, lo: f64, hi: f64| if n == 1 { (lo + hi) / 2.0 } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    let best = (0..n)
        .into_par_iter()
        .map(|it| {
            let th = std::f64::consts::PI * it as f64 / n as f64;
            let r = Matrix2::new(th.cos(), -th.sin(), th.sin(), th.cos());
            let mut best = f64::INFINITY;
            for is in 0..n {
                let s = axis(is, -ls, ls).exp();
                let rs = r * Matrix2::new(s, 0.0, 0.0, 1.0 / s);
                for itt in 0..n {
                    let t = axis(itt, -t_max, t_max);
                    let base = rs * Matrix2::new(1.0, t, 0.0, 1.0);
                    for flip in [1.0, -1.0] {
                        let m = base * Matrix2::new(1.0, 0.0, 0.0, flip);
                        let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / m.determinant();
                        best = best.min(norm(&m, &v1, &n2) * norm(&inv, &v2, &n1));
                    }
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}
