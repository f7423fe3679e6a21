//! Multi-start pattern search for `min λ(T, a, b)`.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::bm::{evaluate_witness, BMEstimate, LowerMethod, UpperMethod};
use crate::bodies::{john_ellipsoid, PolyBody};
use crate::error::{GeomError, Result};
use crate::kernel::rng::{gaussian_vector, random_orthogonal, RngStream};
use crate::{Matrix, Vector};

pub const BM_DIM_CAP: usize = 8;

#[derive(Debug, Clone)]
pub struct BmOptions {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    /// Starting maps (tried before identity and random starts), with optional
    /// centers for non-symmetric bodies.
    pub hints: Vec<(Matrix, Option<(Vector, Vector)>)>,
    /// Smallest relative step before a restart stops.
    pub min_step: f64,
}

impl Default for BmOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_evals: 2000,
            hints: Vec::new(),
            min_step: 1e-7,
        }
    }
}

pub fn bm_upper(k1: &PolyBody, k2: &PolyBody, restarts: usize, rng: &RngStream) -> Result<BMEstimate> {
    bm_upper_with(
        k1,
        k2,
        &BmOptions {
            restarts,
            ..BmOptions::default()
        },
        rng,
    )
}

/// Objective over the facet gauges (fast path); `None` for infeasible
/// candidates (singular map, centers leaving the interior).
struct Objective<'a> {
    k1: &'a PolyBody,
    k2: &'a PolyBody,
    d: usize,
    centered: bool,
}

impl Objective<'_> {
    fn unpack(&self, p: &[f64]) -> (Matrix, Vector, Vector) {
        let d = self.d;
        let t = Matrix::from_column_slice(d, d, &p[..d * d]);
        if self.centered {
            let a = Vector::from_column_slice(&p[d * d..d * d + d]);
            let b = Vector::from_column_slice(&p[d * d + d..]);
            (t, a, b)
        } else {
            (t, Vector::zeros(d), Vector::zeros(d))
        }
    }

    fn eval(&self, p: &[f64]) -> Option<f64> {
        let (t, a, b) = self.unpack(p);
        let inv = t.clone().try_inverse()?;
        let mut s1: f64 = 0.0;
        for j in 0..self.k1.num_vertices() {
            let v = self.k1.vertices().column(j) - &a;
            s1 = s1.max(self.k2.gauge_centered(&b, &(&inv * v)).ok()?);
        }
        let mut s2: f64 = 0.0;
        for j in 0..self.k2.num_vertices() {
            let w = self.k2.vertices().column(j) - &b;
            s2 = s2.max(self.k1.gauge_centered(&a, &(&t * w)).ok()?);
        }
        let v = s1 * s2;
        v.is_finite().then_some(v)
    }
}

fn pack(t: &Matrix, centers: Option<(&Vector, &Vector)>) -> Vec<f64> {
    let mut p: Vec<f64> = t.as_slice().to_vec();
    if let Some((a, b)) = centers {
        p.extend(a.iter());
        p.extend(b.iter());
    }
    p
}

/// Divide the map part by `|det T|^{1/d}`; `None` when the determinant
/// vanished or changed sign.
fn normalize(p: &mut [f64], d: usize, sign: f64) -> Option<()> {
    let t = Matrix::from_column_slice(d, d, &p[..d * d]);
    let det = t.determinant();
    if !det.is_finite() || det * sign <= 0.0 || det.abs() < 1e-12 {
        return None;
    }
    let s = det.abs().powf(1.0 / d as f64);
    for v in &mut p[..d * d] {
        *v /= s;
    }
    Some(())
}

struct RestartResult {
    value: f64,
    params: Vec<f64>,
    evals: usize,
}

fn pattern_search(obj: &Objective, start: Vec<f64>, scales: &[f64], opts: &BmOptions, rng: &RngStream) -> Option<RestartResult> {
    let d = obj.d;
    let n = start.len();
    let mut g = rng.rng();
    let mut x = start;
    let sign = Matrix::from_column_slice(d, d, &x[..d * d]).determinant().signum();
    normalize(&mut x, d, sign)?;
    let mut fx = obj.eval(&x)?;
    let mut evals = 1;
    let mut step = 0.25;
    let mut dirs: Vec<Vector> = Vec::with_capacity(2 * n + 4);
    while evals < opts.max_evals && step > opts.min_step {
        dirs.clear();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut e = Vector::zeros(n);
                e[i] = s;
                dirs.push(e);
            }
        }
        for _ in 0..4 {
            let r = gaussian_vector(n, &mut g);
            let r = &r / r.norm();
            dirs.push(-&r);
            dirs.push(r);
        }
        dirs.shuffle(&mut g);
        let mut improved = false;
        for dir in &dirs {
            if evals >= opts.max_evals {
                break;
            }
            let mut cand: Vec<f64> = (0..n).map(|i| x[i] + step * scales[i] * dir[i]).collect();
            if normalize(&mut cand, d, sign).is_none() {
                continue;
            }
            evals += 1;
            if let Some(fc) = obj.eval(&cand) {
                if fc < fx - 1e-13 * fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            step = (step * 1.5).min(1.0);
        } else {
            step *= 0.5;
        }
    }
    Some(RestartResult {
        value: fx,
        params: x,
        evals,
    })
}

fn john_center(k: &PolyBody) -> Vector {
    if k.is_symmetric() {
        return Vector::zeros(k.dim());
    }
    k.facets()
        .and_then(|h| john_ellipsoid(h).ok())
        .map(|e| e.center)
        .unwrap_or_else(|| k.vertices().column_mean())
}

/// Map taking the John ellipsoid of `K₂` onto that of `K₁` (up to scale).
fn john_alignment(k1: &PolyBody, k2: &PolyBody) -> Option<Matrix> {
    let e1 = john_ellipsoid(k1.facets()?).ok()?;
    let e2 = john_ellipsoid(k2.facets()?).ok()?;
    let l1 = e1.factor()?;
    let l2inv = e2.factor()?.try_inverse()?;
    Some(l1 * l2inv)
}

/// Witness search over invertible `T` (and centers when either body is not
/// symmetric). The returned bound is re-evaluated with vertex LP gauges and
/// is a true upper bound for `d(K₁, K₂)`.
pub fn bm_upper_with(k1: &PolyBody, k2: &PolyBody, opts: &BmOptions, rng: &RngStream) -> Result<BMEstimate> {
    let d = k1.dim();
    if k2.dim() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: k2.dim(),
        });
    }
    if d > BM_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "bm_upper",
            dim: d,
            cap: BM_DIM_CAP,
        });
    }
    let centered = !(k1.is_symmetric() && k2.is_symmetric());
    let obj = Objective { k1, k2, d, centered };
    let (a0, b0) = (john_center(k1), john_center(k2));

    let mut starts: Vec<Vec<f64>> = Vec::new();
    let centers = |c: &Option<(Vector, Vector)>| -> Option<(Vector, Vector)> {
        centered.then(|| c.clone().unwrap_or_else(|| (a0.clone(), b0.clone())))
    };
    for (t, c) in &opts.hints {
        let c = centers(c);
        starts.push(pack(t, c.as_ref().map(|(a, b)| (a, b))));
    }
    let default_c = centers(&None);
    let dc = default_c.as_ref().map(|(a, b)| (a, b));
    starts.push(pack(&Matrix::identity(d, d), dc));
    if let Some(t) = john_alignment(k1, k2) {
        starts.push(pack(&t, dc));
    }
    let total = opts.restarts.max(starts.len()).max(1);
    let r1 = k1.outer_radius().max(1e-12);
    let r2 = k2.outer_radius().max(1e-12);
    let mut scales = vec![1.0; d * d];
    if centered {
        scales.extend(std::iter::repeat_n(0.1 * r1, d));
        scales.extend(std::iter::repeat_n(0.1 * r2, d));
    }

    let results: Vec<Option<RestartResult>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let s = rng.derive(i as u64);
            let start = if i < starts.len() {
                starts[i].clone()
            } else {
                let mut g = s.derive(0).rng();
                let q = random_orthogonal(d, &mut g);
                let diag = Matrix::from_diagonal(&Vector::from_fn(d, |_, _| (0.3 * gaussian_vector(1, &mut g)[0]).exp()));
                let t = q * diag * (r1 / r2);
                pack(&t, dc)
            };
            pattern_search(&obj, start, &scales, opts, &s.derive(1))
        })
        .collect();

    let mut best: Option<(f64, &Vec<f64>)> = None;
    let mut evals = 0;
    for r in results.iter().flatten() {
        evals += r.evals;
        if best.is_none_or(|(v, _)| r.value < v) {
            best = Some((r.value, &r.params));
        }
    }
    let (_, params) = best.ok_or_else(|| GeomError::NumericalFailure("no feasible start for bm_upper".into()))?;
    let (t, a, b) = obj.unpack(params);
    let det = t.determinant();
    if det.abs() < 1e-10 {
        return Err(GeomError::SingularWitness(det));
    }
    let (upper, witness) = evaluate_witness(k1, k2, &t, &a, &b)?;
    Ok(BMEstimate {
        upper,
        lower: 1.0,
        witness,
        center1: a,
        center2: b,
        upper_method: UpperMethod::PatternSearch,
        lower_method: LowerMethod::Trivial,
        seed: Some(rng.seed()),
        evaluations: evals,
    })
}
