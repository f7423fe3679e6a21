//! Monte Carlo volumes, exact planar areas and the sphere/volume frequency
//! experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::enumerate::{facets_of_points, vertices_of_halfspaces};
use crate::bodies::{Body, HPolytope, PolyBody, VPolytope, CONTAINMENT_TOL};
use crate::error::{GeomError, Result};
use crate::kernel::lp::{lp_solve, LpProblem, Sense};
use crate::kernel::rng::{random_in_ball, random_unit_vector, RngStream};
use crate::{Matrix, Vector};

pub const VOLUME_DIM_CAP: usize = 6;
/// Subset budget for the facet enumeration attempted before sampling; above
/// it membership falls back to (cached) LPs.
pub const VOLUME_FACET_BUDGET: u128 = 200_000;
const BATCH: usize = 4096;
/// Two-sided 99% normal quantile used by every hit-and-miss interval.
pub const Z_CI: f64 = 2.575_829_303_548_900;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    HitMiss,
    Exact2d,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub hits: usize,
    pub method: VolumeMethod,
}

impl VolumeEstimate {
    pub fn exact(value: f64, method: VolumeMethod) -> Self {
        Self {
            value,
            lo: value,
            hi: value,
            samples: 0,
            hits: 0,
            method,
        }
    }

    pub fn covers(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// `π^{d/2} / Γ(d/2 + 1)` through `V_d = 2π/d · V_{d−2}`.
pub fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * ball_volume(d - 2),
    }
}

/// 99% Wilson score interval for a binomial proportion.
pub fn wilson_interval(hits: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (h, n) = (hits as f64, n as f64);
    let z2 = Z_CI * Z_CI;
    let center = (h + z2 / 2.0) / (n + z2);
    let half = Z_CI / (n + z2) * (h * (n - h) / n + z2 / 4.0).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Membership oracle for an absolute or plain convex hull of points.
///
/// LP answers are cached: an outside point leaves a separating functional
/// (the LP dual, a point of the polar), an inside point leaves the simplicial
/// cone of its optimal basis. Later queries hit the caches first; every cached
/// answer agrees with what the LP would return.
struct HullMembership<'a> {
    points: &'a Matrix,
    separators: Vec<Vector>,
    cones: Vec<Matrix>,
}

const CACHE_CAP: usize = 4096;

impl<'a> HullMembership<'a> {
    fn new(points: &'a Matrix) -> Self {
        Self {
            points,
            separators: Vec::new(),
            cones: Vec::new(),
        }
    }

    fn contains(&mut self, x: &Vector) -> Result<bool> {
        let tol = CONTAINMENT_TOL;
        if self.separators.iter().any(|z| z.dot(x) > 1.0 + tol) {
            return Ok(false);
        }
        for inv in &self.cones {
            let l = inv * x;
            if l.iter().all(|v| *v >= 0.0) && l.sum() <= 1.0 {
                return Ok(true);
            }
        }
        let (d, n) = self.points.shape();
        let mut b = LpProblem::minimize(Vector::repeat(n, 1.0));
        let mut row = vec![0.0; n];
        for i in 0..d {
            for j in 0..n {
                row[j] = self.points[(i, j)];
            }
            b.push_row(&row, Sense::Eq, x[i]);
        }
        let s = lp_solve(&b.build())?;
        if !s.is_optimal() {
            return Err(GeomError::NotInterior);
        }
        let inside = s.value <= 1.0 + tol;
        if inside {
            let support: Vec<usize> = (0..n).filter(|&j| s.x[j] > 1e-12).collect();
            if support.len() == d && self.cones.len() < CACHE_CAP {
                let cols: Vec<Vector> = support.iter().map(|&j| self.points.column(j).into_owned()).collect();
                if let Some(inv) = Matrix::from_columns(&cols).try_inverse() {
                    self.cones.push(inv);
                }
            }
        } else if self.separators.len() < CACHE_CAP {
            let z = s.duals.clone();
            let h = (self.points.transpose() * &z).max();
            if h <= 1.0 + 1e-12 && z.dot(x) > 1.0 + tol {
                self.separators.push(z);
            }
        }
        Ok(inside)
    }
}

/// Sampling region that contains the body.
enum Region {
    Ball(f64),
    /// `A·[−1, 1]ᵈ`.
    Box(Matrix),
}

impl Region {
    fn volume(&self, d: usize) -> f64 {
        match self {
            Region::Ball(r) => ball_volume(d) * r.powi(d as i32),
            Region::Box(a) => 2f64.powi(d as i32) * a.determinant().abs(),
        }
    }

    fn sample<R: rand::Rng + ?Sized>(&self, d: usize, g: &mut R) -> Vector {
        match self {
            Region::Ball(r) => random_in_ball(d, *r, g),
            Region::Box(a) => a * Vector::from_fn(d, |_, _| g.random_range(-1.0..=1.0)),
        }
    }
}

enum Oracle<'a> {
    Facets(HPolytope),
    Hull(&'a Matrix),
}

/// Hit-and-miss in a ball of the given radius around the origin.
fn hit_miss(dim: usize, radius: f64, oracle: &Oracle<'_>, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    hit_miss_in(dim, &Region::Ball(radius), oracle, samples, rng)
}

/// Hit-and-miss in `region`; batches of 4096 samples use derived streams, so
/// the count is thread-count independent.
fn hit_miss_in(dim: usize, region: &Region, oracle: &Oracle<'_>, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(GeomError::ParameterRange("volume needs at least one sample".into()));
    }
    let batches = samples.div_ceil(BATCH);
    let counts: Result<Vec<usize>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut g = rng.derive(b as u64).rng();
            let count = BATCH.min(samples - b * BATCH);
            let mut hits = 0;
            match oracle {
                Oracle::Facets(h) => {
                    for _ in 0..count {
                        let x = region.sample(dim, &mut g);
                        if h.contains(&x, 0.0) {
                            hits += 1;
                        }
                    }
                }
                Oracle::Hull(p) => {
                    let mut m = HullMembership::new(p);
                    for _ in 0..count {
                        let x = region.sample(dim, &mut g);
                        if m.contains(&x)? {
                            hits += 1;
                        }
                    }
                }
            }
            Ok(hits)
        })
        .collect();
    let hits: usize = counts?.iter().sum();
    let vb = region.volume(dim);
    let (lo, hi) = wilson_interval(hits, samples);
    Ok(VolumeEstimate {
        value: vb * hits as f64 / samples as f64,
        lo: vb * lo,
        hi: vb * hi,
        samples,
        hits,
        method: VolumeMethod::HitMiss,
    })
}

fn check_dim(d: usize) -> Result<()> {
    if d > VOLUME_DIM_CAP {
        return Err(GeomError::DimensionCap {
            what: "volume_mc",
            dim: d,
            cap: VOLUME_DIM_CAP,
        });
    }
    Ok(())
}

/// Hit-and-miss volume of either representation.
pub fn volume_mc(k: &Body, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    check_dim(k.dim())?;
    match k {
        Body::H(h) => {
            let verts = vertices_of_halfspaces(h.normals(), h.offsets(), crate::bodies::enumerate::SUBSET_BUDGET)?;
            let radius = verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if radius == 0.0 {
                return Err(GeomError::EmptyInterior);
            }
            hit_miss(h.dim(), radius * (1.0 + 1e-12), &Oracle::Facets(h.clone()), samples, rng)
        }
        Body::V(v) => volume_mc_v(v, samples, rng),
    }
}

fn volume_mc_v(v: &VPolytope, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    let d = v.dim();
    let radius = v.max_norm() * (1.0 + 1e-12);
    let center = if v.is_symmetric() {
        Vector::zeros(d)
    } else {
        v.points().column_mean()
    };
    let facets = if v.has_interior_origin()? || !v.is_symmetric() {
        match facets_of_points(v.points(), &center, v.is_symmetric(), VOLUME_FACET_BUDGET) {
            Ok((n, b)) => Some(HPolytope::new(n, b)?),
            Err(GeomError::NetTooLarge { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    match facets {
        Some(h) => hit_miss(d, radius, &Oracle::Facets(h), samples, rng),
        None => {
            // The cached hull oracle needs the origin inside; shift if not.
            if v.has_interior_origin()? {
                hit_miss(d, radius, &Oracle::Hull(v.points()), samples, rng)
            } else {
                let t = v.translate(&-&center);
                let r = t.max_norm() * (1.0 + 1e-12);
                hit_miss(d, r, &Oracle::Hull(t.points()), samples, rng)
            }
        }
    }
}

pub fn volume_mc_poly(k: &PolyBody, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    check_dim(k.dim())?;
    match k.facets() {
        Some(h) => hit_miss(k.dim(), k.outer_radius() * (1.0 + 1e-12), &Oracle::Facets(h.clone()), samples, rng),
        None => volume_mc_v(k.vpolytope(), samples, rng),
    }
}

/// Volume of the polar `K° = {y : ⟨v, y⟩ ≤ 1}` of a V-polytope with the
/// origin inside.
///
/// Sampling happens in the ball through the vertices of `K°` (the facets of
/// `K`) when they can be enumerated. Otherwise, for symmetric `K`, `d`
/// independent vertices `V` give `K ⊇ absconv(V)`, hence
/// `K° ⊆ V^{−T}[−1, 1]ᵈ`, and that parallelotope is sampled instead.
pub fn polar_volume_mc(k: &VPolytope, samples: usize, rng: &RngStream) -> Result<VolumeEstimate> {
    let d = k.dim();
    check_dim(d)?;
    let polar = k.polar()?;
    let center = if k.is_symmetric() {
        Vector::zeros(d)
    } else {
        k.points().column_mean()
    };
    let region = match facets_of_points(k.points(), &center, k.is_symmetric(), VOLUME_FACET_BUDGET) {
        Ok((n, b)) => {
            // Facets ⟨n, x⟩ ≤ b of K are the vertices n/b of K°.
            let r = (0..n.nrows()).map(|i| n.row(i).norm() / b[i]).fold(0.0, f64::max);
            Region::Ball(r * (1.0 + 1e-9))
        }
        Err(GeomError::NetTooLarge { .. }) if k.is_symmetric() => {
            let v = independent_columns(k.points())?;
            let inv = v.try_inverse().ok_or(GeomError::RankDeficient { rank: 0, expected: d })?;
            Region::Box(inv.transpose() * (1.0 + 1e-9))
        }
        Err(e) => return Err(e),
    };
    hit_miss_in(d, &region, &Oracle::Facets(polar), samples, rng)
}

/// `d` well-conditioned columns chosen greedily by largest residual norm.
fn independent_columns(p: &Matrix) -> Result<Matrix> {
    let d = p.nrows();
    let mut chosen: Vec<Vector> = Vec::with_capacity(d);
    let mut basis: Vec<Vector> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut best = (0.0, None);
        for j in 0..p.ncols() {
            let mut r = p.column(j).into_owned();
            for q in &basis {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
            let n = r.norm();
            if n > best.0 {
                best = (n, Some((j, r)));
            }
        }
        match best {
            (n, Some((j, r))) if n > 1e-9 => {
                chosen.push(p.column(j).into_owned());
                basis.push(r / n);
            }
            _ => {
                return Err(GeomError::RankDeficient {
                    rank: chosen.len(),
                    expected: d,
                })
            }
        }
    }
    Ok(Matrix::from_columns(&chosen))
}

/// Area of a planar polytope: monotone-chain hull, then the shoelace formula.
pub fn volume_exact_2d(k: &VPolytope) -> Result<f64> {
    if k.dim() != 2 {
        return Err(GeomError::DimensionMismatch {
            expected: 2,
            got: k.dim(),
        });
    }
    let mut pts: Vec<(f64, f64)> = (0..k.num_points())
        .map(|j| (k.points()[(0, j)], k.points()[(1, j)]))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeomError::EmptyInterior);
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    let area = (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<f64>()
        / 2.0;
    if area <= 1e-14 {
        return Err(GeomError::EmptyInterior);
    }
    Ok(area)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SphereCheck {
    pub freq: f64,
    pub bound: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Fraction of uniform sphere points in `k` against `vol(k)/vol(B₂ᵈ)` (upper
/// CI end); fails when `freq > bound + 3·stderr`.
pub fn sphere_measure_check(k: &Body, samples: usize, rng: &RngStream) -> Result<SphereCheck> {
    let d = k.dim();
    if d > 5 {
        return Err(GeomError::DimensionCap {
            what: "sphere_measure_check",
            dim: d,
            cap: 5,
        });
    }
    let vol = volume_mc(k, samples, &rng.derive(0))?;
    let mut g = rng.derive(1).rng();
    let mut inside = 0usize;
    for _ in 0..samples {
        let x = random_unit_vector(d, &mut g);
        if k.contains(&x)? {
            inside += 1;
        }
    }
    let freq = inside as f64 / samples as f64;
    let stderr = (freq * (1.0 - freq) / samples as f64).sqrt();
    let bound = vol.hi / ball_volume(d);
    let out = SphereCheck {
        freq,
        bound,
        stderr,
        samples,
    };
    if freq > bound + 3.0 * stderr {
        return Err(GeomError::VerificationFailed(format!(
            "sphere frequency {freq} exceeds volume bound {bound}"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpRow {
    pub d: usize,
    pub m: usize,
    pub seed: u64,
    pub volume: VolumeEstimate,
    /// `vol^{1/d} · d / √ln(M/d)` at the point estimate.
    pub c_hat: f64,
    /// Same at the upper CI end.
    pub c_hat_hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpFit {
    pub rows: Vec<CpRow>,
    pub max: f64,
    pub min: f64,
    /// `max / min`.
    pub spread: f64,
}

/// Absolute convex hull of `m` uniform unit vectors.
pub fn random_absconv(d: usize, m: usize, rng: &RngStream) -> Result<VPolytope> {
    let mut g = rng.rng();
    let pts: Vec<Vector> = (0..m).map(|_| random_unit_vector(d, &mut g)).collect();
    VPolytope::from_vectors(&pts, true)
}

/// Fits `Ĉ = vol(absconv{X₁..X_M})^{1/d} · d / √ln(M/d)` for uniform unit
/// vectors `Xᵢ` over a `(d, M)` grid and `seeds` seeds per cell.
pub fn cp_constant_fit(grid: &[(usize, usize)], seeds: u64, samples: usize, rng: &RngStream) -> Result<CpFit> {
    let mut rows = Vec::new();
    for &(d, m) in grid {
        if d > 5 || m > 200 || m < 2 * d {
            return Err(GeomError::ParameterRange(format!("cell (d={d}, M={m}) outside d ≤ 5, 2d ≤ M ≤ 200")));
        }
        for seed in 0..seeds {
            let s = rng.derive(d as u64).derive(m as u64).derive(seed);
            let v = random_absconv(d, m, &s.derive(0))?;
            let vol = volume_mc(&Body::V(v), samples, &s.derive(1))?;
            let norm = d as f64 / ((m as f64 / d as f64).ln()).sqrt();
            rows.push(CpRow {
                d,
                m,
                seed,
                volume: vol,
                c_hat: vol.value.powf(1.0 / d as f64) * norm,
                c_hat_hi: vol.hi.powf(1.0 / d as f64) * norm,
            });
        }
    }
    let max = rows.iter().map(|r| r.c_hat).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.c_hat).fold(f64::INFINITY, f64::min);
    Ok(CpFit {
        rows,
        max,
        min,
        spread: max / min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::canned::{cross_polytope_v, cube_v};

    #[test]
    fn ball_volumes() {
        assert_eq!(ball_volume(1), 2.0);
        assert!((ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        // π^{d/2}/Γ(d/2+1) at d = 5: 8π²/15.
        assert!((ball_volume(5) - 8.0 * std::f64::consts::PI.powi(2) / 15.0).abs() < 1e-13);
    }

    #[test]
    fn wilson_contains_proportion() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo - 0.3753).abs() < 1e-3 && (hi - 0.6247).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 10).0, 0.0);
    }

    #[test]
    fn exact_areas() {
        assert!((volume_exact_2d(&cube_v(2)).unwrap() - 4.0).abs() < 1e-12);
        assert!((volume_exact_2d(&cross_polytope_v(2)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polar_of_cube_by_both_regions() {
        // (B_∞³)° = B₁³ with volume 8/6.
        let est = polar_volume_mc(&cube_v(3), 100_000, &RngStream::new(9)).unwrap();
        assert!(est.covers(8.0 / 6.0), "{est:?}");
        let v = cube_v(3);
        let inv = independent_columns(v.points()).unwrap().try_inverse().unwrap();
        let est = hit_miss_in(3, &Region::Box(inv.transpose()), &Oracle::Facets(v.polar().unwrap()), 100_000, &RngStream::new(10)).unwrap();
        assert!(est.covers(8.0 / 6.0), "{est:?}");
    }

    #[test]
    fn hull_cache_agrees_with_plain_lp() {
        let v = random_absconv(3, 12, &RngStream::new(5)).unwrap();
        let mut m = HullMembership::new(v.points());
        let mut g = RngStream::new(6).rng();
        for _ in 0..2000 {
            let x = random_in_ball(3, 1.0, &mut g);
            let a = m.contains(&x).unwrap();
            let b = v.gauge(&x).unwrap() <= 1.0 + CONTAINMENT_TOL;
            assert_eq!(a, b);
        }
        assert!(!m.separators.is_empty() && !m.cones.is_empty());
    }
}
