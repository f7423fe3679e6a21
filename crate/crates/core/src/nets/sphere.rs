use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::kernel::rng::{fill_unit_vector, random_unit_vector, RngStream};
use crate::Vector;

/// Failed samples in a row (per dimension) that end the greedy construction.
pub const FAILURES_PER_DIM: usize = 10_000;

/// A finite subset of `S^{dim−1}` meant to be an `radius`-net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereNet {
    pub dim: usize,
    pub radius: f64,
    pub points: Vec<Vector>,
    pub symmetric: bool,
}

impl SphereNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean distance from `x` to the nearest net point.
    pub fn distance(&self, x: &Vector) -> f64 {
        self.points
            .iter()
            .map(|p| p.metric_distance(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Greedy separated set: sampled directions farther than `eps` from every
/// chosen point are added (with their antipodes when `symmetric`) until
/// `10⁴·dim` consecutive samples fail. A maximal `eps`-separated set is an
/// `eps`-net; [`certify_net`] checks the covering radius afterwards.
pub fn sphere_net(dim: usize, eps: f64, symmetric: bool, rng: &RngStream) -> Result<SphereNet> {
    sphere_net_from(dim, eps, symmetric, &[], rng)
}

/// Same as [`sphere_net`], starting from the given (already separated) points.
pub fn sphere_net_from(
    dim: usize,
    eps: f64,
    symmetric: bool,
    initial: &[Vector],
    rng: &RngStream,
) -> Result<SphereNet> {
    if dim == 0 {
        return Err(GeomError::ParameterRange("sphere dimension must be positive".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GeomError::ParameterRange(format!("net radius {eps} not in (0, 1)")));
    }
    // Chosen points, flattened with stride `dim` for the hot rejection loop.
    let mut flat: Vec<f64> = Vec::new();
    let eps2 = eps * eps;
    let far = |q: &[f64], p: &[f64]| q.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() > eps2;
    let push = |flat: &mut Vec<f64>, p: &[f64]| {
        if symmetric {
            flat.extend(p.iter().map(|v| -v));
        }
        flat.extend_from_slice(p);
    };
    for p in initial {
        let p = p.normalize();
        if flat.chunks_exact(dim).all(|q| far(q, p.as_slice())) {
            push(&mut flat, p.as_slice());
        }
    }
    let mut g = rng.rng();
    let limit = FAILURES_PER_DIM * dim;
    let mut failures = 0;
    let mut x = Vector::zeros(dim);
    // Index of the point that rejected the previous sample; usually rejects
    // the next one too.
    let mut hint = 0;
    // On S⁰ = {±1} a net holding both points rejects every further sample.
    let saturated = |flat: &[f64]| dim == 1 && flat.contains(&1.0) && flat.contains(&-1.0);
    while failures < limit && !saturated(&flat) {
        fill_unit_vector(&mut x, &mut g);
        let xs = x.as_slice();
        if flat.len() > hint * dim && !far(&flat[hint * dim..(hint + 1) * dim], xs) {
            failures += 1;
            continue;
        }
        match flat.chunks_exact(dim).position(|q| !far(q, xs)) {
            Some(i) => {
                hint = i;
                failures += 1;
            }
            None => {
                push(&mut flat, xs);
                failures = 0;
            }
        }
    }
    let points: Vec<Vector> = flat.chunks_exact(dim).map(Vector::from_column_slice).collect();
    Ok(SphereNet {
        dim,
        radius: eps,
        points,
        symmetric,
    })
}

const CERTIFY_BATCH: usize = 10_000;

/// Empirical covering radius: largest distance from `samples` uniform unit
/// vectors to the net. Batches use derived streams, so the result does not
/// depend on the thread count.
pub fn certify_net(net: &SphereNet, samples: usize, rng: &RngStream) -> f64 {
    let batches = samples.div_ceil(CERTIFY_BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut g = rng.derive(b as u64).rng();
            let count = CERTIFY_BATCH.min(samples - b * CERTIFY_BATCH);
            (0..count)
                .map(|_| net.distance(&random_unit_vector(net.dim, &mut g)))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sphere_is_two_points() {
        let net = sphere_net(1, 0.5, false, &RngStream::new(1)).unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(certify_net(&net, 1000, &RngStream::new(2)), 0.0);
    }

    #[test]
    fn single_point_net_has_radius_two() {
        let net = SphereNet {
            dim: 3,
            radius: 0.5,
            points: vec![Vector::from_vec(vec![1.0, 0.0, 0.0])],
            symmetric: false,
        };
        let r = certify_net(&net, 100_000, &RngStream::new(3));
        assert!(r > 1.98 && r <= 2.0, "{r}");
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(sphere_net(2, 1.5, false, &RngStream::new(0)).is_err());
    }
}
