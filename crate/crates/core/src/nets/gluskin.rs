//! Gluskin's random polytope: the absolute convex hull of the basis vectors,
//! symmetric ½-nets on consecutive coordinate blocks, and M independent
//! uniform random unit vectors.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bodies::VPolytope;
use crate::error::{GeomError, Result};
use crate::kernel::rng::{random_unit_vector, RngStream};
use crate::nets::sphere::sphere_net_from;
use crate::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluskinSpec {
    pub d: usize,
    pub m: usize,
    pub stream: RngStream,
}

impl GluskinSpec {
    /// Requires `2d ≤ M ≤ e^d`.
    pub fn new(d: usize, m: usize, stream: RngStream) -> Result<Self> {
        if d == 0 || m < 2 * d || (m as f64) > (d as f64).exp() {
            return Err(GeomError::ParameterRange(format!(
                "Gluskin polytope needs 2d <= M <= e^d, got d = {d}, M = {m}"
            )));
        }
        Ok(Self { d, m, stream })
    }

    /// `ℓ = ⌈log₅(M/d)⌉`, computed exactly as the least `ℓ` with `d·5^ℓ ≥ M`.
    pub fn ell(&self) -> usize {
        let mut ell = 0;
        let mut cap = self.d as u128;
        while cap < self.m as u128 {
            cap *= 5;
            ell += 1;
        }
        ell
    }

    /// Consecutive blocks of length ℓ partitioning `0..d` (last may be shorter).
    pub fn intervals(&self) -> Vec<Range<usize>> {
        let ell = self.ell().clamp(1, self.d);
        (0..self.d)
            .step_by(ell)
            .map(|s| s..(s + ell).min(self.d))
            .collect()
    }
}

/// The pieces of one sample, kept apart for inspection.
#[derive(Debug, Clone)]
pub struct GluskinPolytope {
    pub spec: GluskinSpec,
    pub body: VPolytope,
    pub random_points: Vec<Vector>,
    pub net_sizes: Vec<usize>,
}

impl GluskinPolytope {
    pub fn vertex_count(&self) -> usize {
        self.body.num_points()
    }
}

pub fn gluskin_build(spec: &GluskinSpec) -> Result<VPolytope> {
    Ok(gluskin_sample(spec)?.body)
}

pub fn gluskin_sample(spec: &GluskinSpec) -> Result<GluskinPolytope> {
    let d = spec.d;
    let mut pts: Vec<Vector> = (0..d)
        .map(|i| {
            let mut e = Vector::zeros(d);
            e[i] = 1.0;
            e
        })
        .collect();
    let net_stream = spec.stream.derive(0);
    let mut net_sizes = Vec::new();
    for (b, block) in spec.intervals().into_iter().enumerate() {
        let len = block.len();
        let basis: Vec<Vector> = (0..len)
            .map(|i| {
                let mut e = Vector::zeros(len);
                e[i] = 1.0;
                e
            })
            .collect();
        let net = sphere_net_from(len, 0.5, true, &basis, &net_stream.derive(b as u64))?;
        net_sizes.push(net.len());
        for p in &net.points {
            let mut v = Vector::zeros(d);
            v.rows_mut(block.start, len).copy_from(p);
            pts.push(v);
        }
    }
    let x_stream = spec.stream.derive(1);
    let random_points: Vec<Vector> = (0..spec.m)
        .map(|j| random_unit_vector(d, &mut x_stream.derive(j as u64).rng()))
        .collect();
    pts.extend(random_points.iter().cloned());
    let body = VPolytope::new(Matrix::from_columns(&pts), true)?;
    Ok(GluskinPolytope {
        spec: spec.clone(),
        body,
        random_points,
        net_sizes,
    })
}

/// Radius `4·sqrt(d / ln(M/d))` of the Euclidean ball the polytope contains.
pub fn ball_inclusion_radius(d: usize, m: usize) -> f64 {
    4.0 * (d as f64 / (m as f64 / d as f64).ln()).sqrt()
}
