use crate::bodies::enumerate::{facets_of_points, SUBSET_BUDGET};
use crate::bodies::hpoly::HPolytope;
use crate::bodies::vpoly::{Body, VPolytope};
use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

/// A polytope carrying both representations when they are affordable.
///
/// Vertices are always present (they drive the norm `‖T : K₁ → K₂‖` as a
/// maximum over vertices). Facets are enumerated when the subset budget
/// allows; gauges then cost one matrix-vector product instead of one LP.
#[derive(Debug, Clone)]
pub struct PolyBody {
    vrep: VPolytope,
    facets: Option<HPolytope>,
    symmetric: bool,
}

impl PolyBody {
    pub fn from_vpolytope(v: &VPolytope) -> Result<Self> {
        Self::from_vpolytope_with_budget(v, SUBSET_BUDGET)
    }

    pub fn from_vpolytope_with_budget(v: &VPolytope, budget: u128) -> Result<Self> {
        let d = v.dim();
        let center = if v.is_symmetric() {
            Vector::zeros(d)
        } else {
            v.points().column_mean()
        };
        let facets = match facets_of_points(v.points(), &center, v.is_symmetric(), budget) {
            Ok((n, b)) => Some(HPolytope::new(n, b)?),
            Err(GeomError::NetTooLarge { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            vrep: v.clone(),
            facets,
            symmetric: v.is_symmetric(),
        })
    }

    /// Vertices are enumerated from the facets; `symmetric` is a promise
    /// about the body that callers make (it enables center-free handling).
    pub fn from_hpolytope(h: &HPolytope, symmetric: bool) -> Result<Self> {
        let verts = h.vertices()?;
        let vrep = VPolytope::new(verts.points().clone(), false)?;
        Ok(Self {
            vrep,
            facets: Some(h.clone()),
            symmetric,
        })
    }

    pub fn from_body(b: &Body) -> Result<Self> {
        match b {
            Body::V(v) => Self::from_vpolytope(v),
            Body::H(h) => Self::from_hpolytope(h, false),
        }
    }

    pub fn dim(&self) -> usize {
        self.vrep.dim()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn vertices(&self) -> &Matrix {
        self.vrep.points()
    }

    pub fn vpolytope(&self) -> &VPolytope {
        &self.vrep
    }

    pub fn facets(&self) -> Option<&HPolytope> {
        self.facets.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vrep.num_points()
    }

    /// Gauge of `K − c` at `y`. `c` must be interior.
    pub fn gauge_centered(&self, c: &Vector, y: &Vector) -> Result<f64> {
        match &self.facets {
            Some(h) => {
                let ny = h.normals() * y;
                let nc = h.normals() * c;
                let mut g: f64 = 0.0;
                for i in 0..ny.len() {
                    let s = h.offsets()[i] - nc[i];
                    if s <= 0.0 {
                        return Err(GeomError::NotInterior);
                    }
                    g = g.max(ny[i] / s);
                }
                Ok(g)
            }
            None => self.vrep.gauge_centered(c, y),
        }
    }

    pub fn gauge(&self, y: &Vector) -> Result<f64> {
        self.gauge_centered(&Vector::zeros(self.dim()), y)
    }

    /// Gauge through the vertex LP regardless of available facets; used as
    /// an independent check of facet-based results.
    pub fn gauge_lp(&self, c: &Vector, y: &Vector) -> Result<f64> {
        self.vrep.gauge_centered(c, y)
    }

    /// Interior test for a candidate center (facets needed, else LP gauge of
    /// small moves is used).
    pub fn is_interior(&self, c: &Vector) -> bool {
        match &self.facets {
            Some(h) => h.slacks(c).iter().all(|s| *s > 1e-12),
            None => {
                let d = self.dim();
                (0..d).all(|i| {
                    let mut e = Vector::zeros(d);
                    e[i] = 1e-9;
                    self.vrep.gauge_centered(c, &e).is_ok() && self.vrep.gauge_centered(c, &-e).is_ok()
                })
            }
        }
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        match &self.facets {
            Some(h) => Ok(h.contains(x, crate::bodies::vpoly::CONTAINMENT_TOL)),
            None => self.vrep.contains(x),
        }
    }

    /// Radius of the smallest origin-centered ball containing the body.
    pub fn outer_radius(&self) -> f64 {
        self.vrep.max_norm()
    }

    /// Largest `r` with `r·B₂ ⊆ K` (origin-centered); needs facets.
    pub fn inner_radius(&self) -> Option<f64> {
        self.facets.as_ref().map(|h| {
            (0..h.num_facets())
                .map(|i| h.offsets()[i] / h.normals().row(i).norm())
                .fold(f64::INFINITY, f64::min)
        })
    }

    /// Image under an invertible linear map.
    pub fn linear_image(&self, a: &Matrix) -> Result<Self> {
        let vrep = self.vrep.linear_image(a)?;
        let facets = match &self.facets {
            Some(h) => Some(h.linear_image(a)?),
            None => None,
        };
        Ok(Self {
            vrep,
            facets,
            symmetric: self.symmetric,
        })
    }
}
