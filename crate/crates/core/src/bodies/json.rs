//! JSON exchange format `{"dim", "rep": "V"|"H", "symmetric", "data", "offsets"}`.

use serde::{Deserialize, Serialize};

use crate::bodies::hpoly::HPolytope;
use crate::bodies::vpoly::{Body, VPolytope};
use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rep {
    V,
    H,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub rep: Rep,
    #[serde(default)]
    pub symmetric: bool,
    pub data: Vec<Vec<f64>>,
    #[serde(default)]
    pub offsets: Vec<f64>,
}

impl PolytopeJson {
    pub fn from_vpolytope(v: &VPolytope) -> Self {
        let data = (0..v.num_points())
            .map(|j| v.points().column(j).iter().copied().collect())
            .collect();
        Self {
            dim: v.dim(),
            rep: Rep::V,
            symmetric: v.is_symmetric(),
            data,
            offsets: Vec::new(),
        }
    }

    pub fn from_hpolytope(h: &HPolytope) -> Self {
        let data = (0..h.num_facets())
            .map(|i| h.normals().row(i).iter().copied().collect())
            .collect();
        Self {
            dim: h.dim(),
            rep: Rep::H,
            symmetric: false,
            data,
            offsets: h.offsets().iter().copied().collect(),
        }
    }

    pub fn from_body(b: &Body) -> Self {
        match b {
            Body::V(v) => Self::from_vpolytope(v),
            Body::H(h) => Self::from_hpolytope(h),
        }
    }

    pub fn to_body(&self) -> Result<Body> {
        if self.data.iter().any(|r| r.len() != self.dim) {
            return Err(GeomError::InvalidData(format!(
                "every row must have length {}",
                self.dim
            )));
        }
        let flat: Vec<f64> = self.data.iter().flatten().copied().collect();
        match self.rep {
            Rep::V => {
                let pts = Matrix::from_column_slice(self.dim, self.data.len(), &flat);
                Ok(Body::V(VPolytope::new(pts, self.symmetric)?))
            }
            Rep::H => {
                if self.offsets.len() != self.data.len() {
                    return Err(GeomError::InvalidData(
                        "H-representation needs one offset per facet".into(),
                    ));
                }
                let n = Matrix::from_row_slice(self.data.len(), self.dim, &flat);
                Ok(Body::H(HPolytope::new(n, Vector::from_vec(self.offsets.clone()))?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope JSON serializes")
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeomError::InvalidData(e.to_string()))
    }
}
