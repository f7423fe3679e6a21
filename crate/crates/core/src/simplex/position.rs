use serde::{Deserialize, Serialize};

use crate::bodies::enumerate::{vertices_of_halfspaces, SUBSET_BUDGET};
use crate::bodies::{center_position, inclusion_ratio, AffineSubspace, HPolytope};
use crate::error::{GeomError, Result};
use crate::kernel::linalg::orthonormalize;
use crate::simplex::{check_in_hyperplane, section_facets, SimplexSpec};
use crate::{Matrix, Vector};

/// Normal form `K = {x ∈ L : −1 ≤ xᵢ ≤ m}` of an m-dimensional section.
///
/// With `a` the John center of the section, `D = diag(1/aᵢ)` on the
/// coordinates not vanishing on the section, and `b = Σ eᵢ` over the same
/// coordinates, `K = D(Δ ∩ F) − b` and `L = D(F − a)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositionedSection {
    pub simplex_n: usize,
    pub m: usize,
    pub section: AffineSubspace,
    /// Linear subspace of `ℝ^{N+1}`; the body lives in its basis coordinates.
    pub l: AffineSubspace,
    /// Ambient John center `a` of the section.
    pub center: Vector,
    /// Diagonal of `D` (zero on dropped coordinates).
    pub scaling: Vector,
    /// Coordinates identically zero on the section (dropped from `D` and `b`).
    pub dropped: Vec<usize>,
    #[serde(skip)]
    body_cache: Option<HPolytope>,
    /// Smallest `s` with `−K ⊆ sK`; at most `m` by construction.
    pub symmetry_ratio: f64,
    /// `max_{x∈K} |x|`, from the vertices of `K`.
    pub outer_radius: f64,
    /// Largest `r` with `r·B₂ᴸ ⊆ K`.
    pub inner_radius: f64,
}

impl PositionedSection {
    /// `K` in L-coordinates with both facet families `−1 ≤ xᵢ` and `xᵢ ≤ m`.
    pub fn body(&self) -> HPolytope {
        match &self.body_cache {
            Some(h) => h.clone(),
            None => km_body_kept(self.l.basis(), self.m, &self.kept()),
        }
    }

    /// `K` with only the lower facets `xᵢ ≥ −1` (the image of the section
    /// itself; the upper facets are implied).
    pub fn lower_body(&self) -> HPolytope {
        lower_facets(self.l.basis(), &self.kept())
    }

    pub fn kept(&self) -> Vec<usize> {
        (0..self.simplex_n + 1).filter(|i| !self.dropped.contains(i)).collect()
    }

    /// `m^{3/2}`, the outer radius the normal form is compared against.
    pub fn sandwich_bound(&self) -> f64 {
        (self.m as f64).powf(1.5)
    }

    pub fn outer_ok(&self, slack: f64) -> bool {
        self.outer_radius <= self.sandwich_bound() + slack
    }

    pub fn inner_ok(&self, slack: f64) -> bool {
        self.inner_radius >= 1.0 - slack
    }

    /// Map an ambient point of `Δ ∩ F` to L-coordinates.
    pub fn to_l_coords(&self, x: &Vector) -> Vector {
        let u = Vector::from_fn(x.len(), |i, _| self.scaling[i] * (x[i] - self.center[i]));
        self.l.basis().transpose() * u
    }
}

fn lower_facets(q: &Matrix, kept: &[usize]) -> HPolytope {
    let rows: Vec<_> = kept.iter().map(|&i| -q.row(i).into_owned()).collect();
    HPolytope::new(Matrix::from_rows(&rows), Vector::repeat(kept.len(), 1.0)).expect("valid facets")
}

fn km_body_kept(q: &Matrix, m: usize, kept: &[usize]) -> HPolytope {
    let mut rows = Vec::with_capacity(2 * kept.len());
    let mut offs = Vec::with_capacity(2 * kept.len());
    for &i in kept {
        rows.push(q.row(i).into_owned());
        offs.push(m as f64);
        rows.push(-q.row(i).into_owned());
        offs.push(1.0);
    }
    HPolytope::new(Matrix::from_rows(&rows), Vector::from_vec(offs)).expect("valid facets")
}

/// `K_m ∩ L` in the coordinates of `L`'s basis: `2(N+1)` facets
/// `⟨qᵢ, x⟩ ≤ m` and `−⟨qᵢ, x⟩ ≤ 1` where `qᵢ` is row `i` of the basis.
pub fn km_body(n: usize, m: usize, l: &AffineSubspace) -> Result<HPolytope> {
    if l.ambient_dim() != n + 1 || !l.is_linear() {
        return Err(GeomError::ParameterRange("L must be a linear subspace of R^{N+1}".into()));
    }
    if l.dim() != m {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: l.dim(),
        });
    }
    let kept: Vec<usize> = (0..n + 1).collect();
    Ok(km_body_kept(l.basis(), m, &kept))
}

const CENTER_TOL: f64 = 1e-8;

pub fn position_section(spec: &SimplexSpec, f: &AffineSubspace) -> Result<PositionedSection> {
    check_in_hyperplane(spec, f)?;
    let m = f.dim();
    let (section, zero) = section_facets(spec, f)?;
    let c = center_position(&section)?;
    let a = f.to_ambient(&c);
    let dim = spec.ambient_dim();
    let mut scaling = Vector::zeros(dim);
    for i in 0..dim {
        if zero.contains(&i) {
            continue;
        }
        if a[i] <= CENTER_TOL {
            return Err(GeomError::DegenerateCenter { index: i, value: a[i] });
        }
        scaling[i] = 1.0 / a[i];
    }
    let db = Matrix::from_fn(dim, m, |i, j| scaling[i] * f.basis()[(i, j)]);
    let q = orthonormalize(&db)?;
    let l = AffineSubspace::linear(q.clone())?;
    let kept: Vec<usize> = (0..dim).filter(|i| !zero.contains(i)).collect();

    let lower = lower_facets(&q, &kept);
    let symmetry_ratio = inclusion_ratio(&lower, &Vector::zeros(m))?;
    if symmetry_ratio > m as f64 + 1e-8 {
        return Err(GeomError::SandwichViolation(format!(
            "-K is not inside {m}K (ratio {symmetry_ratio})"
        )));
    }
    let body = km_body_kept(&q, m, &kept);
    let inner_radius = (0..body.num_facets())
        .map(|i| body.offsets()[i] / body.normals().row(i).norm())
        .fold(f64::INFINITY, f64::min);
    if inner_radius < 1.0 - 1e-8 {
        return Err(GeomError::SandwichViolation(format!(
            "unit ball not inside K (inner radius {inner_radius})"
        )));
    }
    let verts = vertices_of_halfspaces(lower.normals(), lower.offsets(), SUBSET_BUDGET)?;
    let outer_radius = verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(PositionedSection {
        simplex_n: spec.n,
        m,
        section: f.clone(),
        l,
        center: a,
        scaling,
        dropped: zero,
        body_cache: Some(body),
        symmetry_ratio,
        outer_radius,
        inner_radius,
    })
}
