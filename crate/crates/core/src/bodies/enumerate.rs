//! Facet and vertex enumeration by exhaustive d-subset search.
//!
//! Both directions solve a `d × d` system per subset and keep the solutions
//! that are feasible for the whole input. This is exponential in general and
//! only meant for the small dimensions used here; every entry point checks the
//! number of subsets against a budget first.

use crate::error::{GeomError, Result};
use crate::{Matrix, Vector};

/// Default cap on the number of d-subsets examined.
pub const SUBSET_BUDGET: u128 = 5_000_000;

const FEAS_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-7;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Advance `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// In-place Gaussian elimination with partial pivoting on a row-major `d × d`
/// system. Returns `false` if the matrix is numerically singular.
fn solve_small(a: &mut [f64], b: &mut [f64], d: usize) -> bool {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tiny = 1e-11 * scale.max(1e-300);
    for col in 0..d {
        let mut piv = col;
        for r in col + 1..d {
            if a[r * d + col].abs() > a[piv * d + col].abs() {
                piv = r;
            }
        }
        if a[piv * d + col].abs() <= tiny {
            return false;
        }
        if piv != col {
            for c in 0..d {
                a.swap(piv * d + c, col * d + c);
            }
            b.swap(piv, col);
        }
        let p = a[col * d + col];
        for r in col + 1..d {
            let f = a[r * d + col] / p;
            if f != 0.0 {
                for c in col..d {
                    a[r * d + c] -= f * a[col * d + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..d).rev() {
        let mut s = b[col];
        for c in col + 1..d {
            s -= a[col * d + c] * b[c];
        }
        b[col] = s / a[col * d + col];
    }
    true
}

/// Remove near-duplicate vectors (max-norm distance ≤ tol·(1+|v|∞)).
pub fn dedup_vectors(mut vs: Vec<Vector>) -> Vec<Vector> {
    vs.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut out: Vec<Vector> = Vec::with_capacity(vs.len());
    let mut window_start = 0;
    for v in vs {
        let tol = DEDUP_TOL * (1.0 + v.amax());
        while window_start < out.len() && out[window_start][0] < v[0] - tol {
            window_start += 1;
        }
        let dup = out[window_start..]
            .iter()
            .any(|u| (u - &v).amax() <= tol);
        if !dup {
            out.push(v);
        }
    }
    out
}

/// Facets of `conv(points)` (columns of a `d × n` matrix) around an interior
/// point `center`, returned as `(normals m×d, offsets)` for `⟨nᵢ,x⟩ ≤ bᵢ`.
///
/// With `symmetric` the point set is taken as closed under negation and
/// `center` must be the origin; subsets are then drawn from one representative
/// per antipodal pair.
pub fn facets_of_points(
    points: &Matrix,
    center: &Vector,
    symmetric: bool,
    budget: u128,
) -> Result<(Matrix, Vector)> {
    let d = points.nrows();
    let q: Vec<Vector> = if symmetric {
        pair_representatives(points)
    } else {
        (0..points.ncols())
            .map(|j| points.column(j) - center)
            .collect()
    };
    let n = q.len();
    if n < d {
        return Err(GeomError::EmptyInterior);
    }
    let mut count = binomial(n, d);
    if symmetric {
        count = count.saturating_mul(1u128 << (d - 1));
    }
    if count > budget {
        return Err(GeomError::NetTooLarge {
            size: count,
            budget,
        });
    }

    let mut normals: Vec<Vector> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    let mut a = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let sign_patterns: u64 = if symmetric { 1 << (d - 1) } else { 1 };
    loop {
        for pattern in 0..sign_patterns {
            for (r, &j) in idx.iter().enumerate() {
                let s = if r > 0 && (pattern >> (r - 1)) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                };
                for c in 0..d {
                    a[r * d + c] = s * q[j][c];
                }
                rhs[r] = 1.0;
            }
            if !solve_small(&mut a, &mut rhs, d) {
                continue;
            }
            let nv = Vector::from_column_slice(&rhs);
            let feasible = q.iter().all(|p| {
                let t = p.dot(&nv);
                t <= 1.0 + FEAS_TOL && (!symmetric || t >= -1.0 - FEAS_TOL)
            });
            if feasible {
                if symmetric {
                    normals.push(-&nv);
                }
                normals.push(nv);
            }
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    let normals = dedup_vectors(normals);
    if normals.is_empty() {
        return Err(GeomError::EmptyInterior);
    }
    let m = normals.len();
    let mut nm = Matrix::zeros(m, d);
    let mut off = Vector::zeros(m);
    for (i, nv) in normals.iter().enumerate() {
        nm.set_row(i, &nv.transpose());
        off[i] = 1.0 + nv.dot(center);
    }
    Ok((nm, off))
}

/// One representative per ± pair (the first encountered), dropping zeros.
fn pair_representatives(points: &Matrix) -> Vec<Vector> {
    let mut reps: Vec<Vector> = Vec::new();
    for j in 0..points.ncols() {
        let p = points.column(j).into_owned();
        if p.amax() == 0.0 {
            continue;
        }
        let tol = DEDUP_TOL * (1.0 + p.amax());
        let seen = reps
            .iter()
            .any(|r| (r - &p).amax() <= tol || (r + &p).amax() <= tol);
        if !seen {
            reps.push(p);
        }
    }
    reps
}

/// Vertices of the bounded polyhedron `{x : normals·x ≤ offsets}`.
pub fn vertices_of_halfspaces(normals: &Matrix, offsets: &Vector, budget: u128) -> Result<Vec<Vector>> {
    let (m, d) = normals.shape();
    if m < d {
        return Err(GeomError::EmptyInterior);
    }
    let count = binomial(m, d);
    if count > budget {
        return Err(GeomError::NetTooLarge {
            size: count,
            budget,
        });
    }
    let row_norm: Vec<f64> = (0..m).map(|i| normals.row(i).norm()).collect();
    let mut idx: Vec<usize> = (0..d).collect();
    let mut a = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    let mut verts = Vec::new();
    loop {
        for (r, &i) in idx.iter().enumerate() {
            for c in 0..d {
                a[r * d + c] = normals[(i, c)];
            }
            rhs[r] = offsets[i];
        }
        if solve_small(&mut a, &mut rhs, d) {
            let x = Vector::from_column_slice(&rhs);
            let xn = x.amax();
            let feasible = (0..m).all(|i| {
                let v = normals.row(i).transpose().dot(&x) - offsets[i];
                v <= FEAS_TOL * (1.0 + offsets[i].abs() + row_norm[i] * xn)
            });
            if feasible {
                verts.push(x);
            }
        }
        if !next_combination(&mut idx, m) {
            break;
        }
    }
    Ok(dedup_vectors(verts))
}
