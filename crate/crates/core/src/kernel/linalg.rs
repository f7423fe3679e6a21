//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Rank tolerance used by [`orthonormalize`] relative to the largest column norm.
pub const RANK_TOL: f64 = 1e-10;

/// Orthonormal basis of the column span, same column order (Gram-Schmidt with
/// one reorthogonalization pass). Fails if the columns are dependent.
pub fn orthonormalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return Err(GeomError::RankDeficient {
            rank: rows,
            expected: cols,
        });
    }
    let scale = (0..cols).map(|j| m.column(j).norm()).fold(0.0, f64::max);
    let mut q = DMatrix::<f64>::zeros(rows, cols);
    for j in 0..cols {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let proj = qk.dot(&v);
                v.axpy(-proj, &qk, 1.0);
            }
        }
        let n = v.norm();
        if n <= RANK_TOL * scale.max(1e-300) || n == 0.0 {
            return Err(GeomError::RankDeficient {
                rank: j,
                expected: cols,
            });
        }
        q.set_column(j, &(v / n));
    }
    Ok(q)
}

/// Orthonormal basis of the orthogonal complement of the span of `basis`
/// (which must have orthonormal columns).
pub fn orthogonal_complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let (d, k) = basis.shape();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(d - k);
    for i in 0..d {
        if out.len() == d - k {
            break;
        }
        let mut v = DVector::<f64>::zeros(d);
        v[i] = 1.0;
        for _ in 0..2 {
            for c in 0..k {
                let col = basis.column(c);
                let p = col.dot(&v);
                v.axpy(-p, &col, 1.0);
            }
            for u in &out {
                let p = u.dot(&v);
                v.axpy(-p, u, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            out.push(v / n);
        }
    }
    if out.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&out)
    }
}

/// Thin SVD `A = U·diag(s)·Vᵀ` with `s` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
}

/// One-sided Jacobi SVD.
///
/// nalgebra's bidiagonal SVD can return a wrong factorization for
/// rank-deficient inputs carrying entries near 1e-17, which occur routinely
/// when projecting orthonormal bases; Jacobi rotations stay accurate there.
pub fn svd(a: &DMatrix<f64>) -> Svd {
    let (r, c) = a.shape();
    if r < c {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(c, c);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate_columns(&mut w, p, q, cs, sn);
                rotate_columns(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..c).collect();
    let norms: Vec<f64> = (0..c).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let top = norms.iter().copied().fold(0.0, f64::max);
    let mut ucols: Vec<DVector<f64>> = Vec::with_capacity(c);
    let mut sv = DVector::zeros(c);
    let mut vout = DMatrix::zeros(c, c);
    for (k, &j) in order.iter().enumerate() {
        vout.set_column(k, &v.column(j));
        let s = norms[j];
        if s > 1e-300 && s > 1e-15 * top {
            sv[k] = s;
            ucols.push(w.column(j) / s);
        } else {
            sv[k] = s;
            ucols.push(DVector::zeros(r));
        }
    }
    // Complete U where the singular value vanished.
    for k in 0..c {
        if ucols[k].amax() != 0.0 {
            continue;
        }
        for e in 0..r {
            let mut cand = DVector::zeros(r);
            cand[e] = 1.0;
            for _ in 0..2 {
                for (i, u) in ucols.iter().enumerate() {
                    if i != k && u.amax() != 0.0 {
                        let p = u.dot(&cand);
                        cand.axpy(-p, u, 1.0);
                    }
                }
            }
            let n = cand.norm();
            if n > 1e-3 {
                ucols[k] = cand / n;
                break;
            }
        }
    }
    Svd {
        u: DMatrix::from_columns(&ucols),
        singular_values: sv,
        v: vout,
    }
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, cs: f64, sn: f64) {
    for i in 0..m.nrows() {
        let a = m[(i, p)];
        let b = m[(i, q)];
        m[(i, p)] = cs * a - sn * b;
        m[(i, q)] = sn * a + cs * b;
    }
}

/// Largest singular value.
pub fn operator_norm(t: &DMatrix<f64>) -> f64 {
    if t.is_empty() {
        return 0.0;
    }
    svd(t).singular_values[0]
}

/// Determinant through a partially pivoted LU factorization.
pub fn determinant(t: &DMatrix<f64>) -> f64 {
    assert!(t.is_square(), "determinant of a non-square matrix");
    if t.nrows() == 0 {
        return 1.0;
    }
    t.clone().lu().determinant()
}

/// Numerical rank by SVD with relative tolerance.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = svd(m).singular_values;
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Solve a square system, `None` when singular.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.clone().lu().solve(b)
}
