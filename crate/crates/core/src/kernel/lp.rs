//! Dense bounded-variable simplex method.
//!
//! Problems are small (at most a few hundred variables), so the solver keeps
//! a full tableau and favors robustness: Dantzig pricing with a switch to
//! Bland's rule after a run of degenerate pivots, smallest-index tie breaking
//! in the ratio test, and a final refactorization of the optimal basis with an
//! LU decomposition to clean up accumulated rounding.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `opt c·x` subject to `rows·x (sense) rhs` and `lower ≤ x ≤ upper`.
/// Infinite bounds are allowed; the default bounds are `[0, ∞)`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: DVector<f64>,
    pub direction: Direction,
    pub rows: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub senses: Vec<Sense>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub x: DVector<f64>,
    /// Row multipliers `y` with `c - rowsᵀ y` equal to the bound multipliers at
    /// the optimum (same sign convention for both directions).
    pub duals: DVector<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub tol_feas: f64,
    /// Zero selects `max(1000, 50·(rows + columns))`.
    pub max_iter: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-9,
            max_iter: 0,
        }
    }
}

impl LpProblem {
    pub fn new(
        direction: Direction,
        objective: DVector<f64>,
        rows: DMatrix<f64>,
        senses: Vec<Sense>,
        rhs: DVector<f64>,
    ) -> Self {
        let n = objective.len();
        Self {
            objective,
            direction,
            rows,
            rhs,
            senses,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn minimize(objective: DVector<f64>) -> LpBuilder {
        LpBuilder::new(Direction::Minimize, objective)
    }

    pub fn maximize(objective: DVector<f64>) -> LpBuilder {
        LpBuilder::new(Direction::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let m = self.rows.nrows();
        if (m > 0 && self.rows.ncols() != n) || self.rhs.len() != m || self.senses.len() != m {
            return Err(GeomError::InvalidData("inconsistent LP dimensions".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(GeomError::InvalidData("bound vectors have wrong length".into()));
        }
        let all_finite = self.objective.iter().all(|v| v.is_finite())
            && self.rows.iter().all(|v| v.is_finite())
            && self.rhs.iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(GeomError::InvalidData("non-finite LP data".into()));
        }
        if self.lower.iter().any(|l| l.is_nan() || *l == f64::INFINITY)
            || self.upper.iter().any(|u| u.is_nan() || *u == f64::NEG_INFINITY)
        {
            return Err(GeomError::InvalidData("invalid variable bound".into()));
        }
        Ok(())
    }

    /// Largest constraint or bound violation of `x`, each row scaled by the
    /// magnitude of its terms.
    pub fn max_violation(&self, x: &DVector<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows.nrows() {
            let row = self.rows.row(i);
            let ax: f64 = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            let mag: f64 = row.iter().zip(x.iter()).map(|(a, b)| (a * b).abs()).sum();
            let scale = 1.0f64.max(self.rhs[i].abs()).max(mag);
            let v = match self.senses[i] {
                Sense::Le => ax - self.rhs[i],
                Sense::Ge => self.rhs[i] - ax,
                Sense::Eq => (ax - self.rhs[i]).abs(),
            };
            worst = worst.max(v / scale);
        }
        for j in 0..x.len() {
            let scale = 1.0f64.max(x[j].abs());
            worst = worst.max((self.lower[j] - x[j]) / scale);
            worst = worst.max((x[j] - self.upper[j]) / scale);
        }
        worst
    }
}

/// Incremental row-by-row construction of an [`LpProblem`].
#[derive(Debug, Clone)]
pub struct LpBuilder {
    direction: Direction,
    objective: DVector<f64>,
    rows: Vec<f64>,
    senses: Vec<Sense>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpBuilder {
    fn new(direction: Direction, objective: DVector<f64>) -> Self {
        let n = objective.len();
        Self {
            direction,
            objective,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn row(mut self, coeffs: &[f64], sense: Sense, rhs: f64) -> Self {
        assert_eq!(coeffs.len(), self.objective.len(), "row length");
        self.rows.extend_from_slice(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn push_row(&mut self, coeffs: &[f64], sense: Sense, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len(), "row length");
        self.rows.extend_from_slice(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    pub fn bounds(mut self, j: usize, lower: f64, upper: f64) -> Self {
        self.lower[j] = lower;
        self.upper[j] = upper;
        self
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn free(self, j: usize) -> Self {
        self.bounds(j, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn build(self) -> LpProblem {
        let n = self.objective.len();
        let m = self.senses.len();
        LpProblem {
            objective: self.objective,
            direction: self.direction,
            rows: DMatrix::from_row_slice(m, n, &self.rows),
            rhs: DVector::from_vec(self.rhs),
            senses: self.senses,
            lower: self.lower,
            upper: self.upper,
        }
    }
}

pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    lp_solve_with(p, &LpOptions::default())
}

#[derive(Clone, Copy)]
enum VarMap {
    /// x = lo + x'
    Shift(f64),
    /// x = hi - x'
    Mirror(f64),
    /// x = x'[col] - x'[col + 1]
    Split,
}

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-10;
const DEGENERATE_RUN: usize = 30;

struct Tableau {
    m: usize,
    n: usize,
    t: Vec<f64>,
    xb: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    width: Vec<f64>,
    iterations: usize,
    max_iter: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.n + j]
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.width[j]
        } else {
            0.0
        }
    }

    fn reduced_costs(&self, cost: &[f64], d: &mut [f64]) {
        d.copy_from_slice(cost);
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * self.n..(i + 1) * self.n];
                for (dj, &tij) in d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let n = self.n;
        let p = self.t[r * n + j];
        {
            let row = &mut self.t[r * n..(r + 1) * n];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[j] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * n);
        let (prow, after) = rest.split_at_mut(n);
        for chunk in before.chunks_mut(n).chain(after.chunks_mut(n)) {
            let f = chunk[j];
            if f != 0.0 {
                for (v, &pv) in chunk.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                chunk[j] = 0.0;
            }
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        self.at_upper[j] = false;
    }

    /// Minimize `cost` over the columns marked in `allowed`.
    fn run(&mut self, cost: &[f64], allowed: &[bool]) -> Result<Phase> {
        let mut d = vec![0.0; self.n];
        let mut degenerate = 0usize;
        loop {
            self.iterations += 1;
            if self.iterations > self.max_iter {
                return Err(GeomError::IterationLimit("simplex"));
            }
            self.reduced_costs(cost, &mut d);
            let bland = degenerate >= DEGENERATE_RUN;
            let mut entering: Option<usize> = None;
            let mut best = 0.0;
            for j in 0..self.n {
                if self.is_basic[j] || !allowed[j] || self.width[j] <= 0.0 {
                    continue;
                }
                let gain = if self.at_upper[j] { d[j] } else { -d[j] };
                if gain > OPT_TOL {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if gain > best {
                        best = gain;
                        entering = Some(j);
                    }
                }
            }
            let Some(j) = entering else {
                return Ok(Phase::Optimal);
            };
            let dir = if self.at_upper[j] { -1.0 } else { 1.0 };

            let mut theta = self.width[j];
            let mut leave: Option<usize> = None;
            for i in 0..self.m {
                let alpha = dir * self.at(i, j);
                let ratio = if alpha > PIVOT_TOL {
                    self.xb[i] / alpha
                } else if alpha < -PIVOT_TOL && self.width[self.basis[i]].is_finite() {
                    (self.width[self.basis[i]] - self.xb[i]) / -alpha
                } else {
                    continue;
                };
                let ratio = ratio.max(0.0);
                let tie = 1e-12 * (1.0 + theta.abs().min(1e12));
                let better = match leave {
                    _ if ratio < theta - tie => true,
                    Some(l) => ratio <= theta + tie && self.basis[i] < self.basis[l],
                    None => false,
                };
                if better {
                    theta = ratio;
                    leave = Some(i);
                }
            }
            if theta.is_infinite() {
                return Ok(Phase::Unbounded);
            }
            if theta <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            for i in 0..self.m {
                let tij = self.at(i, j);
                if tij != 0.0 {
                    self.xb[i] -= dir * theta * tij;
                }
            }
            match leave {
                None => self.at_upper[j] = !self.at_upper[j],
                Some(r) => {
                    let entering_value = self.nonbasic_value(j) + dir * theta;
                    let q = self.basis[r];
                    let to_upper = dir * self.at(r, j) < 0.0;
                    self.pivot(r, j);
                    self.xb[r] = entering_value;
                    self.at_upper[q] = to_upper && self.width[q].is_finite();
                }
            }
        }
    }
}

pub fn lp_solve_with(p: &LpProblem, opts: &LpOptions) -> Result<LpSolution> {
    p.validate()?;
    let n0 = p.num_vars();
    let m = p.rows.nrows();
    let sign_obj = match p.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };

    let infeasible = || LpSolution {
        status: LpStatus::Infeasible,
        value: f64::NAN,
        x: DVector::zeros(n0),
        duals: DVector::zeros(m),
    };

    // Structural columns after bound substitution.
    let mut maps = Vec::with_capacity(n0);
    let mut cols: Vec<(usize, f64)> = Vec::new(); // (original var, coefficient sign)
    let mut widths: Vec<f64> = Vec::new();
    for j in 0..n0 {
        let (lo, hi) = (p.lower[j], p.upper[j]);
        if lo > hi + opts.tol_feas * 1.0f64.max(lo.abs()) {
            return Ok(infeasible());
        }
        if lo.is_finite() {
            maps.push((VarMap::Shift(lo), cols.len()));
            cols.push((j, 1.0));
            widths.push((hi - lo).max(0.0));
        } else if hi.is_finite() {
            maps.push((VarMap::Mirror(hi), cols.len()));
            cols.push((j, -1.0));
            widths.push(f64::INFINITY);
        } else {
            maps.push((VarMap::Split, cols.len()));
            cols.push((j, 1.0));
            cols.push((j, -1.0));
            widths.push(f64::INFINITY);
            widths.push(f64::INFINITY);
        }
    }
    let ns = cols.len();

    // Right-hand side after substituting the fixed parts of shifted variables.
    let mut b: Vec<f64> = (0..m).map(|i| p.rhs[i]).collect();
    for (j, (map, _)) in maps.iter().enumerate() {
        let shift = match *map {
            VarMap::Shift(lo) => lo,
            VarMap::Mirror(hi) => hi,
            VarMap::Split => 0.0,
        };
        if shift != 0.0 {
            for (i, bi) in b.iter_mut().enumerate() {
                *bi -= p.rows[(i, j)] * shift;
            }
        }
    }
    let mut row_sign = vec![1.0; m];
    let mut senses = p.senses.clone();
    for i in 0..m {
        if b[i] < 0.0 {
            row_sign[i] = -1.0;
            b[i] = -b[i];
            senses[i] = match senses[i] {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    // Column layout: structural | slacks | artificials.
    let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
    let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
    let n = ns + n_slack + n_art;
    let mut t = vec![0.0; m * n];
    for i in 0..m {
        for (c, &(j, s)) in cols.iter().enumerate() {
            t[i * n + c] = row_sign[i] * s * p.rows[(i, j)];
        }
    }
    let mut width = widths;
    width.resize(n, f64::INFINITY);
    let mut basis = vec![0usize; m];
    let mut is_art = vec![false; n];
    let (mut next_slack, mut next_art) = (ns, ns + n_slack);
    for i in 0..m {
        match senses[i] {
            Sense::Le => {
                t[i * n + next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                t[i * n + next_slack] = -1.0;
                next_slack += 1;
                t[i * n + next_art] = 1.0;
                is_art[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                t[i * n + next_art] = 1.0;
                is_art[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }
    let a_internal = DMatrix::from_row_slice(m, n, &t);
    let mut is_basic = vec![false; n];
    for &c in &basis {
        is_basic[c] = true;
    }
    let max_iter = if opts.max_iter == 0 {
        1000.max(50 * (m + n))
    } else {
        opts.max_iter
    };
    let mut tab = Tableau {
        m,
        n,
        t,
        xb: b.clone(),
        basis,
        is_basic,
        at_upper: vec![false; n],
        width,
        iterations: 0,
        max_iter,
    };

    let b_scale = b.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if n_art > 0 {
        let cost1: Vec<f64> = (0..n).map(|j| if is_art[j] { 1.0 } else { 0.0 }).collect();
        let allowed = vec![true; n];
        tab.run(&cost1, &allowed)?;
        let infeas: f64 = (0..m)
            .filter(|&i| is_art[tab.basis[i]])
            .map(|i| tab.xb[i])
            .sum();
        if infeas > opts.tol_feas * b_scale {
            return Ok(infeasible());
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if !is_art[tab.basis[r]] {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..n {
                if is_art[j] || tab.is_basic[j] {
                    continue;
                }
                let a = tab.at(r, j).abs();
                if a > 1e-7 && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            if let Some((j, _)) = best {
                let delta = tab.xb[r] / tab.at(r, j);
                let entering_value = tab.nonbasic_value(j) + delta;
                for i in 0..m {
                    let tij = tab.at(i, j);
                    if tij != 0.0 {
                        tab.xb[i] -= delta * tij;
                    }
                }
                let q = tab.basis[r];
                tab.pivot(r, j);
                tab.xb[r] = entering_value;
                tab.at_upper[q] = false;
            }
        }
        for j in 0..n {
            if is_art[j] {
                tab.width[j] = 0.0;
            }
        }
    }

    let mut cost2 = vec![0.0; n];
    for (c, &(j, s)) in cols.iter().enumerate() {
        cost2[c] = sign_obj * s * p.objective[j];
    }
    let allowed: Vec<bool> = (0..n).map(|j| !is_art[j]).collect();
    match tab.run(&cost2, &allowed)? {
        Phase::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: sign_obj * f64::NEG_INFINITY,
                x: DVector::zeros(n0),
                duals: DVector::zeros(m),
            })
        }
        Phase::Optimal => {}
    }

    // Internal point from the tableau, then refactor the basis for cleanup.
    let mut xi = vec![0.0; n];
    for j in 0..n {
        if !tab.is_basic[j] {
            xi[j] = tab.nonbasic_value(j);
        }
    }
    for i in 0..m {
        xi[tab.basis[i]] = tab.xb[i];
    }
    let mut duals_internal = DVector::zeros(m);
    if m > 0 {
        let bmat = DMatrix::from_fn(m, m, |i, k| a_internal[(i, tab.basis[k])]);
        let mut rhs = DVector::from_vec(b.clone());
        for j in 0..n {
            if !tab.is_basic[j] && xi[j] != 0.0 {
                for i in 0..m {
                    rhs[i] -= a_internal[(i, j)] * xi[j];
                }
            }
        }
        let lu = bmat.clone().lu();
        if let Some(xb) = lu.solve(&rhs) {
            for i in 0..m {
                xi[tab.basis[i]] = xb[i];
            }
        }
        let cb = DVector::from_fn(m, |k, _| cost2[tab.basis[k]]);
        if let Some(y) = bmat.transpose().lu().solve(&cb) {
            duals_internal = y;
        }
    }

    let mut x = DVector::zeros(n0);
    for (j, (map, c)) in maps.iter().enumerate() {
        x[j] = match *map {
            VarMap::Shift(lo) => lo + xi[*c],
            VarMap::Mirror(hi) => hi - xi[*c],
            VarMap::Split => xi[*c] - xi[*c + 1],
        };
    }
    let duals = DVector::from_fn(m, |i, _| sign_obj * row_sign[i] * duals_internal[i]);
    let viol = p.max_violation(&x);
    if viol > opts.tol_feas.max(1e-9) * 10.0 {
        return Err(GeomError::NumericalFailure(format!(
            "optimal basis violates constraints by {viol:e}"
        )));
    }
    let value = p.objective.dot(&x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        x,
        duals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(x)
    }

    #[test]
    fn box_maximum() {
        let p = LpProblem::maximize(v(&[1.0, 0.0]))
            .bounds(0, -1.0, 1.0)
            .bounds(1, -1.0, 1.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!(s.is_optimal());
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l1_ball_gauge() {
        // min sum λ, Σ λ_i v_i = (1,1), vertices ±e1, ±e2.
        let p = LpProblem::minimize(v(&[1.0; 4]))
            .row(&[1.0, -1.0, 0.0, 0.0], Sense::Eq, 1.0)
            .row(&[0.0, 0.0, 1.0, -1.0], Sense::Eq, 1.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        // 2·B1 membership: Σλ ≤ 2 feasible.
        let q = LpProblem::minimize(v(&[0.0; 4]))
            .row(&[1.0, -1.0, 0.0, 0.0], Sense::Eq, 1.0)
            .row(&[0.0, 0.0, 1.0, -1.0], Sense::Eq, 1.0)
            .row(&[1.0; 4], Sense::Le, 2.0)
            .build();
        assert!(lp_solve(&q).unwrap().is_optimal());
        let r = LpProblem::minimize(v(&[0.0; 4]))
            .row(&[1.0, -1.0, 0.0, 0.0], Sense::Eq, 1.0)
            .row(&[0.0, 0.0, 1.0, -1.0], Sense::Eq, 1.0)
            .row(&[1.0; 4], Sense::Le, 1.9)
            .build();
        assert_eq!(lp_solve(&r).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn chebyshev_center_of_square() {
        // max r s.t. ⟨n_i, c⟩ + r|n_i| ≤ 1 for n = ±e1, ±e2; c free.
        let p = LpProblem::maximize(v(&[0.0, 0.0, 1.0]))
            .row(&[1.0, 0.0, 1.0], Sense::Le, 1.0)
            .row(&[-1.0, 0.0, 1.0], Sense::Le, 1.0)
            .row(&[0.0, 1.0, 1.0], Sense::Le, 1.0)
            .row(&[0.0, -1.0, 1.0], Sense::Le, 1.0)
            .free(0)
            .free(1)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.x[0].abs() < 1e-12 && s.x[1].abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let p = LpProblem::maximize(v(&[1.0, 1.0]))
            .row(&[1.0, -1.0], Sense::Le, 1.0)
            .build();
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn textbook_with_duals() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36, duals (0, 1.5, 1).
        let p = LpProblem::maximize(v(&[3.0, 5.0]))
            .row(&[1.0, 0.0], Sense::Le, 4.0)
            .row(&[0.0, 2.0], Sense::Le, 12.0)
            .row(&[3.0, 2.0], Sense::Le, 18.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value - 36.0).abs() < 1e-10);
        assert!((s.x[0] - 2.0).abs() < 1e-10 && (s.x[1] - 6.0).abs() < 1e-10);
        let expect = [0.0, 1.5, 1.0];
        for i in 0..3 {
            assert!((s.duals[i] - expect[i]).abs() < 1e-10, "dual {i}: {}", s.duals[i]);
        }
        assert!((p.rhs.dot(&s.duals) - s.value).abs() < 1e-10);
    }

    #[test]
    fn ge_and_negative_rhs() {
        // min x + y, x + y ≥ 2, x - y ≤ -1 → value 2.
        let p = LpProblem::minimize(v(&[1.0, 1.0]))
            .row(&[1.0, 1.0], Sense::Ge, 2.0)
            .row(&[1.0, -1.0], Sense::Le, -1.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        assert!(s.x[1] - s.x[0] >= 1.0 - 1e-12);
    }

    #[test]
    fn mirrored_and_upper_bounded_variables() {
        // min x with x ∈ (-∞, 3] and x ≥ -5 as a row → -5.
        let p = LpProblem::minimize(v(&[1.0]))
            .row(&[1.0], Sense::Ge, -5.0)
            .bounds(0, f64::NEG_INFINITY, 3.0)
            .build();
        assert!((lp_solve(&p).unwrap().value + 5.0).abs() < 1e-12);
        // max x + y with 0 ≤ x ≤ 1, 0 ≤ y ≤ 2, x + y ≤ 2.5 → 2.5.
        let q = LpProblem::maximize(v(&[1.0, 1.0]))
            .row(&[1.0, 1.0], Sense::Le, 2.5)
            .bounds(0, 0.0, 1.0)
            .bounds(1, 0.0, 2.0)
            .build();
        assert!((lp_solve(&q).unwrap().value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let p = LpProblem::minimize(v(&[1.0, 2.0]))
            .row(&[1.0, 1.0], Sense::Eq, 1.0)
            .row(&[2.0, 2.0], Sense::Eq, 2.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling example; Bland fallback must terminate.
        let p = LpProblem::minimize(v(&[-0.75, 150.0, -0.02, 6.0]))
            .row(&[0.25, -60.0, -0.04, 9.0], Sense::Le, 0.0)
            .row(&[0.5, -90.0, -0.02, 3.0], Sense::Le, 0.0)
            .row(&[0.0, 0.0, 1.0, 0.0], Sense::Le, 1.0)
            .build();
        let s = lp_solve(&p).unwrap();
        assert!((s.value + 0.05).abs() < 1e-10);
    }

    #[test]
    fn infeasible_bounds() {
        let p = LpProblem::minimize(v(&[1.0])).bounds(0, 2.0, 1.0).build();
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Infeasible);
    }
}
