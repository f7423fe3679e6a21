use anyhow::Result;
use convex_bm::bodies::AffineSubspace;
use convex_bm::kernel::RngStream;
use convex_bm::nets::random_subspace;
use convex_bm::simplex::{radial_gap, random_simplex_point, SimplexSpec, SWAP_TOL};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};

#[derive(Debug, Clone, Serialize)]
struct Row {
    seed: u64,
    #[serde(rename = "N")]
    big_n: usize,
    dim_e: usize,
    dim_f: usize,
    dim_e_tilde: usize,
    directions: usize,
    max_gap: f64,
    error: String,
}

/// Random nested pairs `F ⊆ E` (E linear, F affine through the projection
/// of a point of `Δ_N`, `dim E ≤ N`); both sides of `P_E Δ ∩ F = P_F(Δ ∩ Ẽ)` compared by
/// gauges at random directions.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let rows: Vec<Row> = cfg
        .seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| -> Result<Row> {
            let nn = cfg.grid.big_n[i % cfg.grid.big_n.len()];
            let s = RngStream::new(seed);
            let mut g = s.derive(0).rng();
            // dim E ≤ N keeps P_E Δ full-dimensional in E; with E = ℝ^{N+1}
            // a random F would cut Δ ⊂ H in a lower-dimensional set.
            let k = g.random_range(1..=nn);
            let j = g.random_range(1..=k);
            let spec = SimplexSpec::new(nn)?;
            let e = AffineSubspace::linear(random_subspace(nn + 1, k, &s.derive(1))?.basis().clone())?;
            let x0 = random_simplex_point(&spec, &s.derive(2));
            let inner = random_subspace(k, j, &s.derive(3))?;
            let f = AffineSubspace::new(e.project_point(&x0), e.basis() * inner.basis())?;
            let mut row = Row {
                seed,
                big_n: nn,
                dim_e: k,
                dim_f: j,
                dim_e_tilde: 0,
                directions: cfg.directions,
                max_gap: f64::NAN,
                error: String::new(),
            };
            match radial_gap(&spec, &e, &f, cfg.directions, &s.derive(4)) {
                Ok(c) => {
                    row.dim_e_tilde = c.e_tilde.dim();
                    row.max_gap = c.max_gap;
                }
                Err(e) => row.error = e.to_string(),
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let bad = rows.iter().filter(|r| !(r.max_gap <= SWAP_TOL)).count();
    let worst = rows.iter().map(|r| r.max_gap).fold(0.0, f64::max);
    rep.check(Check::theorem(
        "duality",
        bad == 0,
        format!("{bad} of {} instances above {SWAP_TOL:e}; largest gap {worst:.3e}", rows.len()),
    ));
    rep.rows("duality", &rows)?;
    Ok(rep.finish())
}
