use anyhow::Result;
use convex_bm::GeomError;
use convex_bm::kernel::{random_unit_vector, RngStream};
use convex_bm::simplex::{position_section, random_section, SimplexSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};

pub const SANDWICH_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Default, Serialize)]
struct Row {
    seed: u64,
    #[serde(rename = "N")]
    big_n: usize,
    m: usize,
    inner_radius: f64,
    outer_radius: f64,
    outer_bound: f64,
    symmetry_ratio: f64,
    min_support: f64,
    max_support: f64,
    max_support_ratio: f64,
    inner_violations: usize,
    outer_violations: usize,
    symmetry_violations: usize,
    error: String,
}

/// Random sections of `Δ_N` put in normal form and tested against
/// `B₂ᴸ ⊆ K ⊆ m^{3/2}B₂ᴸ` and `−K ⊆ mK`: exactly (radii from facets and
/// vertices) and by support functions at random directions.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let combos: Vec<(usize, usize)> = cfg
        .grid
        .big_n
        .iter()
        .flat_map(|&nn| cfg.grid.m.iter().filter(move |&&m| m <= nn).map(move |&m| (nn, m)))
        .collect();
    if combos.is_empty() {
        anyhow::bail!("no (N, m) pair with m <= N");
    }
    let rows: Vec<Row> = cfg
        .seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| -> Result<Row> {
            let (nn, m) = combos[i % combos.len()];
            let s = RngStream::new(seed);
            let spec = SimplexSpec::new(nn)?;
            let mut row = Row {
                seed,
                big_n: nn,
                m,
                outer_bound: (m as f64).powf(1.5),
                ..Row::default()
            };
            let f = random_section(&spec, m, false, &s.derive(0))?;
            let ps = match position_section(&spec, &f) {
                Ok(ps) => ps,
                Err(e @ (GeomError::SandwichViolation(_) | GeomError::DegenerateCenter { .. })) => {
                    row.error = e.to_string();
                    row.symmetry_violations = 1;
                    return Ok(row);
                }
                Err(e) => return Err(e.into()),
            };
            let k = ps.body();
            row.inner_radius = ps.inner_radius;
            row.outer_radius = ps.outer_radius;
            row.symmetry_ratio = ps.symmetry_ratio;
            row.inner_violations += usize::from(ps.inner_radius < 1.0 - SANDWICH_SLACK);
            row.outer_violations += usize::from(ps.outer_radius > row.outer_bound + SANDWICH_SLACK);
            row.symmetry_violations += usize::from(ps.symmetry_ratio > m as f64 + SANDWICH_SLACK);
            let mut rng = s.derive(1).rng();
            row.min_support = f64::INFINITY;
            for _ in 0..cfg.directions {
                let u = random_unit_vector(m, &mut rng);
                let hp = k.support(&u)?;
                let hn = k.support(&-&u)?;
                row.min_support = row.min_support.min(hp);
                row.max_support = row.max_support.max(hp);
                row.max_support_ratio = row.max_support_ratio.max(hn / hp);
                row.inner_violations += usize::from(hp < 1.0 - SANDWICH_SLACK);
                row.outer_violations += usize::from(hp > row.outer_bound + SANDWICH_SLACK);
                row.symmetry_violations += usize::from(hn > m as f64 * hp + SANDWICH_SLACK);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let count = |f: fn(&Row) -> usize| rows.iter().filter(|r| f(r) > 0).count();
    let (inner, outer, sym) = (
        count(|r| r.inner_violations),
        count(|r| r.outer_violations),
        count(|r| r.symmetry_violations),
    );
    let worst_outer = rows
        .iter()
        .map(|r| r.outer_radius / r.outer_bound)
        .fold(0.0, f64::max);
    rep.check(Check::theorem(
        "inner_ball",
        inner == 0,
        format!("{inner} of {} sections violate B2 ⊆ K", rows.len()),
    ));
    rep.check(Check::theorem(
        "outer_ball",
        outer == 0,
        format!(
            "{outer} of {} sections violate K ⊆ m^1.5·B2; worst radius/bound = {worst_outer:.4}",
            rows.len()
        ),
    ));
    rep.check(Check::theorem(
        "symmetry",
        sym == 0,
        format!("{sym} of {} sections violate −K ⊆ mK", rows.len()),
    ));
    rep.rows("sandwich", &rows)?;
    Ok(rep.finish())
}
