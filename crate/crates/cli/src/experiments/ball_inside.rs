use anyhow::Result;
use convex_bm::kernel::{random_unit_vector, RngStream};
use convex_bm::nets::{ball_inclusion_radius, gluskin_sample, GluskinSpec};
use rayon::prelude::*;
use serde::Serialize;

use super::gluskin_cell_ok;
use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};

#[derive(Debug, Clone, Serialize)]
struct Row {
    d: usize,
    #[serde(rename = "M")]
    big_m: usize,
    seed: u64,
    vertices: usize,
    vertex_bound: usize,
    bound: f64,
    max_gauge: f64,
    directions: usize,
    violations: usize,
}

/// Gauge of uniform unit directions against `radius_factor · 4√(d/ln(M/d))`,
/// plus the vertex count against `4M`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let mut jobs = Vec::new();
    for (d, m) in cfg.grid.dm_cells() {
        if !gluskin_cell_ok(d, m) {
            rep.note(format!("skipped (d={d}, M={m}): outside 2d <= M <= e^d"));
            continue;
        }
        jobs.extend(cfg.seeds.iter().map(|&s| (d, m, s)));
    }
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(d, m, seed)| -> Result<Row> {
            let cell = RngStream::new(seed).derive(d as u64).derive(m as u64);
            let g = gluskin_sample(&GluskinSpec::new(d, m, cell.derive(0))?)?;
            let bound = cfg.radius_factor * ball_inclusion_radius(d, m);
            let mut rng = cell.derive(1).rng();
            let mut max_gauge: f64 = 0.0;
            let mut violations = 0;
            for _ in 0..cfg.directions {
                let x = random_unit_vector(d, &mut rng);
                let gx = g.body.gauge(&x)?;
                max_gauge = max_gauge.max(gx);
                if gx > bound {
                    violations += 1;
                }
            }
            Ok(Row {
                d,
                big_m: m,
                seed,
                vertices: g.vertex_count(),
                vertex_bound: 4 * m,
                bound,
                max_gauge,
                directions: cfg.directions,
                violations,
            })
        })
        .collect::<Result<_>>()?;
    let violations: usize = rows.iter().map(|r| r.violations).sum();
    rep.check(Check::theorem(
        "ball_inclusion",
        violations == 0,
        format!("{violations} violations over {} samples", rows.len()),
    ));
    let over: Vec<&Row> = rows.iter().filter(|r| r.vertices > r.vertex_bound).collect();
    let worst = rows
        .iter()
        .map(|r| r.vertices as f64 / r.vertex_bound as f64)
        .fold(0.0, f64::max);
    rep.check(Check::theorem(
        "vertex_budget",
        over.is_empty(),
        format!("{} samples above 4M; largest vertices/4M = {worst:.3}", over.len()),
    ));
    rep.rows("ball-inside", &rows)?;
    Ok(rep.finish())
}
