use anyhow::Result;
use convex_bm::bm::{bm_lower_volume, bm_upper};
use convex_bm::bodies::PolyBody;
use convex_bm::kernel::RngStream;
use convex_bm::nets::{gluskin_build, GluskinSpec};
use serde::Serialize;

use super::gluskin_cell_ok;
use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};
use crate::stats::{bootstrap, fit_through_origin, median};

#[derive(Debug, Clone, Serialize)]
struct Row {
    d: usize,
    #[serde(rename = "M")]
    big_m: usize,
    seed: u64,
    upper: f64,
    lower: f64,
    lower_point: f64,
    forward: f64,
    backward: f64,
    vertices1: usize,
    vertices2: usize,
}

#[derive(Debug, Clone, Serialize)]
struct CellSummary {
    d: usize,
    #[serde(rename = "M")]
    big_m: usize,
    pairs: usize,
    /// `d / ln(M/d)`.
    scale: f64,
    median_upper: f64,
    median_lower: f64,
    median_lower_point: f64,
    a_hat: f64,
}

/// Pairs of independent Gluskin polytopes: pattern-search upper bound and
/// volume-product lower bound per pair, medians per cell, and the fit
/// `median lower ≈ â·d/ln(M/d)`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (d, m) in cfg.grid.dm_cells() {
        if !gluskin_cell_ok(d, m) {
            rep.note(format!("skipped (d={d}, M={m}): outside 2d <= M <= e^d"));
            continue;
        }
        let mut cell_rows = Vec::new();
        // Pairs run one after another; bm_upper parallelizes its restarts.
        for &seed in &cfg.seeds {
            let s = RngStream::new(seed).derive(d as u64).derive(m as u64);
            let v1 = gluskin_build(&GluskinSpec::new(d, m, s.derive(0))?)?;
            let v2 = gluskin_build(&GluskinSpec::new(d, m, s.derive(1))?)?;
            let upper = bm_upper(&PolyBody::from_vpolytope(&v1)?, &PolyBody::from_vpolytope(&v2)?, cfg.restarts, &s.derive(2))?;
            let lower = bm_lower_volume(&v1, &v2, cfg.samples, &s.derive(3))?;
            cell_rows.push(Row {
                d,
                big_m: m,
                seed,
                upper: upper.upper,
                lower: lower.value,
                lower_point: lower.point,
                forward: lower.forward,
                backward: lower.backward,
                vertices1: v1.num_points(),
                vertices2: v2.num_points(),
            });
        }
        let lowers: Vec<f64> = cell_rows.iter().map(|r| r.lower).collect();
        let uppers: Vec<f64> = cell_rows.iter().map(|r| r.upper).collect();
        let points: Vec<f64> = cell_rows.iter().map(|r| r.lower_point).collect();
        let scale = d as f64 / (m as f64 / d as f64).ln();
        cells.push((
            CellSummary {
                d,
                big_m: m,
                pairs: cell_rows.len(),
                scale,
                median_upper: median(&uppers),
                median_lower: median(&lowers),
                median_lower_point: median(&points),
                a_hat: median(&lowers) / scale,
            },
            lowers,
        ));
        rows.extend(cell_rows);
    }
    let bad = rows.iter().filter(|r| r.lower > r.upper).count();
    rep.check(Check::theorem(
        "lower_le_upper",
        bad == 0,
        format!("{bad} of {} pairs with lower > upper", rows.len()),
    ));
    if cells.len() >= 2 {
        // Cells in increasing d/ln(M/d); the trend asks for strictly growing medians.
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| cells[a].0.scale.total_cmp(&cells[b].0.scale));
        let increasing = order
            .windows(2)
            .all(|w| cells[w[1]].0.median_lower > cells[w[0]].0.median_lower);
        let desc: Vec<String> = order
            .iter()
            .map(|&i| {
                let c = &cells[i].0;
                format!("(d={}, M={}): {:.4}", c.d, c.big_m, c.median_lower)
            })
            .collect();
        rep.check(Check::trend("median_lower_trend", increasing, format!("median lower bounds {}", desc.join(", "))));
    }
    if !cells.is_empty() {
        let scales: Vec<f64> = cells.iter().map(|c| c.0.scale).collect();
        let groups: Vec<Vec<f64>> = cells.iter().map(|c| c.1.clone()).collect();
        let seed = cfg.seeds[0];
        rep.fitted(bootstrap(
            "a_hat",
            &groups,
            |g| {
                let meds: Vec<f64> = g.iter().map(|x| median(x)).collect();
                fit_through_origin(&scales, &meds)
            },
            &RngStream::new(seed).derive(0xB007),
        ));
    }
    rep.note("the probability bound 2e^{-dM} is not checked");
    rep.rows("gluskin-distance", &rows)?;
    let summaries: Vec<CellSummary> = cells.into_iter().map(|c| c.0).collect();
    rep.rows("gluskin-distance-cells", &summaries)?;
    Ok(rep.finish())
}
