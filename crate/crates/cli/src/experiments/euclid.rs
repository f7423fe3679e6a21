use anyhow::Result;
use convex_bm::bm::{bm_lower_asymmetry, bm_upper};
use convex_bm::bodies::canned::ball_proxy;
use convex_bm::bodies::{center_position, PolyBody, VPolytope};
use convex_bm::kernel::RngStream;
use convex_bm::nets::random_subspace;
use convex_bm::simplex::SimplexSpec;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};
use crate::stats::{bootstrap, median};

/// Extra random directions in the ball proxy (d ≥ 3; d = 2 uses a 64-gon).
pub const PROXY_EXTRA: usize = 100;

/// `√(n / ln(2N/n))`.
fn shape(n: usize, big_n: usize) -> f64 {
    (n as f64 / (2.0 * big_n as f64 / n as f64).ln()).sqrt()
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    seed: u64,
    vertices: usize,
    upper: f64,
    lower: f64,
}

#[derive(Debug, Clone, Serialize)]
struct CellSummary {
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    samples: usize,
    shape: f64,
    median_upper: f64,
    median_lower: f64,
    c_hat: f64,
}

/// `P Δ_N` for Haar-random rank-`n` projections inside the hyperplane of
/// `Δ_N`, moved to its John center, against a dense symmetric polytope
/// approximating the Euclidean ball.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let mut rows = Vec::new();
    let mut cells: Vec<(CellSummary, Vec<f64>)> = Vec::new();
    for &n in &cfg.grid.n {
        let proxy = ball_proxy(n, PROXY_EXTRA, &mut RngStream::new(cfg.seeds[0]).derive(0xBA11).derive(n as u64).rng());
        let ball = PolyBody::from_vpolytope(&proxy)?;
        rep.note(format!("n={n}: ball proxy with {} vertices", proxy.num_points()));
        for &big_n in &cfg.grid.big_n {
            let spec = SimplexSpec::new(big_n)?;
            let h0 = spec.hyperplane_basis();
            let part: Vec<Row> = cfg
                .seeds
                .par_iter()
                .map(|&seed| -> Result<Row> {
                    let s = RngStream::new(seed).derive(n as u64).derive(big_n as u64);
                    let g = random_subspace(big_n, n, &s.derive(0))?;
                    let e = &h0 * g.basis();
                    let raw = VPolytope::new(e.transpose(), false)?.prune_vertices()?;
                    let facets = PolyBody::from_vpolytope(&raw)?;
                    let a = center_position(facets.facets().expect("low-dimensional facets are enumerable"))?;
                    let pd = PolyBody::from_vpolytope(&raw.translate(&-a))?;
                    let est = bm_upper(&ball, &pd, cfg.restarts, &s.derive(1))?;
                    Ok(Row {
                        n,
                        big_n,
                        seed,
                        vertices: raw.num_points(),
                        upper: est.upper,
                        lower: bm_lower_asymmetry(&ball, &pd)?,
                    })
                })
                .collect::<Result<_>>()?;
            let uppers: Vec<f64> = part.iter().map(|r| r.upper).collect();
            let lowers: Vec<f64> = part.iter().map(|r| r.lower).collect();
            let sh = shape(n, big_n);
            cells.push((
                CellSummary {
                    n,
                    big_n,
                    samples: part.len(),
                    shape: sh,
                    median_upper: median(&uppers),
                    median_lower: median(&lowers),
                    c_hat: median(&uppers) / sh,
                },
                uppers.clone(),
            ));
            rep.fitted(bootstrap(
                &format!("c_hat_n{n}_N{big_n}"),
                &[uppers],
                |g| median(&g[0]) / sh,
                &RngStream::new(cfg.seeds[0]).derive(0xC0).derive(n as u64).derive(big_n as u64),
            ));
            rows.extend(part);
        }
    }
    let below = rows.iter().filter(|r| r.upper < 1.0 - 1e-9 || r.lower < 1.0 - 1e-9).count();
    rep.check(Check::theorem("distance_ge_1", below == 0, format!("{below} samples below 1")));
    let bad = rows.iter().filter(|r| r.lower > r.upper + 1e-9).count();
    rep.check(Check::theorem(
        "lower_le_upper",
        bad == 0,
        format!("{bad} of {} samples with lower > upper", rows.len()),
    ));
    for &n in &cfg.grid.n {
        let mine: Vec<&CellSummary> = cells.iter().map(|c| &c.0).filter(|c| c.n == n).collect();
        if mine.len() < 2 {
            continue;
        }
        let lo = mine.iter().map(|c| c.c_hat).fold(f64::INFINITY, f64::min);
        let hi = mine.iter().map(|c| c.c_hat).fold(0.0, f64::max);
        rep.check(Check::trend(
            &format!("shape_n{n}"),
            hi <= 2.0 * lo,
            format!("fitted c_hat across N within [{lo:.3}, {hi:.3}], ratio {:.3} (limit 2)", hi / lo),
        ));
    }
    rep.rows("euclid-projection", &rows)?;
    let summaries: Vec<CellSummary> = cells.into_iter().map(|c| c.0).collect();
    rep.rows("euclid-projection-cells", &summaries)?;
    Ok(rep.finish())
}
