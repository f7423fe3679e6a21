use anyhow::Result;
use convex_bm::bodies::canned::{cross_polytope_v, cube_v};
use convex_bm::bodies::Body;
use convex_bm::kernel::RngStream;
use convex_bm::nets::{gluskin_build, GluskinSpec};
use convex_bm::volume::{cp_constant_fit, volume_mc, VolumeEstimate};
use rayon::prelude::*;
use serde::Serialize;

use super::gluskin_cell_ok;
use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};
use crate::stats::{bootstrap, median};

/// Coverage runs need `d ≤ COVERAGE_MAX_DIM`.
pub const COVERAGE_MAX_DIM: usize = 4;
/// Required fraction of covering intervals (18 of 20).
pub const COVERAGE_FRACTION: f64 = 0.9;
pub const C_HAT_MAX: f64 = 10.0;
pub const C_HAT_SPREAD: f64 = 4.0;
/// Largest point count the absolute-convex-hull fit accepts.
pub const FIT_MAX_M: usize = 200;

#[derive(Debug, Clone, Serialize)]
struct CoverageRow {
    body: &'static str,
    d: usize,
    seed: u64,
    exact: f64,
    value: f64,
    lo: f64,
    hi: f64,
    covered: bool,
}

#[derive(Debug, Clone, Serialize)]
struct FitRow {
    kind: &'static str,
    d: usize,
    #[serde(rename = "M")]
    big_m: usize,
    seed: u64,
    volume: f64,
    lo: f64,
    hi: f64,
    c_hat: f64,
    c_hat_hi: f64,
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|i| i as f64).product()
}

/// `vol^{1/d}·d/√ln(M/d)`.
fn c_hat(v: f64, d: usize, m: usize) -> f64 {
    v.powf(1.0 / d as f64) * d as f64 / (m as f64 / d as f64).ln().sqrt()
}

fn coverage(cfg: &ExperimentConfig, rep: &mut ReportBuilder) -> Result<()> {
    let dims: Vec<usize> = cfg.grid.d.iter().copied().filter(|&d| d <= COVERAGE_MAX_DIM).collect();
    let jobs: Vec<(&'static str, usize, u64)> = dims
        .iter()
        .flat_map(|&d| {
            cfg.seeds
                .iter()
                .flat_map(move |&s| [("cube", d, s), ("cross-polytope", d, s)])
        })
        .collect();
    let rows: Vec<CoverageRow> = jobs
        .par_iter()
        .map(|&(body, d, seed)| -> Result<CoverageRow> {
            let (k, exact, tag) = match body {
                "cube" => (cube_v(d), 2f64.powi(d as i32), 0),
                _ => (cross_polytope_v(d), 2f64.powi(d as i32) / factorial(d), 1),
            };
            let est = volume_mc(&Body::V(k), cfg.samples, &RngStream::new(seed).derive(d as u64).derive(tag))?;
            Ok(CoverageRow {
                body,
                d,
                seed,
                exact,
                value: est.value,
                lo: est.lo,
                hi: est.hi,
                covered: est.covers(exact),
            })
        })
        .collect::<Result<_>>()?;
    let need = (COVERAGE_FRACTION * cfg.seeds.len() as f64).ceil() as usize;
    let mut worst = usize::MAX;
    let mut detail = Vec::new();
    for body in ["cube", "cross-polytope"] {
        for &d in &dims {
            let hits = rows.iter().filter(|r| r.body == body && r.d == d && r.covered).count();
            worst = worst.min(hits);
            detail.push(format!("{body} d={d}: {hits}/{}", cfg.seeds.len()));
        }
    }
    if !dims.is_empty() {
        rep.check(Check::trend("coverage", worst >= need, format!("need {need}; {}", detail.join(", "))));
    }
    rep.rows("volume-coverage", &rows)
}

fn fit(cfg: &ExperimentConfig, rep: &mut ReportBuilder) -> Result<()> {
    let mut cells = Vec::new();
    for (d, m) in cfg.grid.dm_cells() {
        if d < 2 || m < 2 * d {
            continue;
        }
        if m > FIT_MAX_M {
            rep.note(format!("fit skipped (d={d}, M={m}): M above {FIT_MAX_M}"));
            continue;
        }
        cells.push((d, m));
    }
    if cells.is_empty() {
        return Ok(());
    }
    let per_seed: Vec<Vec<FitRow>> = cfg
        .seeds
        .par_iter()
        .map(|&seed| -> Result<Vec<FitRow>> {
            let s = RngStream::new(seed);
            let fitted = cp_constant_fit(&cells, 1, cfg.samples, &s.derive(0))?;
            let mut out: Vec<FitRow> = fitted
                .rows
                .iter()
                .map(|r| FitRow {
                    kind: "absconv",
                    d: r.d,
                    big_m: r.m,
                    seed,
                    volume: r.volume.value,
                    lo: r.volume.lo,
                    hi: r.volume.hi,
                    c_hat: r.c_hat,
                    c_hat_hi: r.c_hat_hi,
                })
                .collect();
            for &(d, m) in cells.iter().filter(|&&(d, m)| gluskin_cell_ok(d, m)) {
                let cs = s.derive(1).derive(d as u64).derive(m as u64);
                let v = gluskin_build(&GluskinSpec::new(d, m, cs.derive(0))?)?;
                let est: VolumeEstimate = volume_mc(&Body::V(v), cfg.samples, &cs.derive(1))?;
                out.push(FitRow {
                    kind: "gluskin",
                    d,
                    big_m: m,
                    seed,
                    volume: est.value,
                    lo: est.lo,
                    hi: est.hi,
                    c_hat: c_hat(est.value, d, m),
                    c_hat_hi: c_hat(est.hi, d, m),
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<FitRow> = per_seed.into_iter().flatten().collect();
    let abs: Vec<&FitRow> = rows.iter().filter(|r| r.kind == "absconv").collect();
    let max_hi = abs.iter().map(|r| r.c_hat_hi).fold(0.0, f64::max);
    let max = abs.iter().map(|r| r.c_hat).fold(0.0, f64::max);
    let min = abs.iter().map(|r| r.c_hat).fold(f64::INFINITY, f64::min);
    rep.check(Check::trend(
        "c_hat_max",
        max_hi <= C_HAT_MAX,
        format!("largest C_hat {max:.3} (upper CI end {max_hi:.3}), limit {C_HAT_MAX}"),
    ));
    rep.check(Check::trend(
        "c_hat_spread",
        max <= C_HAT_SPREAD * min,
        format!("C_hat in [{min:.3}, {max:.3}], ratio {:.3}, limit {C_HAT_SPREAD}", max / min),
    ));
    let groups: Vec<Vec<f64>> = cells
        .iter()
        .map(|&(d, m)| abs.iter().filter(|r| r.d == d && r.big_m == m).map(|r| r.c_hat).collect())
        .collect();
    let boot = RngStream::new(cfg.seeds[0]).derive(0xF17);
    rep.fitted(bootstrap(
        "C_hat_max_cell_median",
        &groups,
        |g| g.iter().map(|x| median(x)).fold(0.0, f64::max),
        &boot.derive(0),
    ));
    rep.fitted(bootstrap(
        "C_hat_min_cell_median",
        &groups,
        |g| g.iter().map(|x| median(x)).fold(f64::INFINITY, f64::min),
        &boot.derive(1),
    ));
    rep.rows("volume-fit", &rows)
}

/// Monte Carlo coverage of exact cube and cross-polytope volumes, and the
/// fit of `Ĉ = vol(absconv{X₁..X_M})^{1/d}·d/√ln(M/d)` with the same
/// quantity for Gluskin polytopes alongside.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    coverage(cfg, &mut rep)?;
    fit(cfg, &mut rep)?;
    Ok(rep.finish())
}
