use anyhow::Result;
use convex_bm::bm::{perturb_projection_check, perturb_section_check, BmOptions, PerturbResult, PERTURB_SLACK};
use convex_bm::kernel::RngStream;
use convex_bm::nets::{random_rotation_near_identity, random_subspace, GrassmannPoint};
use convex_bm::simplex::{position_section, random_section, SimplexSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};

/// Seeds (from the front of the list) also run with `ε = 0`.
pub const ZERO_PAIRS: usize = 5;
/// Identical inputs must come out at most this far from 1.
pub const IDENTITY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Section,
    Projection,
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    kind: Kind,
    seed: u64,
    #[serde(rename = "N")]
    big_n: usize,
    m: usize,
    n: usize,
    eps: f64,
    rho_lower: f64,
    rho_upper: f64,
    rotation_value: f64,
    upper: f64,
    lower: f64,
    bound: f64,
    passed: bool,
}

fn row(kind: Kind, seed: u64, big_n: usize, m: usize, n: usize, eps: f64, r: PerturbResult) -> Row {
    Row {
        kind,
        seed,
        big_n,
        m,
        n,
        eps,
        rho_lower: r.rho_lower,
        rho_upper: r.rho_upper,
        rotation_value: r.rotation_value,
        upper: r.estimate.upper,
        lower: r.estimate.lower,
        bound: r.bound,
        passed: r.passed,
    }
}

/// For each seed: a positioned random section `L` of `Δ_N`, a rotation `U`
/// with `‖U − I‖ = ε`, and both checks: `K_m ∩ L` against `K_m ∩ UL`, and
/// two projections of the positioned body onto `F` and `UF`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let opts = BmOptions {
        restarts: cfg.restarts,
        ..BmOptions::default()
    };
    let g = &cfg.grid;
    let jobs: Vec<(usize, u64, bool)> = cfg
        .seeds
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| {
            let zero = i < ZERO_PAIRS;
            std::iter::once((i, s, false)).chain(zero.then_some((i, s, true)))
        })
        .collect();
    let rows: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(i, seed, zero)| -> Result<Vec<Row>> {
            let big_n = g.big_n[i % g.big_n.len()];
            let m = g.m[i % g.m.len()];
            let n = g.n[i % g.n.len()];
            let s = RngStream::new(seed).derive(big_n as u64).derive(m as u64);
            let eps = if zero {
                0.0
            } else {
                cfg.eps * (1.0 - s.derive(0).rng().random::<f64>())
            };
            let spec = SimplexSpec::new(big_n)?;
            let ps = position_section(&spec, &random_section(&spec, m, false, &s.derive(1))?)?;
            let l1 = GrassmannPoint::new(ps.l.basis())?;
            let l2 = if zero {
                l1.clone()
            } else {
                l1.rotate(&random_rotation_near_identity(big_n + 1, eps, &s.derive(2)))
            };
            let sec = perturb_section_check(&l1, &l2, m, &opts, &s.derive(3))?;
            let f1 = random_subspace(m, n, &s.derive(4))?;
            let f2 = if zero {
                f1.clone()
            } else {
                f1.rotate(&random_rotation_near_identity(m, eps, &s.derive(5)))
            };
            let proj = perturb_projection_check(&ps.body(), &f1, &f2, &opts, &s.derive(6))?;
            Ok(vec![
                row(Kind::Section, seed, big_n, m, n, eps, sec),
                row(Kind::Projection, seed, big_n, m, n, eps, proj),
            ])
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = rows.into_iter().flatten().collect();
    for (kind, name) in [(Kind::Section, "section_bound"), (Kind::Projection, "projection_bound")] {
        let mine: Vec<&Row> = rows.iter().filter(|r| r.kind == kind && r.eps > 0.0).collect();
        let bad = mine.iter().filter(|r| !r.passed).count();
        let worst = mine.iter().map(|r| r.upper - r.bound).fold(f64::NEG_INFINITY, f64::max);
        rep.check(Check::theorem(
            name,
            bad == 0,
            format!(
                "{bad} of {} pairs above (1 + ε·m^1.5)² + {PERTURB_SLACK}; largest upper − bound = {worst:.4}",
                mine.len()
            ),
        ));
    }
    let zeros: Vec<&Row> = rows.iter().filter(|r| r.eps == 0.0).collect();
    let worst_zero = zeros.iter().map(|r| r.upper).fold(1.0, f64::max);
    rep.check(Check::theorem(
        "identity_pairs",
        worst_zero <= 1.0 + IDENTITY_TOL,
        format!("largest distance over {} ε = 0 pairs: {worst_zero:.6}", zeros.len()),
    ));
    let bad = rows.iter().filter(|r| r.lower > r.upper + 1e-9).count();
    rep.check(Check::theorem("lower_le_upper", bad == 0, format!("{bad} pairs with lower > upper")));
    rep.rows("perturbation", &rows)?;
    Ok(rep.finish())
}
