use anyhow::Result;
use convex_bm::bm::{bm_lower_asymmetry, bm_upper};
use convex_bm::bodies::{AffineSubspace, PolyBody};
use convex_bm::kernel::RngStream;
use convex_bm::nets::{gluskin_build, random_subspace, GluskinSpec};
use convex_bm::simplex::{position_section, project_section, random_section, SimplexSpec};
use convex_bm::{Matrix, Vector};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, ReportBuilder};
use crate::stats::{bootstrap, min};

/// Smallest sampled distance the desk run is expected to clear.
pub const MIN_DISTANCE_THRESHOLD: f64 = 1.2;

/// `(M_desk, M_nominal)` with `M_nominal = ⌈8N²·ln(N^{3/2})/n⌉` and
/// `M_desk = min(M_nominal, 4n²)` capped to `⌊e^n⌋` and raised to `2n`.
pub fn desk_m(n: usize, big_n: usize) -> (usize, usize) {
    let nf = big_n as f64;
    let nominal = (8.0 * nf * nf * nf.powf(1.5).ln() / n as f64).ceil() as usize;
    let cap = (n as f64).exp().floor() as usize;
    (nominal.min(4 * n * n).min(cap).max(2 * n), nominal)
}

/// `√(n / ln(2N·ln(2N)/n))`.
fn shape(n: usize, big_n: usize) -> f64 {
    let nf = 2.0 * big_n as f64;
    (n as f64 / (nf * nf.ln() / n as f64).ln()).sqrt()
}

/// Alternative shape `√(n / ln(2Nm·ln(2m)/n²))`.
fn shape_alt(n: usize, big_n: usize, m: usize) -> f64 {
    let (nf, mf, kf) = (big_n as f64, m as f64, n as f64);
    (kf / (2.0 * nf * mf * (2.0 * mf).ln() / (kf * kf)).ln()).sqrt()
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    m: usize,
    seed: u64,
    /// Simplex the section was drawn in; smaller than `N` for sections
    /// lying in a face.
    drawn_in: usize,
    projected_vertices: usize,
    upper: f64,
    lower: f64,
    c_hat: f64,
    c_hat_alt: f64,
    error: String,
}

/// Zero-pads a section of `Δ_{n0}` to a section of `Δ_n` inside the face
/// spanned by the first `n0 + 1` vertices.
fn embed(f: &AffineSubspace, n: usize) -> Result<AffineSubspace> {
    let (rows, k) = (f.basis().nrows(), f.basis().ncols());
    let mut offset = Vector::zeros(n + 1);
    offset.rows_mut(0, rows).copy_from(f.offset());
    let mut basis = Matrix::zeros(n + 1, k);
    basis.view_mut((0, 0), (rows, k)).copy_from(f.basis());
    Ok(AffineSubspace::new(offset, basis)?)
}

fn sample(b: &PolyBody, n: usize, big_n: usize, drawn_in: usize, m: usize, seed: u64, restarts: usize) -> Result<Row> {
    let s = RngStream::new(seed).derive(drawn_in as u64).derive(m as u64);
    let mut row = Row {
        n,
        big_n,
        m,
        seed,
        drawn_in,
        projected_vertices: 0,
        upper: f64::NAN,
        lower: f64::NAN,
        c_hat: f64::NAN,
        c_hat_alt: f64::NAN,
        error: String::new(),
    };
    let f = random_section(&SimplexSpec::new(drawn_in)?, m, false, &s.derive(0))?;
    let f = if drawn_in == big_n { f } else { embed(&f, big_n)? };
    let ps = match position_section(&SimplexSpec::new(big_n)?, &f) {
        Ok(ps) => ps,
        Err(e) => {
            row.error = e.to_string();
            return Ok(row);
        }
    };
    let e = AffineSubspace::linear(random_subspace(m, n, &s.derive(1))?.basis().clone())?;
    let pk = project_section(&ps.body(), &e)?;
    let q = PolyBody::from_vpolytope(&pk.body)?;
    row.projected_vertices = pk.body.num_points();
    let est = bm_upper(b, &q, restarts, &s.derive(2))?;
    row.upper = est.upper;
    row.lower = bm_lower_asymmetry(b, &q)?;
    row.c_hat = est.upper / shape(n, big_n);
    row.c_hat_alt = est.upper / shape_alt(n, big_n, m);
    Ok(row)
}

/// Fixed Gluskin body `B` against `P_E K` for random sections `K` of `Δ_N`
/// (positioned) and random projections `E`; the sampled minimum stands in
/// for the minimum over all sections and projections.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = ReportBuilder::new(cfg);
    let mut big_ns = cfg.grid.big_n.clone();
    big_ns.sort_unstable();
    big_ns.dedup();
    let mut rows: Vec<Row> = Vec::new();
    for &n in &cfg.grid.n {
        let ms: Vec<usize> = cfg.grid.m.iter().copied().filter(|&m| m >= n).collect();
        for &big_n in &big_ns {
            let (m_desk, nominal) = desk_m(n, big_n);
            rep.note(format!("n={n}, N={big_n}: M_desk = {m_desk} (nominal {nominal})"));
            let body_stream = RngStream::new(cfg.seeds[0]).derive(0xB0D7).derive(n as u64).derive(m_desk as u64);
            let b = PolyBody::from_vpolytope(&gluskin_build(&GluskinSpec::new(n, m_desk, body_stream)?)?)?;
            let ms: Vec<usize> = ms.iter().copied().filter(|&m| m <= big_n).collect();
            // Sections drawn in this simplex and in every smaller one of the grid.
            let jobs: Vec<(usize, usize, u64)> = big_ns
                .iter()
                .filter(|&&n0| n0 <= big_n)
                .flat_map(|&n0| {
                    let ms0: Vec<usize> = ms.iter().copied().filter(|&m| m <= n0).collect();
                    if ms0.is_empty() {
                        return Vec::new();
                    }
                    cfg.seeds
                        .iter()
                        .enumerate()
                        .map(|(i, &seed)| (n0, ms0[i % ms0.len()], seed))
                        .collect::<Vec<_>>()
                })
                .collect();
            let part: Vec<Row> = jobs
                .par_iter()
                .map(|&(n0, m, seed)| sample(&b, n, big_n, n0, m, seed, cfg.restarts))
                .collect::<Result<_>>()?;
            rows.extend(part);
        }
    }
    let ok: Vec<&Row> = rows.iter().filter(|r| r.error.is_empty()).collect();
    let failed = rows.len() - ok.len();
    if failed > 0 {
        rep.note(format!("{failed} sections could not be positioned (see error column)"));
    }
    let below = ok.iter().filter(|r| r.upper < 1.0 - 1e-9).count();
    rep.check(Check::theorem("distance_ge_1", below == 0, format!("{below} distances below 1")));
    let bad = ok.iter().filter(|r| r.lower > r.upper + 1e-9).count();
    rep.check(Check::theorem(
        "lower_le_upper",
        bad == 0,
        format!("{bad} of {} samples with lower > upper", ok.len()),
    ));
    for &n in &cfg.grid.n {
        for &big_n in &big_ns {
            let own: Vec<f64> = ok
                .iter()
                .filter(|r| r.n == n && r.big_n == big_n && r.drawn_in == big_n)
                .map(|r| r.upper)
                .collect();
            let all: Vec<f64> = ok.iter().filter(|r| r.n == n && r.big_n == big_n).map(|r| r.upper).collect();
            if all.is_empty() {
                continue;
            }
            let lo = min(&all);
            rep.check(Check::trend(
                &format!("min_distance_n{n}_N{big_n}"),
                lo >= MIN_DISTANCE_THRESHOLD,
                format!("min over {} samples = {lo:.4} (threshold {MIN_DISTANCE_THRESHOLD})", all.len()),
            ));
            let sh = shape(n, big_n);
            rep.fitted(bootstrap(
                &format!("c_hat_n{n}_N{big_n}"),
                &[own.clone()],
                |g| min(&g[0]) / sh,
                &RngStream::new(cfg.seeds[0]).derive(0xC0).derive(big_n as u64),
            ));
            for &n0 in big_ns.iter().filter(|&&n0| n0 < big_n) {
                let sub: Vec<f64> = ok
                    .iter()
                    .filter(|r| r.n == n && r.big_n == big_n && r.drawn_in == n0)
                    .map(|r| r.upper)
                    .collect();
                let direct: Vec<f64> = ok
                    .iter()
                    .filter(|r| r.n == n && r.big_n == n0 && r.drawn_in == n0)
                    .map(|r| r.upper)
                    .collect();
                rep.check(Check::trend(
                    &format!("nesting_n{n}_N{n0}_in_N{big_n}"),
                    min(&sub) >= lo,
                    format!(
                        "min over N={n0}-compatible subset {:.4} >= min over all N={big_n} samples {lo:.4}; same sections run directly at N={n0}: {:.4}",
                        min(&sub),
                        min(&direct)
                    ),
                ));
            }
        }
    }
    rep.rows("simplex-approx", &rows)?;
    Ok(rep.finish())
}
