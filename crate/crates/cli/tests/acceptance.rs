//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs every experiment at full scale. Criteria listed in `KNOWN_RED` are
//! reported like the others but do not fail the process; the reason is
//! printed next to the verdict. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --test acceptance -- 5 6`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use convex_bm_cli::{run, Experiment, ExperimentConfig, Report, RunManifest};

/// Criteria that fail with a faithful implementation.
const KNOWN_RED: &[(u32, &str)] = &[
    (3, "the outer radius m^1.5 is exceeded by some m = 2 sections"),
    (9, "conservative volume-product bounds are 1 in both cells"),
];

struct Verdict {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Runs each experiment at most once.
struct Runs {
    done: BTreeMap<&'static str, (Report, Duration)>,
    dir: PathBuf,
}

impl Runs {
    fn get(&mut self, exp: Experiment) -> &(Report, Duration) {
        self.get_with(exp.name(), ExperimentConfig::default_for(exp))
    }

    fn get_with(&mut self, key: &'static str, cfg: ExperimentConfig) -> &(Report, Duration) {
        let dir = self.dir.join(key);
        self.done.entry(key).or_insert_with(|| {
            let t = Instant::now();
            let report = run(&cfg).unwrap_or_else(|e| panic!("{key}: {e:#}"));
            let elapsed = t.elapsed();
            report.write(&dir).expect("writing acceptance artifacts");
            (report, elapsed)
        })
    }
}

fn checks_pass(m: &RunManifest, names: &[&str]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in names {
        match m.check(n) {
            Some(c) => {
                ok &= c.passed;
                detail.push(format!("{n}: {}", c.detail));
            }
            None => {
                ok = false;
                detail.push(format!("{n}: missing"));
            }
        }
    }
    (ok, detail)
}

fn verdict(report: &Report, elapsed: Duration, budget_secs: u64, names: &[&str]) -> Verdict {
    let (ok, mut detail) = checks_pass(&report.manifest, names);
    let in_time = elapsed <= Duration::from_secs(budget_secs);
    if !in_time {
        detail.push(format!("runtime above {budget_secs}s"));
    }
    Verdict {
        pass: ok && in_time,
        detail: detail.join("; "),
        elapsed,
    }
}

fn c1(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::BallInside);
    let mut v = verdict(rep, *t, 120, &["ball_inclusion"]);
    // Self-test: a bound below 1 is beaten by every unit vector, since the
    // polytope lies in the unit ball.
    let mut cfg = ExperimentConfig::default_for(Experiment::BallInside);
    cfg.grid.d = vec![4];
    cfg.grid.big_m = vec![8];
    cfg.radius_factor = 0.1;
    let (st, _) = r.get_with("ball-inside-self-test", cfg);
    let caught = st.manifest.check("ball_inclusion").is_some_and(|c| !c.passed);
    v.pass &= caught;
    v.detail.push_str(&format!(
        "; self-test at 0.1x radius {}",
        if caught { "detects violations" } else { "MISSED" }
    ));
    v
}

fn c2(r: &mut Runs) -> Verdict {
    let mut cfg = ExperimentConfig::default_for(Experiment::BallInside);
    cfg.directions = 1;
    let (rep, t) = r.get_with("vertex-budget", cfg);
    verdict(rep, *t, 1, &["vertex_budget"])
}

fn c3(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::Sandwich);
    verdict(rep, *t, 300, &["inner_ball", "outer_ball", "symmetry"])
}

fn c4(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::Perturbation);
    verdict(rep, *t, 900, &["section_bound", "projection_bound", "identity_pairs"])
}

fn c5(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::Duality);
    verdict(rep, *t, 120, &["duality"])
}

fn c6(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::Calibration);
    verdict(rep, *t, 180, &["self_distance", "polygon_square", "cross_square"])
}

fn c7(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::Calibration);
    let mut v = verdict(
        rep,
        *t,
        600,
        &["netcert_confirmed", "netcert_identity_inconclusive", "lower_le_upper"],
    );
    let mut elapsed = v.elapsed;
    for exp in [
        Experiment::GluskinDistance,
        Experiment::SimplexApprox,
        Experiment::EuclidProjection,
        Experiment::Perturbation,
    ] {
        let cached = r.done.contains_key(exp.name());
        let (rep, t) = r.get(exp);
        if !cached {
            elapsed += *t;
        }
        let (ok, d) = checks_pass(&rep.manifest, &["lower_le_upper"]);
        v.pass &= ok;
        v.detail.push_str(&format!("; {exp} {}", d.join("")));
    }
    v.elapsed = elapsed;
    v
}

fn c8(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::VolumeBounds);
    verdict(rep, *t, 600, &["coverage", "c_hat_max", "c_hat_spread"])
}

fn c9(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::GluskinDistance);
    let mut v = verdict(rep, *t, 1800, &["median_lower_trend"]);
    match rep.manifest.fitted("a_hat") {
        Some(f) => v.detail.push_str(&format!("; a_hat {:.4} [{:.4}, {:.4}]", f.value, f.lo, f.hi)),
        None => {
            v.pass = false;
            v.detail.push_str("; a_hat missing");
        }
    }
    v
}

fn c10(r: &mut Runs) -> Verdict {
    let (rep, t) = r.get(Experiment::SimplexApprox);
    let mut v = verdict(rep, *t, 3600, &["min_distance_n3_N7", "min_distance_n3_N11"]);
    for name in ["c_hat_n3_N7", "c_hat_n3_N11"] {
        match rep.manifest.fitted(name) {
            Some(f) => v.detail.push_str(&format!("; {name} {:.4} [{:.4}, {:.4}]", f.value, f.lo, f.hi)),
            None => {
                v.pass = false;
                v.detail.push_str(&format!("; {name} missing"));
            }
        }
    }
    v
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(u32, &str, fn(&mut Runs) -> Verdict); 10] = [
        (1, "ball inclusion", c1),
        (2, "vertex budget", c2),
        (3, "sandwich", c3),
        (4, "perturbation", c4),
        (5, "duality", c5),
        (6, "estimator calibration", c6),
        (7, "lower-bound soundness", c7),
        (8, "volume suite", c8),
        (9, "gluskin trend", c9),
        (10, "simplex surrogate", c10),
    ];
    let mut runs = Runs {
        done: BTreeMap::new(),
        dir: PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance"),
    };
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let v = f(&mut runs);
        let known = KNOWN_RED.iter().find(|(k, _)| *k == n).map(|(_, why)| *why);
        let tag = match (v.pass, known) {
            (true, None) => "PASS".to_string(),
            (true, Some(_)) => "PASS (listed as known red)".to_string(),
            (false, Some(why)) => format!("FAIL (known: {why})"),
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
        };
        println!(
            "criterion {n:>2} [{name}]: {tag} in {:.1}s -- {}",
            v.elapsed.as_secs_f64(),
            v.detail
        );
    }
    println!("artifacts in {}", runs.dir.display());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
