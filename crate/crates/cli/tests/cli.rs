use std::process::Command;

use convex_bm_cli::{run, Experiment, ExperimentConfig};

fn small(exp: Experiment) -> ExperimentConfig {
    let mut c = ExperimentConfig::default_for(exp);
    c.seeds = vec![1, 2];
    c.restarts = 2;
    c.samples = 2000;
    c.directions = 50;
    match exp {
        Experiment::BallInside => {
            c.grid.d = vec![3, 4];
            c.grid.m_factors = vec![2];
        }
        Experiment::GluskinDistance => c.grid.d = vec![3],
        Experiment::SimplexApprox => {
            c.grid.big_n = vec![4, 5];
            c.grid.m = vec![3];
        }
        Experiment::EuclidProjection => {
            c.grid.n = vec![2];
            c.grid.big_n = vec![4, 6];
        }
        Experiment::Perturbation => c.grid.big_n = vec![5],
        Experiment::VolumeBounds => {
            c.grid.d = vec![2, 3];
            c.grid.m_factors = vec![2, 5];
        }
        Experiment::Sandwich => {
            c.grid.big_n = vec![5];
            c.grid.m = vec![3];
        }
        Experiment::Duality | Experiment::Calibration => {}
    }
    c
}

#[test]
fn every_experiment_runs_small() {
    for exp in Experiment::ALL {
        if exp == Experiment::Calibration {
            continue;
        }
        let rep = run(&small(exp)).unwrap_or_else(|e| panic!("{exp}: {e:#}"));
        assert!(!rep.manifest.cells.is_empty(), "{exp}");
        assert!(!rep.tables.is_empty(), "{exp}");
        for c in rep.manifest.checks.iter().filter(|c| c.theorem_backed) {
            assert!(c.passed, "{exp}: {} {}", c.name, c.detail);
        }
    }
}

#[test]
fn runs_are_reproducible() {
    for exp in [Experiment::BallInside, Experiment::SimplexApprox, Experiment::VolumeBounds] {
        let cfg = small(exp);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.manifest.results(), b.manifest.results(), "{exp}");
        assert_eq!(a.tables, b.tables, "{exp}");
    }
}

#[test]
fn shrunken_radius_is_caught() {
    let mut cfg = small(Experiment::BallInside);
    cfg.radius_factor = 0.1;
    let rep = run(&cfg).unwrap();
    assert!(!rep.manifest.passed());
    assert!(!rep.manifest.check("ball_inclusion").unwrap().passed);
}

#[test]
fn manifest_round_trips() {
    let rep = run(&small(Experiment::Duality)).unwrap();
    let text = serde_json::to_string(&rep.manifest).unwrap();
    let back: convex_bm_cli::RunManifest = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep.manifest);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_convex-bm"))
}

#[test]
fn binary_writes_tables_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, r#"{"experiment":"duality","seeds":[3,4,5],"directions":40}"#).unwrap();
    let out = dir.path().join("out");
    let st = bin()
        .args(["duality", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .args(["--threads", "2"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("duality.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("seed,N,dim_e"));
    assert_eq!(lines.count(), 3);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("duality.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["directions"], 40);
    assert_eq!(m["checks"][0]["passed"], true);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment":"ball-inside","grid":{"d":[4],"M":[8]},"seeds":[0],"directions":20,"radius_factor":0.1}"#)
        .unwrap();
    let st = bin().args(["ball-inside", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(st.code(), Some(1));
    let st = bin().args(["sandwich", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["duality", "--seed", "9", "--samples", "10"]).status().unwrap();
    assert_eq!(st.code(), Some(0));
}

#[test]
fn export_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (p, seed) in [(&a, "1"), (&b, "2")] {
        let st = bin()
            .args(["export-gluskin", "--d", "3", "-M", "6", "--seed", seed, "--out"])
            .arg(p)
            .status()
            .unwrap();
        assert!(st.success());
    }
    let out = bin()
        .arg("distance")
        .arg(&a)
        .arg(&b)
        .args(["--restarts", "2", "--samples", "2000"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let est: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (up, lo) = (est["upper"].as_f64().unwrap(), est["lower"].as_f64().unwrap());
    assert!(lo >= 1.0 && lo <= up, "{lo} {up}");
}
