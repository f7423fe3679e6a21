use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use convex_bm::bm::{bm_lower_asymmetry, bm_lower_volume, bm_upper, LowerMethod};
use convex_bm::bodies::{Body, PolyBody, PolytopeJson};
use convex_bm::kernel::RngStream;
use convex_bm::nets::{gluskin_build, GluskinSpec};
use convex_bm_cli::{run, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "convex-bm", version, about = "Banach-Mazur distance experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball inclusion and vertex budget of Gluskin polytopes
    BallInside(RunArgs),
    /// Distances between independent Gluskin polytopes
    GluskinDistance(RunArgs),
    /// Gluskin body against projections of simplex sections
    SimplexApprox(RunArgs),
    /// Euclidean ball against random projections of the simplex
    EuclidProjection(RunArgs),
    /// Distance bounds under small rotations of sections and projections
    Perturbation(RunArgs),
    /// Volume coverage and the absolute-convex-hull volume fit
    VolumeBounds(RunArgs),
    /// Inner/outer ball and symmetry of positioned simplex sections
    Sandwich(RunArgs),
    /// Section of a projection against projection of a section
    Duality(RunArgs),
    /// Estimator calibration and net-certificate soundness
    Calibration(RunArgs),
    /// Write a Gluskin polytope as polytope JSON
    ExportGluskin {
        #[arg(long)]
        d: usize,
        #[arg(long = "points", short = 'M')]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the distance between two bodies given as polytope JSON
    Distance {
        k1: PathBuf,
        k2: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON config; missing fields take the experiment's defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; replicates use seed, seed+1, …
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV tables and the manifest
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
}

fn run_experiment(exp: Experiment, args: &RunArgs) -> Result<bool> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default_for(exp),
    };
    if cfg.experiment != exp {
        bail!("config is for {} but the subcommand is {exp}", cfg.experiment);
    }
    if let Some(s) = args.seed {
        cfg.shift_seeds(s);
    }
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(r) = args.restarts {
        cfg.restarts = r;
    }
    if let Some(o) = &args.out {
        cfg.out = Some(o.clone());
    }
    let report = run(&cfg)?;
    for line in report.manifest.summary_lines() {
        eprintln!("{line}");
    }
    if let Some(dir) = &cfg.out {
        for p in report.write(dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    eprintln!("{exp}: {:.1}s", report.manifest.wall_time_secs);
    Ok(report.manifest.passed())
}

fn load_body(p: &PathBuf) -> Result<Body> {
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Ok(PolytopeJson::parse(&text)?.to_body()?)
}

fn distance(k1: &PathBuf, k2: &PathBuf, seed: u64, restarts: usize, samples: usize) -> Result<()> {
    let (b1, b2) = (load_body(k1)?, load_body(k2)?);
    let (p1, p2) = (PolyBody::from_body(&b1)?, PolyBody::from_body(&b2)?);
    let s = RngStream::new(seed);
    let mut est = bm_upper(&p1, &p2, restarts, &s.derive(0))?;
    est.seed = Some(seed);
    let sym = p1.is_symmetric() && p2.is_symmetric();
    if sym && p1.dim() <= convex_bm::volume::VOLUME_DIM_CAP {
        let lb = bm_lower_volume(p1.vpolytope(), p2.vpolytope(), samples, &s.derive(1))?;
        est = est.with_lower(lb.value, LowerMethod::VolumeProduct);
    } else if p1.facets().is_some() && p2.facets().is_some() {
        let lb = bm_lower_asymmetry(&p1, &p2)?;
        est = est.with_lower(lb, LowerMethod::Asymmetry);
    }
    println!("{}", serde_json::to_string_pretty(&est)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exp = match &cli.command {
        Command::BallInside(a) => Some((Experiment::BallInside, a)),
        Command::GluskinDistance(a) => Some((Experiment::GluskinDistance, a)),
        Command::SimplexApprox(a) => Some((Experiment::SimplexApprox, a)),
        Command::EuclidProjection(a) => Some((Experiment::EuclidProjection, a)),
        Command::Perturbation(a) => Some((Experiment::Perturbation, a)),
        Command::VolumeBounds(a) => Some((Experiment::VolumeBounds, a)),
        Command::Sandwich(a) => Some((Experiment::Sandwich, a)),
        Command::Duality(a) => Some((Experiment::Duality, a)),
        Command::Calibration(a) => Some((Experiment::Calibration, a)),
        _ => None,
    };
    let result = match (exp, &cli.command) {
        (Some((e, a)), _) => run_experiment(e, a).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }),
        (None, Command::ExportGluskin { d, m, seed, out }) => (|| -> Result<ExitCode> {
            let v = gluskin_build(&GluskinSpec::new(*d, *m, RngStream::new(*seed))?)?;
            let json = PolytopeJson::from_vpolytope(&v).to_json();
            match out {
                Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
                None => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        })(),
        (None, Command::Distance { k1, k2, seed, restarts, samples }) => {
            distance(k1, k2, *seed, *restarts, *samples).map(|_| ExitCode::SUCCESS)
        }
        (None, _) => unreachable!("experiment subcommands are matched above"),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
