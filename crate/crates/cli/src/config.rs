use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    BallInside,
    GluskinDistance,
    SimplexApprox,
    EuclidProjection,
    Perturbation,
    VolumeBounds,
    Sandwich,
    Duality,
    Calibration,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::BallInside,
        Experiment::GluskinDistance,
        Experiment::SimplexApprox,
        Experiment::EuclidProjection,
        Experiment::Perturbation,
        Experiment::VolumeBounds,
        Experiment::Sandwich,
        Experiment::Duality,
        Experiment::Calibration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::BallInside => "ball-inside",
            Experiment::GluskinDistance => "gluskin-distance",
            Experiment::SimplexApprox => "simplex-approx",
            Experiment::EuclidProjection => "euclid-projection",
            Experiment::Perturbation => "perturbation",
            Experiment::VolumeBounds => "volume-bounds",
            Experiment::Sandwich => "sandwich",
            Experiment::Duality => "duality",
            Experiment::Calibration => "calibration",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter ranges. Which fields an experiment reads is listed on
/// [`ExperimentConfig::default_for`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    pub d: Vec<usize>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    /// Explicit point counts; when empty, `M = f·d` for `f` in `m_factors`.
    #[serde(rename = "M")]
    pub big_m: Vec<usize>,
    #[serde(rename = "N")]
    pub big_n: Vec<usize>,
    pub m_factors: Vec<usize>,
}

impl Grid {
    /// `(d, M)` cells: explicit `M` values or multiples of `d`.
    pub fn dm_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &d in &self.d {
            if self.big_m.is_empty() {
                out.extend(self.m_factors.iter().map(|&f| (d, f * d)));
            } else {
                out.extend(self.big_m.iter().map(|&m| (d, m)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub grid: Grid,
    /// One replicate per seed; every random choice of a replicate is derived
    /// from `RngStream::new(seed)`.
    pub seeds: Vec<u64>,
    pub restarts: usize,
    /// Monte Carlo samples per volume estimate.
    pub samples: usize,
    /// Random directions per support or gauge check.
    pub directions: usize,
    /// Perturbation size `‖U − I‖` (upper end of the sampled range).
    pub eps: f64,
    /// Multiplier on the ball-inclusion bound; values below 1 make the
    /// harness self-test fail on purpose.
    pub radius_factor: f64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::default_for(Experiment::BallInside)
    }
}

fn range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).collect()
}

impl ExperimentConfig {
    /// Full-scale defaults.
    ///
    /// | experiment        | grid fields          | seeds |
    /// |-------------------|----------------------|-------|
    /// | ball-inside       | d, m_factors or M    | 20    |
    /// | gluskin-distance  | d, m_factors or M    | 30    |
    /// | simplex-approx    | n, N, m              | 200   |
    /// | euclid-projection | n, N                 | 20    |
    /// | perturbation      | m, n, N              | 50    |
    /// | volume-bounds     | d, m_factors or M    | 20    |
    /// | sandwich          | N, m                 | 100   |
    /// | duality           | N                    | 50    |
    /// | calibration       | none                 | 1     |
    pub fn default_for(experiment: Experiment) -> Self {
        let mut c = Self {
            experiment,
            grid: Grid::default(),
            seeds: range(0, 20),
            restarts: 8,
            samples: 20_000,
            directions: 1000,
            eps: 0.05,
            radius_factor: 1.0,
            out: None,
        };
        match experiment {
            Experiment::BallInside => {
                c.grid.d = (2..=10).collect();
                c.grid.m_factors = vec![2, 4, 8];
            }
            Experiment::GluskinDistance => {
                c.grid.d = vec![3, 6];
                c.grid.m_factors = vec![2];
                c.seeds = range(0, 30);
            }
            Experiment::SimplexApprox => {
                c.grid.n = vec![3];
                c.grid.big_n = vec![7, 11];
                c.grid.m = vec![3, 4, 5];
                c.seeds = range(0, 200);
            }
            Experiment::EuclidProjection => {
                c.grid.n = vec![2, 3];
                c.grid.big_n = vec![5, 10, 15];
            }
            Experiment::Perturbation => {
                c.grid.m = vec![3];
                c.grid.n = vec![2];
                c.grid.big_n = vec![6, 8, 10];
                c.seeds = range(0, 50);
            }
            Experiment::VolumeBounds => {
                c.grid.d = vec![1, 2, 3, 4, 5];
                c.grid.m_factors = vec![2, 5, 10, 25, 50];
            }
            Experiment::Sandwich => {
                c.grid.big_n = vec![4, 6, 8, 10, 12];
                c.grid.m = vec![2, 3, 4, 5];
                c.seeds = range(0, 100);
            }
            Experiment::Duality => {
                c.grid.big_n = vec![3, 4, 5, 6, 8];
                c.seeds = range(0, 50);
                c.directions = 200;
            }
            Experiment::Calibration => {
                c.seeds = vec![0];
                c.restarts = 16;
                c.directions = 2000;
            }
        }
        c
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Parses a possibly partial config; missing fields (also inside `grid`)
    /// take the defaults of the named experiment.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let given: serde_json::Value = serde_json::from_str(text)?;
        let Some(obj) = given.as_object() else {
            bail!("config must be a JSON object");
        };
        let experiment: Experiment = match obj.get("experiment") {
            Some(v) => serde_json::from_value(v.clone())?,
            None => bail!("config needs an \"experiment\" field"),
        };
        let mut base = serde_json::to_value(Self::default_for(experiment))?;
        let target = base.as_object_mut().expect("config serializes to an object");
        for (k, v) in obj {
            match (k.as_str(), v.as_object(), target.get_mut(k).and_then(|t| t.as_object_mut())) {
                ("grid", Some(g), Some(tg)) => {
                    for (gk, gv) in g {
                        tg.insert(gk.clone(), gv.clone());
                    }
                }
                _ => {
                    target.insert(k.clone(), v.clone());
                }
            }
        }
        Ok(serde_json::from_value(base)?)
    }

    /// Replaces the seed list by `base, base+1, …` of the same length.
    pub fn shift_seeds(&mut self, base: u64) {
        let len = self.seeds.len().max(1) as u64;
        self.seeds = (base..base + len).collect();
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            bail!("seed list is empty");
        }
        if self.restarts == 0 || self.samples == 0 || self.directions == 0 {
            bail!("restarts, samples and directions must be positive");
        }
        if !(0.0..=2.0).contains(&self.eps) {
            bail!("eps {} outside [0, 2]", self.eps);
        }
        if !(self.radius_factor > 0.0) {
            bail!("radius_factor must be positive");
        }
        let g = &self.grid;
        let all_le = |v: &[usize], lo: usize, hi: usize| v.iter().all(|&x| x >= lo && x <= hi);
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { bail!("{}: {what}", self.experiment) };
        match self.experiment {
            Experiment::BallInside => {
                need(!g.d.is_empty() && all_le(&g.d, 1, 10), "grid.d must be nonempty within 1..=10")?;
                need(!g.dm_cells().is_empty(), "no (d, M) cells")?;
            }
            Experiment::GluskinDistance => {
                need(!g.d.is_empty() && all_le(&g.d, 1, 6), "grid.d must be nonempty within 1..=6")?;
                need(!g.dm_cells().is_empty(), "no (d, M) cells")?;
            }
            Experiment::SimplexApprox => {
                need(!g.n.is_empty() && !g.m.is_empty() && !g.big_n.is_empty(), "grid.n, grid.m, grid.N required")?;
                let nmax = *g.n.iter().max().unwrap();
                need(all_le(&g.m, nmax, 5), "need n <= m <= 5")?;
                need(all_le(&g.n, 1, 5), "need 1 <= n <= 5")?;
                need(all_le(&g.big_n, *g.m.iter().min().unwrap(), 12), "need m <= N <= 12")?;
            }
            Experiment::EuclidProjection => {
                need(!g.n.is_empty() && all_le(&g.n, 2, 3), "grid.n must be within {2, 3}")?;
                need(!g.big_n.is_empty() && all_le(&g.big_n, 3, 15), "grid.N must be within 3..=15")?;
            }
            Experiment::Perturbation => {
                need(!g.m.is_empty() && all_le(&g.m, 2, 5), "grid.m must be within 2..=5")?;
                need(!g.n.is_empty() && all_le(&g.n, 1, 4), "grid.n must be within 1..=4")?;
                need(g.n.iter().all(|&n| g.m.iter().all(|&m| n < m)), "need n < m")?;
                need(!g.big_n.is_empty() && all_le(&g.big_n, 2, 12), "grid.N must be within 2..=12")?;
                need(g.big_n.iter().all(|&nn| g.m.iter().all(|&m| m <= nn)), "need m <= N")?;
            }
            Experiment::VolumeBounds => {
                need(!g.d.is_empty() && all_le(&g.d, 1, 5), "grid.d must be within 1..=5")?;
            }
            Experiment::Sandwich => {
                need(!g.m.is_empty() && all_le(&g.m, 1, 5), "grid.m must be within 1..=5")?;
                need(!g.big_n.is_empty() && all_le(&g.big_n, 1, 12), "grid.N must be within 1..=12")?;
            }
            Experiment::Duality => {
                need(!g.big_n.is_empty() && all_le(&g.big_n, 2, 12), "grid.N must be within 2..=12")?;
            }
            Experiment::Calibration => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for e in Experiment::ALL {
            ExperimentConfig::default_for(e).validate().unwrap();
        }
    }

    #[test]
    fn json_round_trip_uses_upper_case_grid_names() {
        let c = ExperimentConfig::default_for(Experiment::SimplexApprox);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"N\":[7,11]"));
        assert!(s.contains("\"experiment\":\"simplex-approx\""));
        let back: ExperimentConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c = ExperimentConfig::from_json_str(r#"{"experiment":"simplex-approx","seeds":[7],"grid":{"N":[9]}}"#).unwrap();
        assert_eq!(c.seeds, vec![7]);
        assert_eq!(c.grid.big_n, vec![9]);
        assert_eq!(c.grid.m, vec![3, 4, 5]);
        assert!(ExperimentConfig::from_json_str(r#"{"seeds":[1]}"#).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = ExperimentConfig::default_for(Experiment::BallInside);
        c.seeds.clear();
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default_for(Experiment::BallInside);
        c.grid.d = vec![11];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default_for(Experiment::SimplexApprox);
        c.grid.m = vec![6];
        assert!(c.validate().is_err());
    }

    #[test]
    fn shift_keeps_length() {
        let mut c = ExperimentConfig::default_for(Experiment::Duality);
        c.shift_seeds(100);
        assert_eq!(c.seeds.len(), 50);
        assert_eq!(c.seeds[0], 100);
    }
}
