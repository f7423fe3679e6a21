use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::stats::Fitted;

/// One pass/fail statement about a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Backed by an inequality that must hold exactly; these decide the exit
    /// code. Trend and calibration checks are reported only.
    pub theorem_backed: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn theorem(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            theorem_backed: true,
            passed,
            detail: detail.into(),
        }
    }

    pub fn trend(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            theorem_backed: false,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub version: String,
    /// Per-cell results; identical across re-runs of the same config.
    pub cells: Vec<serde_json::Value>,
    pub checks: Vec<Check>,
    pub fitted: Vec<Fitted>,
    /// Deviations from the nominal parameters (skipped cells, capped sizes).
    pub notes: Vec<String>,
    pub wall_time_secs: f64,
}

impl RunManifest {
    /// True iff every theorem-backed check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.theorem_backed).all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fitted(&self, name: &str) -> Option<&Fitted> {
        self.fitted.iter().find(|f| f.name == name)
    }

    /// The run's results without timing, for reproducibility comparisons.
    pub fn results(&self) -> (&[serde_json::Value], &[Check], &[Fitted]) {
        (&self.cells, &self.checks, &self.fitted)
    }
}

/// A CSV table, serialized as it will be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub csv: String,
}

impl Table {
    pub fn from_rows<R: Serialize>(name: &str, rows: &[R]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv flush: {e}"))?;
        Ok(Self {
            name: name.into(),
            csv: String::from_utf8(bytes)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub manifest: RunManifest,
    pub tables: Vec<Table>,
}

impl Report {
    /// Writes `<name>.csv` per table and `<experiment>.manifest.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        for t in &self.tables {
            let p = dir.join(format!("{}.csv", t.name));
            std::fs::write(&p, &t.csv).with_context(|| format!("writing {}", p.display()))?;
            written.push(p);
        }
        let p = dir.join(format!("{}.manifest.json", self.manifest.config.experiment));
        std::fs::write(&p, serde_json::to_string_pretty(&self.manifest)?)
            .with_context(|| format!("writing {}", p.display()))?;
        written.push(p);
        Ok(written)
    }
}

/// Collects the pieces of a run into a [`Report`].
pub struct ReportBuilder {
    config: ExperimentConfig,
    start: Instant,
    cells: Vec<serde_json::Value>,
    tables: Vec<Table>,
    checks: Vec<Check>,
    fitted: Vec<Fitted>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            start: Instant::now(),
            cells: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
            fitted: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Adds rows as manifest cells and as the CSV table `name`.
    pub fn rows<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<()> {
        for r in rows {
            self.cells.push(serde_json::to_value(r)?);
        }
        self.tables.push(Table::from_rows(name, rows)?);
        Ok(())
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn fitted(&mut self, f: Fitted) {
        self.fitted.push(f);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn finish(self) -> Report {
        Report {
            manifest: RunManifest {
                config: self.config,
                version: env!("CARGO_PKG_VERSION").to_string(),
                cells: self.cells,
                checks: self.checks,
                fitted: self.fitted,
                notes: self.notes,
                wall_time_secs: self.start.elapsed().as_secs_f64(),
            },
            tables: self.tables,
        }
    }
}

impl RunManifest {
    /// One line per check and fitted constant.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.checks {
            let kind = if c.theorem_backed { "check" } else { "trend" };
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            out.push(format!("{kind} {:<32} {verdict}  {}", c.name, c.detail));
        }
        for f in &self.fitted {
            out.push(format!("fit   {:<32} {:.4} [{:.4}, {:.4}]", f.name, f.value, f.lo, f.hi));
        }
        for n in &self.notes {
            out.push(format!("note  {n}"));
        }
        out
    }
}
