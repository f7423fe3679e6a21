//! One module per experiment; each turns an [`ExperimentConfig`] into a
//! [`Report`].

mod ball_inside;
mod calibration;
mod duality;
mod euclid;
mod gluskin;
mod perturbation;
mod sandwich;
mod simplex_approx;
mod volume_bounds;

use anyhow::Result;

use crate::config::{Experiment, ExperimentConfig};
use crate::report::Report;

pub use simplex_approx::desk_m;

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::BallInside => ball_inside::run(cfg),
        Experiment::GluskinDistance => gluskin::run(cfg),
        Experiment::SimplexApprox => simplex_approx::run(cfg),
        Experiment::EuclidProjection => euclid::run(cfg),
        Experiment::Perturbation => perturbation::run(cfg),
        Experiment::VolumeBounds => volume_bounds::run(cfg),
        Experiment::Sandwich => sandwich::run(cfg),
        Experiment::Duality => duality::run(cfg),
        Experiment::Calibration => calibration::run(cfg),
    }
}

/// `2d ≤ M ≤ e^d`, the range where Gluskin polytopes are defined.
pub(crate) fn gluskin_cell_ok(d: usize, m: usize) -> bool {
    m >= 2 * d && (m as f64) <= (d as f64).exp()
}
