use convex_bm::kernel::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Bootstrap resamples behind every reported interval.
pub const BOOTSTRAP_RESAMPLES: usize = 2000;

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Linear-interpolated quantile; NaN for an empty slice.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Slope of the least-squares line through the origin.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    sxy / sxx
}

/// Point value with a 95% percentile-bootstrap interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fitted {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Resamples each group with replacement and re-evaluates `stat` on the
/// resampled groups.
pub fn bootstrap<F>(name: &str, groups: &[Vec<f64>], stat: F, rng: &RngStream) -> Fitted
where
    F: Fn(&[Vec<f64>]) -> f64,
{
    let value = stat(groups);
    let mut g = rng.rng();
    let mut reps = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let resampled: Vec<Vec<f64>> = groups
            .iter()
            .map(|grp| (0..grp.len()).map(|_| grp[g.random_range(0..grp.len())]).collect())
            .collect();
        reps.push(stat(&resampled));
    }
    Fitted {
        name: name.to_string(),
        value,
        lo: quantile(&reps, 0.025),
        hi: quantile(&reps, 0.975),
    }
}
