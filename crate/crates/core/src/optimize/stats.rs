use serde::Serialize;

use crate::{Error, Result};

/// Population moments and linearly interpolated quartiles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistributionStats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

impl DistributionStats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

/// Quantile of sorted data at position q(n − 1).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize_distribution(values: &[f64]) -> Result<DistributionStats> {
    if values.is_empty() {
        return Err(Error::Empty("fidelity list"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fidelity list".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(DistributionStats {
        count: s.len(),
        mean,
        std: var.sqrt(),
        q1: quantile(&s, 0.25),
        median: quantile(&s, 0.5),
        q3: quantile(&s, 0.75),
        min: s[0],
        max: s[s.len() - 1],
    })
}
