//! Kolmogorov-Smirnov discrepancies between a sample and a reference CDF.

use crate::error::{Error, Result};

/// `sup_x |F_n(x) - F(x)|`, evaluated one-sidedly at every distinct sample
/// value `v`: `max(|F_n(v) - F(v)|, |F_n(v-) - F(v-)|)`, with `F(v-)` taken
/// at the next float below `v`. Ties are grouped, so lattice samples and
/// step-function references are handled as well as continuous ones.
pub fn ks_distance<F>(sample: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let sorted = sorted_finite(sample)?;
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let at = cdf(v)?;
        let before = cdf(v.next_down())?;
        d = d.max((j as f64 / n - at).abs()).max((i as f64 / n - before).abs());
        i = j;
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Largest `|F_n(x) - F(x)|` over a fixed evaluation grid.
pub fn grid_discrepancy<F>(sample: &[f64], grid: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let sorted = sorted_finite(sample)?;
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for &x in grid {
        let below = sorted.partition_point(|&v| v <= x) as f64;
        d = d.max((below / n - cdf(x)?).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov p-value for a distance `d` from `n` observations,
/// with Stephens' small-sample correction.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    if n == 0 || d <= 0.0 {
        return 1.0;
    }
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

fn sorted_finite(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::SampleSize {
            n: 0,
            reason: "empty sample".into(),
        });
    }
    if let Some(&bad) = sample.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sample",
            value: bad,
            reason: "values must be finite",
        });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted)
}
