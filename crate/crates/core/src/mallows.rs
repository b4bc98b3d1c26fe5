//! Mallows (Wasserstein) distances in one dimension.
//!
//! In one dimension the optimal coupling is the comonotone one, so
//! `d_r^r(F, G) = ∫_0^1 |F^{-1}(u) - G^{-1}(u)|^r du`.

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::stable::StableParams;
use serde::{Deserialize, Serialize};

/// A finite sample, kept sorted; it stands for its empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    sorted: Vec<f64>,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SampleSize {
                n: 0,
                reason: "empirical sample is empty".into(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sample",
                value: bad,
                reason: "values must be finite",
            });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Left-continuous inverse of the empirical CDF, `u ∈ (0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.sorted.len();
        let i = ((u * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[i - 1]
    }
}

fn check_order(r: f64) -> Result<f64> {
    if r.is_finite() && r >= 1.0 {
        Ok(r)
    } else {
        Err(Error::Domain {
            value: r,
            reason: "the Mallows order r must be finite and >= 1",
        })
    }
}

/// `(Σ w_i |d_i|^r / Σ w_i)^{1/r}`, scaled by the largest `|d_i|`. With
/// integer weights a constant difference comes back bit-for-bit.
fn power_mean<I: Iterator<Item = (f64, f64)> + Clone>(terms: I, r: f64) -> f64 {
    let top = terms.clone().map(|(_, d)| d.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let total: f64 = terms.clone().map(|(w, _)| w).sum();
    let s: f64 = terms.map(|(w, d)| w * (d.abs() / top).powf(r)).sum();
    top * (s / total).powf(1.0 / r)
}

/// `d_r` between two empirical laws. Equal sizes pair order statistics; for
/// unequal sizes the two step quantile functions are integrated exactly over
/// their merged breakpoints `{i/n} ∪ {j/m}`.
pub fn mallows_empirical(f: &EmpiricalSample, g: &EmpiricalSample, r: f64) -> Result<f64> {
    let r = check_order(r)?;
    let (a, b) = (f.sorted(), g.sorted());
    let (n, m) = (a.len(), b.len());
    if n == m {
        return Ok(power_mean(a.iter().zip(b).map(|(x, y)| (1.0, x - y)), r));
    }
    // Positions on the common denominator n·m.
    let mut segments = Vec::with_capacity(n + m);
    let (mut i, mut j, mut at) = (0usize, 0usize, 0u128);
    while i < n && j < m {
        let end_f = (i as u128 + 1) * m as u128;
        let end_g = (j as u128 + 1) * n as u128;
        let end = end_f.min(end_g);
        segments.push(((end - at) as f64, a[i] - b[j]));
        at = end;
        if end == end_f {
            i += 1;
        }
        if end == end_g {
            j += 1;
        }
    }
    Ok(power_mean(segments.iter().copied(), r))
}

/// Quantile-grid estimate of `d_r` between a sample and a continuous law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MallowsEstimate {
    pub distance: f64,
    pub r: f64,
    pub grid_points: usize,
    /// Probability mass left out at each end, `1/(2m)`.
    pub truncation: f64,
    /// Set when `u·|F^{-1}(u) - G^{-1}(u)|^r` does not shrink towards either
    /// end of the grid, i.e. the untruncated integral is likely infinite.
    pub tail_divergence: bool,
}

/// Midpoint rule on `u_i = (i + 1/2)/m`, which covers `[δ, 1-δ]` with
/// `δ = 1/(2m)`; `quantile` is the reference inverse CDF.
pub fn mallows_to_quantile_fn<Q>(sample: &EmpiricalSample, quantile: Q, r: f64, m: usize) -> Result<MallowsEstimate>
where
    Q: Fn(f64) -> Result<f64>,
{
    let r = check_order(r)?;
    let grid: Vec<f64> = midpoints(m)?;
    let reference = grid.iter().map(|&u| quantile(u)).collect::<Result<Vec<_>>>()?;
    Ok(estimate_on_grid(sample, &grid, &reference, r))
}

/// [`mallows_to_quantile_fn`] against a symmetric stable target, using
/// `G^{-1}(1-u) = 2μ - G^{-1}(u)` to halve the quantile evaluations.
pub fn mallows_to_stable(
    sample: &EmpiricalSample,
    target: &StableParams,
    r: f64,
    m: usize,
    quad: &QuadratureConfig,
) -> Result<MallowsEstimate> {
    let r = check_order(r)?;
    let grid = midpoints(m)?;
    let mut reference = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let q = target.quantile(grid[i], quad)?;
        reference[i] = q;
        reference[m - 1 - i] = 2.0 * target.mu() - q;
    }
    if m % 2 == 1 {
        reference[m / 2] = target.mu();
    }
    Ok(estimate_on_grid(sample, &grid, &reference, r))
}

fn midpoints(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::SampleSize {
            n: m,
            reason: "the quantile grid needs at least 2 points".into(),
        });
    }
    Ok((0..m).map(|i| (i as f64 + 0.5) / m as f64).collect())
}

fn estimate_on_grid(sample: &EmpiricalSample, grid: &[f64], reference: &[f64], r: f64) -> MallowsEstimate {
    let m = grid.len();
    let diffs: Vec<f64> = grid
        .iter()
        .zip(reference)
        .map(|(&u, &q)| sample.quantile(u) - q)
        .collect();
    let distance = power_mean(diffs.iter().map(|&d| (1.0, d)), r);

    let weighted = |i: usize| {
        let u = grid[i].min(1.0 - grid[i]);
        u * diffs[i].abs().powf(r)
    };
    let inner = (m / 100).max(1).min(m / 2);
    let tail_divergence = m >= 4
        && (weighted(0) >= weighted(inner) && weighted(0) > 0.0
            || weighted(m - 1) >= weighted(m - 1 - inner) && weighted(m - 1) > 0.0);

    MallowsEstimate {
        distance,
        r,
        grid_points: m,
        truncation: 0.5 / m as f64,
        tail_divergence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: &[f64]) -> EmpiricalSample {
        EmpiricalSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hand_examples() {
        assert_eq!(mallows_empirical(&es(&[0.0, 1.0]), &es(&[3.0, 0.0]), 1.0).unwrap(), 1.0);
        let f = es(&[0.3, -2.0, 7.0]);
        assert_eq!(mallows_empirical(&f, &f, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn pure_shift_is_exact_on_dyadic_data() {
        let f = es(&[0.5, 1.25, -3.0, 8.0]);
        let g = es(&[2.5, 3.25, -1.0, 10.0]);
        for r in [1.0, 1.5, 2.0, 3.7] {
            assert_eq!(mallows_empirical(&f, &g, r).unwrap(), 2.0);
        }
    }

    #[test]
    fn unequal_sizes() {
        // F = {0, 1}, G = {0, 1, 2}: quantiles differ on (1/3,1/2]: |0-1| and
        // (2/3,1]: |1-2|, total mass 1/6 + 1/3 = 1/2
        let d = mallows_empirical(&es(&[0.0, 1.0]), &es(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let d2 = mallows_empirical(&es(&[0.0, 1.0]), &es(&[0.0, 1.0, 2.0]), 2.0).unwrap();
        assert!((d2 - 0.5f64.sqrt()).abs() < 1e-15);
        // {1} vs {1,1,1}: identical laws
        assert_eq!(mallows_empirical(&es(&[1.0]), &es(&[1.0, 1.0, 1.0]), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn order_below_one_is_rejected() {
        let f = es(&[1.0]);
        assert!(matches!(mallows_empirical(&f, &f, 0.5), Err(Error::Domain { .. })));
        assert!(mallows_empirical(&f, &f, f64::NAN).is_err());
    }

    #[test]
    fn empirical_quantile() {
        let f = es(&[3.0, 1.0, 2.0]);
        assert_eq!(f.quantile(0.2), 1.0);
        assert_eq!(f.quantile(1.0 / 3.0), 1.0);
        assert_eq!(f.quantile(0.34), 2.0);
        assert_eq!(f.quantile(1.0), 3.0);
    }

    #[test]
    fn point_mass_against_uniform() {
        // d_1(δ_{1/2}, U(0,1)) = 1/4, the midpoint rule is exact for |u - 1/2|
        let e = mallows_to_quantile_fn(&es(&[0.5]), Ok, 1.0, 1000).unwrap();
        assert!((e.distance - 0.25).abs() < 1e-12);
        assert!(!e.tail_divergence);
        assert_eq!(e.truncation, 5e-4);
    }

    #[test]
    fn divergent_tail_is_flagged() {
        // Cauchy-like quantile: u·|q(u)| stays bounded away from zero
        let e = mallows_to_quantile_fn(&es(&[0.0]), |u| Ok(1.0 / u - 1.0 / (1.0 - u)), 1.0, 1000)
            .unwrap();
        assert!(e.tail_divergence);
    }

    #[test]
    fn stable_grid_uses_symmetry() {
        let target = StableParams::new(2.0, 1.0, 3.0).unwrap();
        let q = QuadratureConfig::default();
        let a = mallows_to_stable(&es(&[3.0]), &target, 1.0, 101, &q).unwrap();
        let b = mallows_to_quantile_fn(&es(&[3.0]), |u| target.quantile(u, &q), 1.0, 101).unwrap();
        assert!((a.distance - b.distance).abs() < 1e-12);
    }
}
