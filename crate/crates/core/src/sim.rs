//! First-passage Monte Carlo: `N_* = inf{n : X_1 + … + X_n > s_*}` under
//! configurable damage laws, plus checks of the normalized-sum limit.
//!
//! Replication `i` always draws from stream `(seed, i)`, so results do not
//! depend on how the replications are spread over threads.

use crate::error::{check_positive, Error, Result};
use crate::estimation::{estimate_sigma, DamageSeries, EstimationConfig};
use crate::gbs::GbsParams;
use crate::ks::{ks_distance, ks_pvalue};
use crate::mallows::{mallows_to_quantile_fn, mallows_to_stable, EmpiricalSample, MallowsEstimate};
use crate::quadrature::QuadratureConfig;
use crate::rng::{self, par_fill, Domain};
use crate::special;
use crate::stable::{check_alpha, StableParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal, Open01};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cycle cap per replication; hitting it usually means a mean damage of ~0.
pub const RUNAWAY_LIMIT: u64 = 1_000_000_000;

/// Something that yields i.i.d. real draws with a known mean.
pub trait DamageSource: Sync {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64;
    fn mean(&self) -> f64;
}

/// Per-cycle damage law. All families are non-negative with a finite,
/// positive mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DamageModel {
    Deterministic { value: f64 },
    Exponential { rate: f64 },
    LogNormal { log_mean: f64, log_sd: f64 },
    /// `shift + scale · U^{-1/index}`: Pareto tail `P(X > x) ~ (scale/x)^index`.
    ShiftedPareto { index: f64, scale: f64, shift: f64 },
    /// `shift + |Y|` with `Y ~ S_α(σ, 0, 0)`.
    FoldedStable { alpha: f64, sigma: f64, shift: f64 },
}

fn check_shift(shift: f64) -> Result<()> {
    if shift.is_finite() && shift >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "shift",
            value: shift,
            reason: "must be finite and >= 0",
        })
    }
}

impl DamageModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DamageModel::Deterministic { value } => {
                check_positive("value", value)?;
            }
            DamageModel::Exponential { rate } => {
                check_positive("rate", rate)?;
            }
            DamageModel::LogNormal { log_mean, log_sd } => {
                if !log_mean.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "log_mean",
                        value: log_mean,
                        reason: "must be finite",
                    });
                }
                if !(log_sd.is_finite() && log_sd >= 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "log_sd",
                        value: log_sd,
                        reason: "must be finite and >= 0",
                    });
                }
            }
            DamageModel::ShiftedPareto { index, scale, shift } => {
                if !(index.is_finite() && index > 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "index",
                        value: index,
                        reason: "tail index must exceed 1 for a finite mean",
                    });
                }
                check_positive("scale", scale)?;
                check_shift(shift)?;
            }
            DamageModel::FoldedStable { alpha, sigma, shift } => {
                check_alpha(alpha)?;
                check_positive("sigma", sigma)?;
                check_shift(shift)?;
            }
        }
        let m = self.mean();
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mean",
                value: m,
                reason: "damage mean must be finite and > 0",
            });
        }
        Ok(())
    }

    /// `μ_X`.
    pub fn mean(&self) -> f64 {
        match *self {
            DamageModel::Deterministic { value } => value,
            DamageModel::Exponential { rate } => 1.0 / rate,
            DamageModel::LogNormal { log_mean, log_sd } => (log_mean + 0.5 * log_sd * log_sd).exp(),
            DamageModel::ShiftedPareto { index, scale, shift } => shift + scale * index / (index - 1.0),
            // E|Y| = σ (2/π) Γ(1 - 1/α)
            DamageModel::FoldedStable { alpha, sigma, shift } => {
                shift + sigma * 2.0 / PI * special::gamma(1.0 - 1.0 / alpha)
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DamageModel::Deterministic { value } => value,
            DamageModel::Exponential { rate } => Exp::new(rate).expect("validated").sample(rng),
            DamageModel::LogNormal { log_mean, log_sd } => {
                LogNormal::new(log_mean, log_sd).expect("validated").sample(rng)
            }
            DamageModel::ShiftedPareto { index, scale, shift } => {
                let u: f64 = rng.sample(Open01);
                shift + scale * u.powf(-1.0 / index)
            }
            DamageModel::FoldedStable { alpha, sigma, shift } => {
                let y = StableParams::new(alpha, sigma, 0.0).expect("validated").draw(rng);
                shift + y.abs()
            }
        }
    }
}

impl DamageSource for DamageModel {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        DamageModel::draw(self, rng)
    }

    fn mean(&self) -> f64 {
        DamageModel::mean(self)
    }
}

impl DamageSource for StableParams {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        StableParams::draw(self, rng)
    }

    fn mean(&self) -> f64 {
        self.mu()
    }
}

/// `n` damages, deterministic in `seed`.
pub fn damage_sample(model: &DamageModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    model.validate()?;
    if n == 0 {
        return Err(Error::SampleSize {
            n,
            reason: "need at least one damage".into(),
        });
    }
    let model = *model;
    Ok(par_fill(n, seed, Domain::Sample, move |r: &mut ChaCha8Rng| model.draw(r)))
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::SampleSize {
            n: 0,
            reason: "need at least one replication".into(),
        });
    }
    Ok(())
}

/// First-passage counts with an explicit runaway cap.
pub fn first_passage_counts(
    model: &DamageModel,
    s_star: f64,
    reps: usize,
    seed: u64,
    limit: u64,
) -> Result<Vec<u64>> {
    model.validate()?;
    check_positive("s_star", s_star)?;
    check_reps(reps)?;
    (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, Domain::Replication, i);
            let mut total = 0.0;
            let mut n = 0u64;
            while n < limit {
                total += model.draw(&mut rng);
                n += 1;
                if total > s_star {
                    return Ok(n);
                }
            }
            Err(Error::Runaway {
                replication: i,
                limit,
            })
        })
        .collect()
}

/// `S_n` for each replication, read from the same streams as
/// [`first_passage_counts`].
pub fn partial_sums(model: &DamageModel, n: u64, reps: usize, seed: u64) -> Result<Vec<f64>> {
    model.validate()?;
    check_reps(reps)?;
    Ok((0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, Domain::Replication, i);
            (0..n).map(|_| model.draw(&mut rng)).sum()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifeSummary {
    pub mean: f64,
    pub min: u64,
    pub max: u64,
    /// `(p, q_p)` for p in 0.05, 0.25, 0.5, 0.75, 0.95.
    pub quantiles: Vec<(f64, u64)>,
}

impl LifeSummary {
    fn from_counts(counts: &[u64]) -> Self {
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let q = |p: f64| sorted[((p * n as f64).ceil() as usize).clamp(1, n) - 1];
        Self {
            mean: sorted.iter().map(|&v| v as f64).sum::<f64>() / n as f64,
            min: sorted[0],
            max: sorted[n - 1],
            quantiles: [0.05, 0.25, 0.5, 0.75, 0.95].iter().map(|&p| (p, q(p))).collect(),
        }
    }

    pub fn median(&self) -> u64 {
        self.quantiles[2].1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbsComparison {
    pub reference: GbsParams,
    pub ks: f64,
    pub mallows_d1: MallowsEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstPassageReport {
    pub model: DamageModel,
    pub s_star: f64,
    pub replications: usize,
    pub seed: u64,
    pub summary: LifeSummary,
    pub comparison: Option<GbsComparison>,
    pub n_star_samples: Vec<u64>,
}

pub fn simulate_first_passage(
    model: &DamageModel,
    s_star: f64,
    reps: usize,
    seed: u64,
) -> Result<FirstPassageReport> {
    let counts = first_passage_counts(model, s_star, reps, seed, RUNAWAY_LIMIT)?;
    Ok(FirstPassageReport {
        model: *model,
        s_star,
        replications: reps,
        seed,
        summary: LifeSummary::from_counts(&counts),
        comparison: None,
        n_star_samples: counts,
    })
}

/// Grid size for the lifetime d_1 estimate.
const LIFE_GRID: usize = 1000;

impl FirstPassageReport {
    /// Sup-discrepancy (at the integer lifetimes) and quantile-grid `d_1`
    /// between the simulated `N_*` and a GBS reference law.
    pub fn compare_to_gbs(&mut self, reference: &GbsParams, quad: &QuadratureConfig) -> Result<()> {
        let lives: Vec<f64> = self.n_star_samples.iter().map(|&n| n as f64).collect();
        let ks = ks_distance(&lives, |t| {
            if t <= 0.0 {
                Ok(0.0)
            } else {
                reference.cdf(t, quad)
            }
        })?;
        let sample = EmpiricalSample::new(lives)?;
        let mallows_d1 =
            mallows_to_quantile_fn(&sample, |u| reference.quantile(u, quad), 1.0, LIFE_GRID)?;
        self.comparison = Some(GbsComparison {
            reference: *reference,
            ks,
            mallows_d1,
        });
        Ok(())
    }
}

/// GBS reference for `model` at threshold `s_star`: known `μ_X`, the given
/// index, and `σ` estimated from `n` simulated damages.
pub fn calibrate_gbs(
    model: &DamageModel,
    alpha: f64,
    s_star: f64,
    n: usize,
    seed: u64,
    cfg: &EstimationConfig,
) -> Result<GbsParams> {
    let damages = damage_sample(model, n, seed)?;
    let series = DamageSeries::new(damages, Some(model.mean()))?;
    let sigma = estimate_sigma(&series, cfg, alpha)?;
    GbsParams::new(alpha, sigma.sigma_hat, model.mean(), s_star)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumLawReport {
    pub block_length: u64,
    pub replications: usize,
    pub seed: u64,
    pub target: StableParams,
    pub ks: f64,
    pub ks_pvalue: f64,
    pub mallows_d1: MallowsEstimate,
}

/// Normalized sums `(S_n - n μ) / n^{1/α}` over `reps` replications.
pub fn normalized_sums<S: DamageSource>(source: &S, n: u64, alpha: f64, reps: usize, seed: u64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_reps(reps)?;
    if n == 0 {
        return Err(Error::SampleSize {
            n: 0,
            reason: "block length must be at least 1".into(),
        });
    }
    let mu = source.mean();
    let scale = (n as f64).powf(1.0 / alpha);
    Ok((0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, Domain::SumLaw, i);
            let s: f64 = (0..n).map(|_| source.draw(&mut rng)).sum();
            (s - n as f64 * mu) / scale
        })
        .collect())
}

/// KS and `d_1` discrepancies between simulated normalized sums and `target`.
pub fn sum_law_check<S: DamageSource>(
    source: &S,
    n: u64,
    reps: usize,
    target: &StableParams,
    seed: u64,
    quad: &QuadratureConfig,
) -> Result<SumLawReport> {
    let sums = normalized_sums(source, n, target.alpha(), reps, seed)?;
    let ks = ks_distance(&sums, |x| target.cdf(x, quad))?;
    let grid = reps.clamp(2, 1000);
    let mallows_d1 = mallows_to_stable(&EmpiricalSample::new(sums)?, target, 1.0, grid, quad)?;
    Ok(SumLawReport {
        block_length: n,
        replications: reps,
        seed,
        target: *target,
        ks,
        ks_pvalue: ks_pvalue(ks, reps),
        mallows_d1,
    })
}
