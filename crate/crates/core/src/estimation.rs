//! Tail-index and scale estimation from cycle-damage data.
//!
//! The index α comes from the Hill statistic of the centred upper order
//! statistics. The scale σ inverts the density-at-zero identity
//! `l(0) = Γ(1/α)/(πασ)`, with `l(0)` estimated by the fraction of
//! normalized block sums that land in `[-ε, ε]`.

use crate::error::{Error, Result};
use crate::special;
use crate::stable::check_alpha;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Maps a sample size to an integer tuning value, `⌊coef · n^exponent⌋`
/// (at least 1), or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningRule {
    Power { coef: f64, exponent: f64 },
    Fixed(usize),
}

impl TuningRule {
    pub fn apply(&self, n: usize) -> usize {
        match *self {
            TuningRule::Power { coef, exponent } => {
                // absorb powf rounding at exact integer powers (1e5^0.6 = 1000)
                let v = coef * (n as f64).powf(exponent);
                ((v * (1.0 + 1e-12)).floor() as usize).max(1)
            }
            TuningRule::Fixed(k) => k,
        }
    }
}

/// Bandwidth `ε = coef · r^{-exponent}` as a function of the block count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthRule {
    pub coef: f64,
    pub exponent: f64,
}

impl BandwidthRule {
    pub fn apply(&self, r: usize) -> f64 {
        self.coef * (r as f64).powf(-self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    /// Number of upper order statistics used by the Hill statistic.
    pub k_rule: TuningRule,
    /// Block length for the normalized block sums.
    pub block_rule: TuningRule,
    pub eps_rule: BandwidthRule,
    /// Index used for the scale step instead of the Hill estimate.
    pub alpha_override: Option<f64>,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            k_rule: TuningRule::Power {
                coef: 1.0,
                exponent: 0.6,
            },
            block_rule: TuningRule::Power {
                coef: 1.0,
                exponent: 0.4,
            },
            eps_rule: BandwidthRule {
                coef: 1.0,
                exponent: 0.2,
            },
            alpha_override: None,
        }
    }
}

/// Non-negative per-cycle damages with an optional known mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DamageSeries {
    values: Vec<f64>,
    known_mean: Option<f64>,
}

impl DamageSeries {
    pub fn new(values: Vec<f64>, known_mean: Option<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SampleSize {
                n: 0,
                reason: "damage series is empty".into(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "damage",
                value: bad,
                reason: "damages must be finite and >= 0",
            });
        }
        if let Some(m) = known_mean {
            crate::error::check_positive("known_mean", m)?;
        }
        Ok(Self { values, known_mean })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn known_mean(&self) -> Option<f64> {
        self.known_mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X'_j = X_j - μ_X`, with the sample mean standing in for an unknown
    /// `μ_X`.
    pub fn centered(&self) -> CenteredSample {
        CenteredSample::from_observations(&self.values, self.known_mean)
            .expect("validated at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSource {
    Known,
    SampleMean,
}

/// Observations minus a centring constant, in original order. Unlike
/// [`DamageSeries`] the raw observations may be signed.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredSample {
    values: Vec<f64>,
    center: f64,
    source: CenterSource,
}

impl CenteredSample {
    pub fn from_observations(raw: &[f64], known_center: Option<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::SampleSize {
                n: 0,
                reason: "no observations".into(),
            });
        }
        if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "observation",
                value: bad,
                reason: "observations must be finite",
            });
        }
        let (center, source) = match known_center {
            Some(c) => (c, CenterSource::Known),
            None => (
                raw.iter().sum::<f64>() / raw.len() as f64,
                CenterSource::SampleMean,
            ),
        };
        Ok(Self {
            values: raw.iter().map(|x| x - center).collect(),
            center,
            source,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn source(&self) -> CenterSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillReport {
    /// `1/H`; `None` when the Hill mean is zero (index unbounded).
    pub alpha_hat: Option<f64>,
    pub hill_mean: f64,
    /// Whether `alpha_hat` falls in the admissible range (1, 2].
    pub in_range: bool,
    pub k_used: usize,
    pub n: usize,
    /// The intermediate order statistic `X'_(n-k)`.
    pub pivot: f64,
    pub center: f64,
    pub center_source: CenterSource,
}

pub fn hill_alpha(data: &DamageSeries, cfg: &EstimationConfig) -> Result<HillReport> {
    hill_alpha_centered(&data.centered(), cfg)
}

/// Hill statistic `H = (1/k) Σ_{j>n-k} ln(X'_(j) / X'_(n-k))` and `α̂ = 1/H`.
pub fn hill_alpha_centered(data: &CenteredSample, cfg: &EstimationConfig) -> Result<HillReport> {
    let n = data.len();
    if n < 4 {
        return Err(Error::SampleSize {
            n,
            reason: "the Hill estimate needs at least 4 observations".into(),
        });
    }
    let k = cfg.k_rule.apply(n);
    if k >= n {
        return Err(Error::SampleSize {
            n,
            reason: format!("k_n = {k} must be below n"),
        });
    }
    let mut sorted = data.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let pivot = sorted[n - k - 1];
    // rejects NaN too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(pivot > 0.0) {
        return Err(Error::TailPositivity { pivot, k });
    }
    let hill_mean = sorted[n - k..].iter().map(|x| (x / pivot).ln()).sum::<f64>() / k as f64;
    let alpha_hat = (hill_mean > 0.0).then(|| 1.0 / hill_mean);
    Ok(HillReport {
        alpha_hat,
        hill_mean,
        in_range: alpha_hat.is_some_and(|a| a > 1.0 && a <= 2.0),
        k_used: k,
        n,
        pivot,
        center: data.center(),
        center_source: data.source(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSums {
    pub values: Vec<f64>,
    /// Trailing observations (`n mod k`) left out of any block.
    pub discarded: usize,
}

/// `Y_j = (X'_{(j-1)k+1} + … + X'_{jk}) / k^{1/α}` for `j = 1..⌊n/k⌋`, over
/// the centred series in original order.
pub fn block_sums(centered: &[f64], alpha: f64, k: usize) -> Result<BlockSums> {
    check_alpha(alpha)?;
    let n = centered.len();
    if k == 0 || k > n {
        return Err(Error::SampleSize {
            n,
            reason: format!("block length {k} must lie in 1..=n"),
        });
    }
    let scale = (k as f64).powf(1.0 / alpha);
    let values = centered
        .chunks_exact(k)
        .map(|block| block.iter().sum::<f64>() / scale)
        .collect();
    Ok(BlockSums {
        values,
        discarded: n % k,
    })
}

/// `l̂(0) = #{j : |Y_j| <= ε} / (2 ε r)`.
pub fn l_hat_zero(blocks: &[f64], eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "bandwidth must be finite and > 0",
        });
    }
    if blocks.is_empty() {
        return Err(Error::SampleSize {
            n: 0,
            reason: "no block sums".into(),
        });
    }
    let hits = blocks.iter().filter(|y| y.abs() <= eps).count();
    Ok(hits as f64 / (2.0 * eps * blocks.len() as f64))
}

/// `σ = Γ(1/α) / (πα · l(0))`.
pub fn sigma_from_density_at_zero(alpha: f64, l0: f64) -> f64 {
    special::gamma(1.0 / alpha) / (PI * alpha * l0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub sigma_hat: f64,
    pub alpha_used: f64,
    pub k_used: usize,
    pub r_used: usize,
    pub eps_used: f64,
    pub l_hat_zero: f64,
    pub discarded: usize,
    pub center: f64,
    pub center_source: CenterSource,
}

pub fn estimate_sigma(data: &DamageSeries, cfg: &EstimationConfig, alpha: f64) -> Result<SigmaReport> {
    estimate_sigma_centered(&data.centered(), cfg, alpha)
}

pub fn estimate_sigma_centered(
    data: &CenteredSample,
    cfg: &EstimationConfig,
    alpha: f64,
) -> Result<SigmaReport> {
    let k = cfg.block_rule.apply(data.len());
    let blocks = block_sums(data.values(), alpha, k)?;
    let r = blocks.values.len();
    let eps = cfg.eps_rule.apply(r);
    let l0 = l_hat_zero(&blocks.values, eps)?;
    if l0 == 0.0 {
        return Err(Error::BandwidthTooSmall { eps, blocks: r });
    }
    Ok(SigmaReport {
        sigma_hat: sigma_from_density_at_zero(alpha, l0),
        alpha_used: alpha,
        k_used: k,
        r_used: r,
        eps_used: eps,
        l_hat_zero: l0,
        discarded: blocks.discarded,
        center: data.center(),
        center_source: data.source(),
    })
}

/// Combined `(α̂, σ̂)` fit as written by the `fit` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub n: usize,
    pub alpha_hat: Option<f64>,
    pub alpha_in_range: bool,
    pub hill_mean: f64,
    pub hill_k: usize,
    /// Index fed to the scale step: the override, else `α̂` clamped to (1, 2].
    pub alpha_for_sigma: f64,
    pub alpha_clamped: bool,
    pub sigma_hat: f64,
    pub k_used: usize,
    pub r_used: usize,
    pub eps_used: f64,
    pub l_hat_zero: f64,
    pub discarded: usize,
    pub center: f64,
    pub center_source: CenterSource,
}

/// Smallest index handed to the scale step when `α̂ <= 1` is clamped.
const ALPHA_FLOOR: f64 = 1.0 + 1e-6;

pub fn fit(data: &DamageSeries, cfg: &EstimationConfig) -> Result<EstimationReport> {
    let centered = data.centered();
    let hill = hill_alpha_centered(&centered, cfg)?;
    let (alpha_for_sigma, alpha_clamped) = match (cfg.alpha_override, hill.alpha_hat) {
        (Some(a), _) => (check_alpha(a)?, false),
        (None, Some(a)) if hill.in_range => (a, false),
        (None, Some(a)) => (a.clamp(ALPHA_FLOOR, 2.0), true),
        (None, None) => (2.0, true),
    };
    let sigma = estimate_sigma_centered(&centered, cfg, alpha_for_sigma)?;
    Ok(EstimationReport {
        n: hill.n,
        alpha_hat: hill.alpha_hat,
        alpha_in_range: hill.in_range,
        hill_mean: hill.hill_mean,
        hill_k: hill.k_used,
        alpha_for_sigma,
        alpha_clamped,
        sigma_hat: sigma.sigma_hat,
        k_used: sigma.k_used,
        r_used: sigma.r_used,
        eps_used: sigma.eps_used,
        l_hat_zero: sigma.l_hat_zero,
        discarded: sigma.discarded,
        center: centered.center(),
        center_source: centered.source(),
    })
}
