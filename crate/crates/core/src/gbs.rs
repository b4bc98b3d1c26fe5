//! Birnbaum-Saunders fatigue-life laws.
//!
//! [`GbsParams`] is the stable generalization
//! `P(T <= t) = Φ_α(ξ_α(t / b_α) / a_α)`, with `Φ_α` the CDF of the centred
//! law `S_α(σ, 0, 0)`, `ξ_α(x) = x^{1-1/α} - x^{-1/α}`,
//! `a_α = 1 / (μ_X^{1/α} s*^{1-1/α})` and `b_α = s*/μ_X`.
//!
//! [`ClassicalBsParams`] is the normal-theory law `Φ(ξ(t/b)/a)` with
//! `ξ(x) = √x - 1/√x`.

use crate::error::{check_positive, Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::roots;
use crate::special;
use crate::stable::{check_alpha, StableParams};
use serde::{Deserialize, Serialize};

/// Arguments `t < TINY_RATIO * b` are treated as zero lifetime.
const TINY_RATIO: f64 = 1e-300;

fn check_time(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Domain {
            value: t,
            reason: "lifetime argument must be finite and > 0",
        })
    }
}

fn check_probability(p: f64) -> Result<f64> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::Domain {
            value: p,
            reason: "probability must lie in (0, 1)",
        })
    }
}

/// `ξ_α(x) = x^{1-1/α} - x^{-1/α}`.
pub fn xi_alpha(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    // rejects NaN too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(x > 0.0) {
        return Err(Error::Domain {
            value: x,
            reason: "ξ_α is defined for x > 0",
        });
    }
    Ok(xi_unchecked(alpha, x))
}

fn xi_unchecked(alpha: f64, x: f64) -> f64 {
    let inv = 1.0 / alpha;
    x.powf(1.0 - inv) - x.powf(-inv)
}

/// `dξ_α/dx = (1 - 1/α) x^{-1/α} + (1/α) x^{-1-1/α}`.
fn xi_derivative(alpha: f64, x: f64) -> f64 {
    let inv = 1.0 / alpha;
    (1.0 - inv) * x.powf(-inv) + inv * x.powf(-1.0 - inv)
}

/// Inverse of [`xi_alpha`]: the unique `x > 0` with `ξ_α(x) = y`.
///
/// Solved in `u = ln x` by Brent's method on a bracket that follows from
/// bounding one of the two power terms of `ξ_α` by 1.
pub fn xi_alpha_inv(alpha: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !y.is_finite() {
        return Err(Error::Domain {
            value: y,
            reason: "ξ_α^{-1} needs a finite argument",
        });
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    if alpha == 2.0 {
        let w = if y >= 0.0 {
            0.5 * (y + (y * y + 4.0).sqrt())
        } else {
            // rationalized to avoid cancellation for large negative y
            2.0 / ((y * y + 4.0).sqrt() - y)
        };
        return Ok(w * w);
    }
    let r = alpha / (alpha - 1.0);
    let (lo, hi) = if y > 0.0 {
        // x^{1-1/α} - 1 <= y <= x^{1-1/α}
        ((r * y.ln()).max(0.0), r * y.ln_1p())
    } else {
        // -x^{-1/α} <= y <= 1 - x^{-1/α}
        let m = -y;
        (-alpha * m.ln_1p(), (-alpha * m.ln()).min(0.0))
    };
    // pad the analytic bracket so rounding in powf cannot close it
    let pad = |u: f64| 1e-9 * (1.0 + u.abs());
    let f = |u: f64| Ok(xi_unchecked(alpha, u.exp()) - y);
    let u = roots::brent(&f, lo - pad(lo), hi + pad(hi), 1e-15, 0.0)?;
    Ok(u.exp())
}

/// Generalized Birnbaum-Saunders law `GBS(α, σ, μ_X, s*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGbs")]
pub struct GbsParams {
    alpha: f64,
    sigma: f64,
    mu_x: f64,
    s_star: f64,
}

#[derive(Deserialize)]
struct RawGbs {
    alpha: f64,
    sigma: f64,
    mu_x: f64,
    s_star: f64,
}

impl TryFrom<RawGbs> for GbsParams {
    type Error = Error;
    fn try_from(raw: RawGbs) -> Result<Self> {
        Self::new(raw.alpha, raw.sigma, raw.mu_x, raw.s_star)
    }
}

impl GbsParams {
    pub fn new(alpha: f64, sigma: f64, mu_x: f64, s_star: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_positive("sigma", sigma)?;
        check_positive("mu_x", mu_x)?;
        check_positive("s_star", s_star)?;
        Ok(Self {
            alpha,
            sigma,
            mu_x,
            s_star,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mu_x(&self) -> f64 {
        self.mu_x
    }

    pub fn s_star(&self) -> f64 {
        self.s_star
    }

    /// `a_α = 1 / (μ_X^{1/α} s*^{1-1/α})`.
    pub fn a_alpha(&self) -> f64 {
        let inv = 1.0 / self.alpha;
        1.0 / (self.mu_x.powf(inv) * self.s_star.powf(1.0 - inv))
    }

    /// `b_α = s*/μ_X`, the median life in cycles.
    pub fn b_alpha(&self) -> f64 {
        self.s_star / self.mu_x
    }

    /// The centred stable law `S_α(σ, 0, 0)` whose CDF is `Φ_α`.
    pub fn kernel(&self) -> StableParams {
        StableParams::new(self.alpha, self.sigma, 0.0).expect("validated at construction")
    }

    /// Standardized argument `ξ_α(t/b_α) / a_α` fed to `Φ_α`.
    pub fn argument(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(xi_unchecked(self.alpha, t / self.b_alpha()) / self.a_alpha())
    }

    pub fn cdf(&self, t: f64, quad: &QuadratureConfig) -> Result<f64> {
        check_time(t)?;
        if t < TINY_RATIO * self.b_alpha() {
            return Ok(0.0);
        }
        self.kernel().cdf(self.argument(t)?, quad)
    }

    pub fn pdf(&self, t: f64, quad: &QuadratureConfig) -> Result<f64> {
        check_time(t)?;
        let b = self.b_alpha();
        if t < TINY_RATIO * b {
            return Ok(0.0);
        }
        let a = self.a_alpha();
        let x = t / b;
        let dens = self.kernel().pdf(xi_unchecked(self.alpha, x) / a, quad)?;
        Ok(dens * xi_derivative(self.alpha, x) / (a * b))
    }

    /// `t = b_α ξ_α^{-1}(a_α Φ_α^{-1}(p))`.
    pub fn quantile(&self, p: f64, quad: &QuadratureConfig) -> Result<f64> {
        check_probability(p)?;
        let y = self.kernel().quantile(p, quad)?;
        Ok(self.b_alpha() * xi_alpha_inv(self.alpha, self.a_alpha() * y)?)
    }
}

/// Classical Birnbaum-Saunders law with shape `a` and scale `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClassical")]
pub struct ClassicalBsParams {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawClassical {
    a: f64,
    b: f64,
}

impl TryFrom<RawClassical> for ClassicalBsParams {
    type Error = Error;
    fn try_from(raw: RawClassical) -> Result<Self> {
        Self::new(raw.a, raw.b)
    }
}

impl ClassicalBsParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        Ok(Self { a, b })
    }

    /// Shape and scale from damage moments: `a = σ_X/√(μ_X s*)`, `b = s*/μ_X`.
    pub fn from_damage(sigma_x: f64, mu_x: f64, s_star: f64) -> Result<Self> {
        check_positive("sigma_x", sigma_x)?;
        check_positive("mu_x", mu_x)?;
        check_positive("s_star", s_star)?;
        Self::new(sigma_x / (mu_x * s_star).sqrt(), s_star / mu_x)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    fn argument(&self, t: f64) -> f64 {
        let x = t / self.b;
        (x.sqrt() - 1.0 / x.sqrt()) / self.a
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t < TINY_RATIO * self.b {
            return Ok(0.0);
        }
        Ok(special::normal_cdf(self.argument(t)))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t < TINY_RATIO * self.b {
            return Ok(0.0);
        }
        let x = t / self.b;
        let dxi = 0.5 * (x.powf(-0.5) + x.powf(-1.5));
        Ok(special::normal_pdf(self.argument(t)) * dxi / (self.a * self.b))
    }

    /// Closed form `b (a z/2 + √((a z/2)² + 1))²` with `z = Φ^{-1}(p)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        let h = 0.5 * self.a * special::normal_quantile(p);
        Ok(self.b * (h + (h * h + 1.0).sqrt()).powi(2))
    }
}
