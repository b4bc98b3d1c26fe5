//! Symmetric α-stable laws `S_α(σ, 0, μ)` with `1 < α <= 2`.
//!
//! The characteristic function is `exp(iμt - σ^α |t|^α)`, so the `α = 2`
//! member is `N(μ, 2σ²)`. Densities and distribution functions are computed
//! on the standardized variate `z = (x - μ)/σ` by one of two routes:
//!
//! * near the centre, Fourier inversion of the characteristic function on a
//!   truncated horizon, split into half-period panels;
//! * further out, Zolotarev's non-oscillatory integral over an angle, whose
//!   cost does not grow with `|z|`.
//!
//! Both routes are exposed in [`kernel`] so they can be checked against each
//! other. The Gaussian member always uses closed-form normal kernels.

use crate::error::{check_positive, Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureConfig};
use crate::rng::{par_fill, Domain};
use crate::roots;
use crate::special;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Open01, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

/// A symmetric stable law `S_α(σ, 0, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStable")]
pub struct StableParams {
    alpha: f64,
    sigma: f64,
    mu: f64,
}

#[derive(Deserialize)]
struct RawStable {
    alpha: f64,
    sigma: f64,
    mu: f64,
}

impl TryFrom<RawStable> for StableParams {
    type Error = Error;
    fn try_from(raw: RawStable) -> Result<Self> {
        Self::new(raw.alpha, raw.sigma, raw.mu)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "stability index must lie in (1, 2]",
        })
    }
}

impl StableParams {
    pub fn new(alpha: f64, sigma: f64, mu: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_positive("sigma", sigma)?;
        if !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "shift must be finite",
            });
        }
        Ok(Self { alpha, sigma, mu })
    }

    /// `S_α(1, 0, 0)`.
    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn is_gaussian(&self) -> bool {
        self.alpha == 2.0
    }

    /// Density at the centre, `Γ(1/α) / (π α σ)`.
    pub fn mode_density(&self) -> f64 {
        special::gamma(1.0 / self.alpha) / (PI * self.alpha * self.sigma)
    }

    /// Mean absolute deviation `E|Y - μ| = σ (2/π) Γ(1 - 1/α)`.
    pub fn mean_abs_deviation(&self) -> f64 {
        self.sigma * 2.0 / PI * special::gamma(1.0 - 1.0 / self.alpha)
    }

    /// Characteristic function `E exp(itY)`.
    pub fn cf(&self, t: f64) -> Complex64 {
        let modulus = (-(self.sigma * t.abs()).powf(self.alpha)).exp();
        Complex64::from_polar(modulus, self.mu * t)
    }

    pub fn pdf(&self, x: f64, quad: &QuadratureConfig) -> Result<f64> {
        let z = (x - self.mu) / self.sigma;
        Ok(kernel::density(self.alpha, z, quad)? / self.sigma)
    }

    pub fn cdf(&self, x: f64, quad: &QuadratureConfig) -> Result<f64> {
        let z = (x - self.mu) / self.sigma;
        if z >= 0.0 {
            Ok(1.0 - kernel::upper_tail(self.alpha, z, quad)?)
        } else {
            kernel::upper_tail(self.alpha, -z, quad)
        }
    }

    /// `P(Y > x)`, computed without cancellation in the right tail.
    pub fn sf(&self, x: f64, quad: &QuadratureConfig) -> Result<f64> {
        let z = (x - self.mu) / self.sigma;
        if z >= 0.0 {
            kernel::upper_tail(self.alpha, z, quad)
        } else {
            Ok(1.0 - kernel::upper_tail(self.alpha, -z, quad)?)
        }
    }

    /// Inverse CDF by bracketed root finding on the standardized tail.
    pub fn quantile(&self, p: f64, quad: &QuadratureConfig) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain {
                value: p,
                reason: "probability must lie in (0, 1)",
            });
        }
        if p == 0.5 {
            return Ok(self.mu);
        }
        let (tail, sign) = if p > 0.5 { (1.0 - p, 1.0) } else { (p, -1.0) };
        let z = if self.is_gaussian() {
            -SQRT_2 * special::normal_quantile(tail)
        } else {
            standard_tail_quantile(self.alpha, tail, quad)?
        };
        Ok(self.mu + sign * self.sigma * z)
    }

    /// Law of `aY + b`: `S_α(|a|σ, 0, aμ + b)`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if a == 0.0 {
            return Err(Error::DegenerateLaw);
        }
        Self::new(self.alpha, a.abs() * self.sigma, a * self.mu + b)
    }

    /// One variate by the Chambers-Mallows-Stuck transform (normal draw for
    /// the Gaussian member).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.mu + self.sigma * standard_draw(self.alpha, rng)
    }

    /// `n` variates; deterministic in `seed` regardless of thread count.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let law = *self;
        par_fill(n, seed, Domain::Sample, move |rng: &mut ChaCha8Rng| law.draw(rng))
    }
}

fn standard_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        let n: f64 = rng.sample(StandardNormal);
        return SQRT_2 * n;
    }
    let u: f64 = rng.sample(Open01);
    let angle = PI * (u - 0.5);
    let w: f64 = rng.sample(Exp1);
    (alpha * angle).sin() / angle.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * angle).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Solve `P(Z > z) = tail` for `z > 0`, `tail < 1/2`.
fn standard_tail_quantile(alpha: f64, tail: f64, quad: &QuadratureConfig) -> Result<f64> {
    let f = |z: f64| Ok(tail - kernel::upper_tail(alpha, z, quad)?);
    let (lo, hi) = roots::expand_upper(&f, 0.0, 2.0)?;
    roots::brent(&f, lo, hi, 1e-13, 1e-15 * tail)
}

/// Standardized kernels for `S_α(1, 0, 0)`, whose characteristic function is
/// `exp(-|t|^α)`.
pub mod kernel {
    use super::*;

    /// Below this `|z|` the Fourier route is used, above it Zolotarev's.
    pub const ROUTE_SWITCH: f64 = 2.0;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Route {
        Fourier,
        Zolotarev,
    }

    fn route_for(z: f64) -> Route {
        if z.abs() < ROUTE_SWITCH {
            Route::Fourier
        } else {
            Route::Zolotarev
        }
    }

    pub fn density(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        density_by(route_for(z), alpha, z, quad)
    }

    /// `P(Z > z)` for `z >= 0`.
    pub fn upper_tail(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        upper_tail_by(route_for(z), alpha, z, quad)
    }

    pub fn density_by(route: Route, alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        let z = z.abs();
        if alpha == 2.0 {
            return Ok((-0.25 * z * z).exp() / (2.0 * PI.sqrt()));
        }
        let v = match route {
            Route::Fourier => fourier_density(alpha, z, quad)?,
            Route::Zolotarev => zolotarev_density(alpha, z, quad)?,
        };
        Ok(v.max(0.0))
    }

    pub fn upper_tail_by(route: Route, alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        debug_assert!(z >= 0.0);
        if alpha == 2.0 {
            return Ok(special::normal_sf(z / SQRT_2));
        }
        if z == 0.0 {
            return Ok(0.5);
        }
        let v = match route {
            Route::Fourier => fourier_upper_tail(alpha, z, quad)?,
            Route::Zolotarev => zolotarev_upper_tail(alpha, z, quad)?,
        };
        Ok(v.clamp(0.0, 0.5))
    }

    /// Truncation horizon `T` with `exp(-T^α)` far below `abs_tol`.
    fn horizon(alpha: f64, quad: &QuadratureConfig) -> Result<f64> {
        let t = (-(quad.abs_tol * 1e-6).ln()).powf(1.0 / alpha);
        if t > quad.max_horizon {
            return Err(Error::Quadrature {
                error_estimate: (-quad.max_horizon.powf(alpha)).exp(),
                subdivisions: 0,
            });
        }
        Ok(t)
    }

    fn half_period_breaks(z: f64, horizon: f64) -> Vec<f64> {
        let panels = ((z * horizon / PI).ceil() as usize).max(8);
        (0..=panels)
            .map(|k| horizon * k as f64 / panels as f64)
            .collect()
    }

    fn fourier_density(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        let t = horizon(alpha, quad)?;
        let breaks = half_period_breaks(z, t);
        let r = integrate_with_breaks(|u| (z * u).cos() * (-u.powf(alpha)).exp(), &breaks, quad)?;
        Ok(r.value / PI)
    }

    fn fourier_upper_tail(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        let t = horizon(alpha, quad)?;
        let breaks = half_period_breaks(z, t);
        let sinc = |u: f64| if u == 0.0 { z } else { (z * u).sin() / u };
        let r = integrate_with_breaks(|u| sinc(u) * (-u.powf(alpha)).exp(), &breaks, quad)?;
        Ok(0.5 - r.value / PI)
    }

    /// `ln V` in the angle `φ = π/2 - θ`, increasing from `-∞` at `φ = 0`
    /// to `+∞` at `φ = π/2`.
    fn ln_v(alpha: f64, phi: f64) -> f64 {
        let theta = FRAC_PI_2 - phi;
        let p = alpha / (alpha - 1.0);
        (p - 1.0) * phi.sin().ln() - p * (alpha * theta).sin().ln()
            + ((alpha - 1.0) * theta).cos().ln()
    }

    /// Breakpoints around the angle where `ln g + ln V(φ) = 0`, which is
    /// where the integrands switch between their two regimes.
    fn transition_breaks(alpha: f64, ln_g: f64) -> Vec<f64> {
        let s = |phi: f64| ln_g + ln_v(alpha, phi);
        let mut hi = FRAC_PI_2 * 0.5;
        let mut lo;
        if s(hi) > 0.0 {
            loop {
                lo = 0.5 * hi;
                if s(lo) <= 0.0 || lo < 1e-300 {
                    break;
                }
                hi = lo;
            }
        } else {
            lo = hi;
            hi = FRAC_PI_2;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if s(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let star = 0.5 * (lo + hi);
        // geometric panels: both integrands change regime over a few
        // octaves either side of `star`, and plain bisection of a wide panel
        // can sample only the flat part
        let mut breaks = vec![0.0];
        breaks.extend(
            (-6..=14)
                .map(|k| star * 2f64.powi(k))
                .filter(|&b| b > 0.0 && b < FRAC_PI_2),
        );
        breaks.push(FRAC_PI_2);
        breaks
    }

    fn zolotarev_upper_tail(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        let ln_g = alpha / (alpha - 1.0) * z.ln();
        let breaks = transition_breaks(alpha, ln_g);
        let r = integrate_with_breaks(|phi| (-(ln_g + ln_v(alpha, phi)).exp()).exp(), &breaks, quad)?;
        Ok(r.value / PI)
    }

    fn zolotarev_density(alpha: f64, z: f64, quad: &QuadratureConfig) -> Result<f64> {
        let ln_g = alpha / (alpha - 1.0) * z.ln();
        let breaks = transition_breaks(alpha, ln_g);
        let integrand = |phi: f64| {
            let s = ln_g + ln_v(alpha, phi);
            let v = (s - s.exp()).exp();
            if v.is_nan() {
                0.0
            } else {
                v
            }
        };
        // scale the tolerance to the integral, not the density
        let scaled = QuadratureConfig {
            abs_tol: quad.abs_tol * z * PI * (alpha - 1.0) / alpha,
            ..*quad
        };
        let r = integrate_with_breaks(integrand, &breaks, &scaled)?;
        Ok(alpha / (PI * (alpha - 1.0) * z) * r.value)
    }
}

#[cfg(test)]
mod tests {
    use super::kernel::{density_by, upper_tail_by, Route};
    use super::*;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(StableParams::new(1.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(2.1, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 0.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 1.0, f64::NAN).is_err());
        assert!(StableParams::new(2.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn cf_examples() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        assert_eq!(s.cf(0.0), Complex64::new(1.0, 0.0));
        assert!((s.cf(2.0).re - 0.059_106).abs() < 1e-5);
        let g = StableParams::new(2.0, 1.0 / SQRT_2, 0.0).unwrap();
        assert!((g.cf(1.0).re - (-0.5f64).exp()).abs() < 1e-15);
        let shifted = StableParams::new(1.7, 0.8, 2.5).unwrap();
        for t in [-3.0, -0.1, 0.7, 4.0] {
            assert!(shifted.cf(t).norm() <= 1.0);
        }
    }

    #[test]
    fn density_at_centre_matches_closed_form() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        let expected = special::gamma(2.0 / 3.0) / (1.5 * PI);
        assert!((s.pdf(0.0, &q()).unwrap() - expected).abs() < 1e-10);
        assert!((expected - 0.287_353).abs() < 1e-6);
        let g = StableParams::new(2.0, 1.0 / SQRT_2, 0.0).unwrap();
        assert!((g.pdf(0.0, &q()).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn density_is_symmetric_about_shift() {
        let s = StableParams::new(1.7, 2.0, 5.0).unwrap();
        for c in [0.5, 1.0, 3.0] {
            let l = s.pdf(5.0 - c, &q()).unwrap();
            let r = s.pdf(5.0 + c, &q()).unwrap();
            assert!((l - r).abs() < 1e-14);
        }
    }

    #[test]
    fn routes_agree_across_the_switch() {
        for &alpha in &[1.1, 1.3, 1.5, 1.8, 1.95] {
            for &z in &[0.3, 0.8, 1.5, 2.0, 3.0, 6.0, 15.0] {
                let df = density_by(Route::Fourier, alpha, z, &q()).unwrap();
                let dz = density_by(Route::Zolotarev, alpha, z, &q()).unwrap();
                assert!((df - dz).abs() < 1e-9, "density α={alpha} z={z}: {df} vs {dz}");
                let tf = upper_tail_by(Route::Fourier, alpha, z, &q()).unwrap();
                let tz = upper_tail_by(Route::Zolotarev, alpha, z, &q()).unwrap();
                assert!((tf - tz).abs() < 1e-9, "tail α={alpha} z={z}: {tf} vs {tz}");
            }
        }
    }

    #[test]
    fn cdf_examples() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        assert_eq!(s.cdf(0.0, &q()).unwrap(), 0.5);
        let g = StableParams::new(2.0, 1.0 / SQRT_2, 0.0).unwrap();
        assert!((g.cdf(1.0, &q()).unwrap() - 0.841_344_746_068_543).abs() < 1e-12);
    }

    #[test]
    fn far_tail_follows_power_law() {
        // P(Z > z) ~ Γ(α) sin(πα/2) / π · z^{-α}
        let alpha: f64 = 1.5;
        let c = special::gamma(alpha) * (PI * alpha / 2.0).sin() / PI;
        for z in [1e3, 1e5, 1e8] {
            let t = kernel::upper_tail(alpha, z, &q()).unwrap();
            let approx = c * z.powf(-alpha);
            assert!((t / approx - 1.0).abs() < 1e-3, "z={z}: {t} vs {approx}");
        }
    }

    #[test]
    fn quantile_examples() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        let shifted = StableParams::new(1.3, 2.0, -4.0).unwrap();
        assert_eq!(shifted.quantile(0.5, &q()).unwrap(), -4.0);
        let g = StableParams::new(2.0, 1.0 / SQRT_2, 0.0).unwrap();
        assert!((g.quantile(0.841_344_746_068_543, &q()).unwrap() - 1.0).abs() < 1e-9);
        let x = s.quantile(0.975, &q()).unwrap();
        assert!((s.cdf(x, &q()).unwrap() - 0.975).abs() < 1e-8);
        assert!(s.quantile(0.0, &q()).is_err());
        assert!(s.quantile(1.0, &q()).is_err());
        assert!(s.quantile(f64::NAN, &q()).is_err());
    }

    #[test]
    fn affine_law_examples() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        assert_eq!(s.affine(1.0, 0.0).unwrap(), s);
        let t = StableParams::new(1.5, 2.0, 1.0).unwrap();
        assert_eq!(t.affine(-3.0, 4.0).unwrap(), StableParams::new(1.5, 6.0, 1.0).unwrap());
        assert_eq!(t.affine(0.0, 1.0).unwrap_err(), Error::DegenerateLaw);

        let u = StableParams::new(1.8, 1.0, 0.0).unwrap();
        let v = u.affine(2.0, 0.0).unwrap();
        for k in -4..=4 {
            let x = k as f64 * 1.5;
            let lhs = v.cdf(x, &q()).unwrap();
            let rhs = u.cdf(x / 2.0, &q()).unwrap();
            assert!((lhs - rhs).abs() < 1e-8);
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let s = StableParams::new(1.5, 1.0, 3.0).unwrap();
        assert_eq!(s.sample(1000, 7), s.sample(1000, 7));
        assert_ne!(s.sample(1000, 7), s.sample(1000, 8));
    }

    #[test]
    fn sampler_mean_and_gaussian_variance() {
        let s = StableParams::new(1.5, 1.0, 3.0).unwrap();
        let xs = s.sample(1_000_000, 11);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 3.0).abs() <= 0.05, "mean {mean}");

        let g = StableParams::new(2.0, 1.0 / SQRT_2, 0.0).unwrap();
        let ys = g.sample(1_000_000, 12);
        let m = ys.iter().sum::<f64>() / ys.len() as f64;
        let var = ys.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (ys.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn sampler_matches_characteristic_function() {
        let s = StableParams::new(1.5, 1.0, 0.0).unwrap();
        let xs = s.sample(100_000, 5);
        for t in [0.5, 1.0, 2.0] {
            let emp = xs.iter().map(|x| (t * x).cos()).sum::<f64>() / xs.len() as f64;
            assert!((emp - s.cf(t).re).abs() <= 0.01, "t={t}: {emp}");
        }
    }
}
