//! Adaptive Gauss-Kronrod (10/21 point) integration on finite intervals.
//!
//! The integrator keeps a pool of subintervals and repeatedly bisects the one
//! with the largest Kronrod-minus-Gauss error estimate until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerances for every integral evaluated by the stable kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Cap on the number of bisections performed by one integration.
    pub max_subdivisions: usize,
    /// Cap on the truncation horizon of the standardized inversion integral.
    pub max_horizon: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
            max_horizon: 1e3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.abs_tol) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                reason: "must be finite and > 0",
            });
        }
        if !ok(self.rel_tol) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must be finite and > 0",
            });
        }
        if !ok(self.max_horizon) {
            return Err(Error::InvalidParameter {
                name: "max_horizon",
                value: self.max_horizon,
                reason: "must be finite and > 0",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_323_457_760,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment {
        lo,
        hi,
        value,
        error: if error.is_finite() { error } else { f64::INFINITY },
    }
}

/// Integrate `f` over `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    integrate_with_breaks(f, &[lo, hi], cfg)
}

/// Integrate `f` over `[breaks[0], breaks.last()]`, seeding the adaptive
/// pool with the panels delimited by `breaks` (which must be increasing).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut pool: Vec<Segment> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod21(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * pool.len();
    let mut subdivisions = 0;

    loop {
        let value: f64 = pool.iter().map(|s| s.value).sum();
        let error: f64 = pool.iter().map(|s| s.error).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                error_estimate: error,
                subdivisions,
            });
        }
        let (worst, _) = pool
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("pool is never empty");
        let seg = pool.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // interval at floating-point resolution; nothing left to refine
            return Err(Error::Quadrature {
                error_estimate: error,
                subdivisions,
            });
        }
        pool.push(kronrod21(&f, seg.lo, mid));
        pool.push(kronrod21(&f, mid, seg.hi));
        evaluations += 42;
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &QuadratureConfig::default())
            .unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn oscillatory_with_panels() {
        // ∫_0^{20π} sin(x)^2 dx = 10π
        let breaks: Vec<f64> = (0..=40).map(|k| k as f64 * PI / 2.0).collect();
        let r = integrate_with_breaks(|x| x.sin().powi(2), &breaks, &QuadratureConfig::default())
            .unwrap();
        assert!((r.value - 10.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2
        let cfg = QuadratureConfig {
            rel_tol: 1e-12,
            ..Default::default()
        };
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            ..Default::default()
        };
        let err = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { subdivisions: 3, .. }));
    }
}
