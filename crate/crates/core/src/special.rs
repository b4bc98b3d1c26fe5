//! Scalar special functions. `libm` supplies erfc and the gamma function to
//! within a few ulps; the normal quantile starts from `statrs`' inverse erfc
//! and is polished with Halley steps against `libm::erfc`.

use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal upper tail, accurate far into the right tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal quantile; `p` must lie in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    // solve on the smaller tail to keep relative accuracy there
    let (tail, sign) = if p < 0.5 { (p, -1.0) } else { (1.0 - p, 1.0) };
    let mut z = SQRT_2 * erfc_inv(2.0 * tail);
    for _ in 0..2 {
        let resid = normal_sf(z) - tail;
        let dens = normal_pdf(z);
        if dens == 0.0 || resid == 0.0 {
            break;
        }
        // Halley on sf(z) = tail, using sf' = -φ and sf'' = zφ
        let step = resid / dens;
        z += step / (1.0 - 0.5 * z * step);
    }
    sign * z
}
