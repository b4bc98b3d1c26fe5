//! Bracketed root finding: geometric bracket expansion followed by Brent's
//! bisection / secant / inverse-quadratic hybrid.

use crate::error::{Error, Result};

/// Hard cap on geometric bracket expansions.
pub const MAX_EXPANSIONS: usize = 200;

const MAX_ITER: usize = 300;

/// Grow `hi` geometrically away from `lo` until `f` changes sign between the
/// two. `f(lo)` must be non-positive and `f` non-decreasing on the ray.
/// Returns the final `(lo, hi)` bracket.
pub fn expand_upper<F: Fn(f64) -> Result<f64>>(f: &F, lo: f64, step: f64) -> Result<(f64, f64)> {
    let mut lo = lo;
    let mut width = step;
    for _ in 0..MAX_EXPANSIONS {
        let hi = lo + width;
        if f(hi)? >= 0.0 {
            return Ok((lo, hi));
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Bracket {
        expansions: MAX_EXPANSIONS,
    })
}

/// Find `x` in `[a, b]` with `f(x) = 0`, given `f(a)` and `f(b)` of opposite
/// sign (or zero). Stops when `|f| <= ftol` or the bracket is narrower than
/// `xtol` plus a few ulps.
pub fn brent<F: Fn(f64) -> Result<f64>>(
    f: &F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    ftol: f64,
) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { expansions: 0 });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= ftol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotConverged { iterations: MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(&f, 0.0, 2.0, 1e-15, 0.0).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn expansion_brackets_distant_root() {
        let f = |x: f64| Ok(x - 1e6);
        let (lo, hi) = expand_upper(&f, 0.0, 1.0).unwrap();
        assert!(lo <= 1e6 && 1e6 <= hi);
        let r = brent(&f, lo, hi, 1e-9, 0.0).unwrap();
        assert!((r - 1e6).abs() < 1e-6);
    }

    #[test]
    fn expansion_gives_up_on_rootless_function() {
        let f = |_: f64| Ok(-1.0);
        assert_eq!(
            expand_upper(&f, 0.0, 1.0).unwrap_err(),
            Error::Bracket { expansions: MAX_EXPANSIONS }
        );
    }

    #[test]
    fn rejects_unbracketed_interval() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(brent(&f, -1.0, 1.0, 1e-12, 0.0).is_err());
    }
}
