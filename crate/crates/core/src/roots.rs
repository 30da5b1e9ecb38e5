//! Bracketing root refinement.

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("no sign change on [{lo}, {hi}]")]
pub struct NoSignChange {
    pub lo: f64,
    pub hi: f64,
}

/// Bisection on `[a, b]` (either order) until the bracket is narrower than
/// `tol` or cannot shrink further in floating point.
pub fn bisect<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, NoSignChange>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
