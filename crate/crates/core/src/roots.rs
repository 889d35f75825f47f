//! Bracketed root refinement: bisection down to a coarse width, then Newton
//! polishing that falls back to bisection whenever a step leaves the bracket.

use crate::error::{Error, Result};

/// Width at which bisection hands over to Newton.
const BISECTION_WIDTH: f64 = 1e-8;
const MAX_NEWTON_STEPS: usize = 50;

/// Find the root of `f` in `[lo, hi]` to absolute tolerance `tol`.
///
/// `df` is the derivative of `f`. The bracket must contain a sign change.
pub fn hybrid_root<F, D>(f: F, df: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::RootBracket { lo, hi, f_lo: fa, f_hi: fb });
    }

    while b - a > BISECTION_WIDTH {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }

    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_NEWTON_STEPS {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        // keep the bracket tight
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= tol || b - a <= tol {
            return Ok(x);
        }
    }

    // pure bisection
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
