//! Bracketing and bisection for monotone scalar equations.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub doublings: usize,
}

/// Finds `hi = start·2^j` with `f(hi) ≥ 0`, assuming `f` is increasing and
/// `f(lo) < 0` for `lo = start` (or for the previous doubling).
pub fn bracket_by_doubling<F>(
    stage: &'static str,
    mut f: F,
    start: f64,
    max_doublings: usize,
) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = start;
    let mut hi = start;
    let mut value = f(hi)?;
    let mut doublings = 0;
    while value < 0.0 {
        if doublings == max_doublings {
            return Err(Error::Bracket {
                stage,
                doublings,
                upper: hi,
                value,
            });
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        value = f(hi)?;
    }
    Ok(Bracket { lo, hi, doublings })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on an increasing function over `[lo, hi]`.
///
/// Stops when `|f(x)| ≤ residual_tol` or when the bracket collapses to
/// adjacent floats.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, residual_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut best = Root {
        x: hi,
        residual: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let value = f(mid)?;
        if value.abs() < best.residual.abs() {
            best = Root {
                x: mid,
                residual: value,
                iterations: it,
            };
        }
        best.iterations = it;
        if value.abs() <= residual_tol || mid <= lo || mid >= hi {
            break;
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}
