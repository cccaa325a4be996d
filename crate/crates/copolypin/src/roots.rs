//! Certified bisection. Every solver returns the final bracket and the
//! residual at the reported root so callers can audit convergence.

use thiserror::Error;

/// Outcome of a bisection run.
#[derive(Clone, Copy, Debug)]
pub struct RootReport {
    /// Midpoint of the final bracket.
    pub root: f64,
    /// Function value at `root`.
    pub residual: f64,
    /// Final bracket `[lo, hi]` with a sign change across it.
    pub bracket: (f64, f64),
    /// Number of bisection steps performed.
    pub iterations: u32,
}

/// Why a root could not be located.
#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum RootError {
    /// The supplied interval does not bracket a sign change.
    #[error("no sign change over [{lo}, {hi}] (f: {f_lo} .. {f_hi})")]
    NoSignChange {
        /// Lower endpoint.
        lo: f64,
        /// Upper endpoint.
        hi: f64,
        /// Function value at `lo`.
        f_lo: f64,
        /// Function value at `hi`.
        f_hi: f64,
    },
    /// Doubling the search interval never produced a sign change.
    #[error("bracket expansion from {lo} reached {hi} without a sign change")]
    NoBracket {
        /// Fixed lower endpoint.
        lo: f64,
        /// Last upper endpoint probed.
        hi: f64,
    },
}

const MAX_ITERS: u32 = 200;

/// Bisect `f` over `[lo, hi]` down to an interval of width `xtol`.
///
/// Requires a sign change (or an exact zero at an endpoint). The returned
/// residual is `f` evaluated at the final midpoint.
pub fn bisect(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<RootReport, RootError> {
    assert!(lo < hi, "bisect: need lo < hi, got [{lo}, {hi}]");
    assert!(xtol > 0.0);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(RootReport { root: lo, residual: 0.0, bracket: (lo, hi), iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(RootReport { root: hi, residual: 0.0, bracket: (lo, hi), iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b, mut fa) = (lo, hi, f_lo);
    let mut iterations = 0;
    while b - a > xtol && iterations < MAX_ITERS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval at floating-point resolution
        }
        let fm = f(mid);
        iterations += 1;
        if fm == 0.0 {
            return Ok(RootReport { root: mid, residual: 0.0, bracket: (a, b), iterations });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    Ok(RootReport { root, residual: f(root), bracket: (a, b), iterations })
}

/// Bisect a decreasing function known to be positive at `lo`: expand the
/// upper endpoint `lo + width`, doubling `width` until `f` turns negative,
/// then bisect. Fails with [`RootError::NoBracket`] after `max_doublings`.
pub fn bisect_decreasing(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    mut width: f64,
    max_doublings: u32,
    xtol: f64,
) -> Result<RootReport, RootError> {
    assert!(width > 0.0);
    let mut hi = lo + width;
    let mut tried = 0;
    while f(hi) > 0.0 {
        tried += 1;
        if tried > max_doublings {
            return Err(RootError::NoBracket { lo, hi });
        }
        width *= 2.0;
        hi = lo + width;
    }
    bisect(f, lo, hi, xtol)
}

/// Bisect a boolean transition: `pred` true at `lo`, false at `hi`.
/// Returns the midpoint and final bracket; no residual is meaningful.
pub fn bisect_predicate(
    mut pred: impl FnMut(f64) -> bool,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> (f64, (f64, f64)) {
    assert!(lo < hi);
    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0;
    while b - a > xtol && iterations < MAX_ITERS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if pred(mid) {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    (0.5 * (a + b), (a, b))
}
