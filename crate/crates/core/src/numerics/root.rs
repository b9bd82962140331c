// SPDX-License-Identifier: Apache-2.0

use super::{Bracket, NumericsError, Tolerances};

/// Smallest derivative magnitude for which a Newton step is attempted.
const MIN_SLOPE: f64 = 1e-14;

/// Result of a bracketed solve.
///
/// `lo` and `hi` are the final bracket. The residual `g - target` is
/// `<= 0` on one side and `>= 0` on the other, so either end can be used
/// when a caller needs a point on a particular side of the root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneRoot {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Solves `g(x) = target` for monotone `g` on `bracket`.
///
/// Newton steps start from the bracket midpoint; any step that leaves the
/// current bracket, is taken where `|dg| < 1e-14`, or follows an iteration
/// that halved neither the bracket nor the residual, is replaced by
/// bisection. The bracket shrinks on every iteration and `g` is never
/// evaluated outside the initial interval.
pub fn solve_monotone<G, D>(
    g: G,
    dg: D,
    target: f64,
    bracket: Bracket,
    tol: &Tolerances,
) -> Result<f64, NumericsError>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    solve_monotone_bracketed(g, dg, target, bracket, tol).map(|r| r.root)
}

pub fn solve_monotone_bracketed<G, D>(
    g: G,
    dg: D,
    target: f64,
    bracket: Bracket,
    tol: &Tolerances,
) -> Result<MonotoneRoot, NumericsError>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (bracket.lo(), bracket.hi());
    let res_lo = g(lo) - target;
    let res_hi = g(hi) - target;
    if !res_lo.is_finite() {
        return Err(NumericsError::NonFinite { at: lo });
    }
    if !res_hi.is_finite() {
        return Err(NumericsError::NonFinite { at: hi });
    }
    let done = |root, lo, hi, iterations| {
        Ok(MonotoneRoot {
            root,
            lo,
            hi,
            iterations,
        })
    };
    if res_lo == 0.0 {
        return done(lo, lo, hi, 0);
    }
    if res_hi == 0.0 {
        return done(hi, lo, hi, 0);
    }
    if res_lo.signum() == res_hi.signum() {
        return Err(NumericsError::NoBracket {
            target,
            res_lo,
            res_hi,
        });
    }
    // Orient so that the residual is negative towards `lo`.
    let orient = res_hi.signum();
    let (mut r_lo, mut r_hi) = (res_lo, res_hi);

    let mut x = 0.5 * (lo + hi);
    let mut prev_width = hi - lo;
    let mut prev_res = f64::INFINITY;
    for iter in 1..=tol.max_iter {
        let res = g(x) - target;
        if !res.is_finite() {
            return Err(NumericsError::NonFinite { at: x });
        }
        if res.abs() <= tol.root_abs {
            return done(x, lo, hi, iter);
        }
        if orient * res < 0.0 {
            lo = x;
            r_lo = res;
        } else {
            hi = x;
            r_hi = res;
        }
        if hi - lo <= tol.root_abs * x.abs().max(1.0) {
            let best = if r_lo.abs() <= r_hi.abs() { lo } else { hi };
            return done(best, lo, hi, iter);
        }

        // A step that neither halves the bracket nor the residual is
        // treated like an out-of-bracket step.
        let progress = hi - lo <= 0.5 * prev_width || res.abs() <= 0.5 * prev_res;
        prev_width = hi - lo;
        prev_res = res.abs();

        let slope = dg(x);
        let newton = x - res / slope;
        x = if progress && slope.abs() >= MIN_SLOPE && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(NumericsError::MaxIterations {
        iterations: tol.max_iter,
        x,
    })
}
