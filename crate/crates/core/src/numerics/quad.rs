// SPDX-License-Identifier: Apache-2.0

use super::{NumericsError, Tolerances};

/// Levels of forced subdivision before the error test may accept a panel,
/// so a coarse panel cannot hide a narrow peak between its nodes.
const MIN_DEPTH: usize = 4;

/// Adaptive Simpson quadrature of `g` over `[lo, hi]`.
///
/// A panel is accepted when the two-half estimate differs from the whole
/// estimate by at most `15 * local_tol`; the local tolerance halves with
/// every split so the absolute error target is `tol.quad_abs` overall.
/// Accepted panels get the Richardson correction `(fine - coarse) / 15`.
pub fn integrate_adaptive<G>(g: G, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64, NumericsError>
where
    G: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    if lo == hi {
        return Ok(0.0);
    }
    let eval = |t: f64| {
        let v = g(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFinite { at: t })
        }
    };
    let fa = eval(lo)?;
    let fb = eval(hi)?;
    let mid = 0.5 * (lo + hi);
    let fm = eval(mid)?;
    let whole = simpson(lo, hi, fa, fm, fb);
    let panel = Panel {
        a: lo,
        b: hi,
        fa,
        fm,
        fb,
        whole,
    };
    refine(&eval, panel, tol.quad_abs, 0, tol.max_quad_depth)
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<E>(eval: &E, p: Panel, tol: f64, depth: usize, max_depth: usize) -> Result<f64, NumericsError>
where
    E: Fn(f64) -> Result<f64, NumericsError>,
{
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth {
        return Err(NumericsError::MaxDepth { depth, at: m });
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(refine(eval, l, 0.5 * tol, depth + 1, max_depth)?
        + refine(eval, r, 0.5 * tol, depth + 1, max_depth)?)
}
