// SPDX-License-Identifier: Apache-2.0

//! Numerical kernels shared by the rest of the crate: a bracketed
//! Newton/bisection solver for monotone equations, adaptive Simpson
//! quadrature, the error function and a splitmix64 generator.

mod quad;
mod rng;
mod root;
mod special;

use thiserror::Error;

pub use quad::integrate_adaptive;
pub use rng::RngState;
pub use root::{solve_monotone, solve_monotone_bracketed, MonotoneRoot};
pub use special::{erf, erfc};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid interval [{lo}, {hi}]: need finite lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("target {target} is not bracketed: residuals {res_lo} at lo and {res_hi} at hi")]
    NoBracket {
        target: f64,
        res_lo: f64,
        res_hi: f64,
    },
    #[error("no convergence after {iterations} iterations (last x = {x})")]
    MaxIterations { iterations: usize, x: f64 },
    #[error("quadrature exceeded depth {depth} near t = {at}")]
    MaxDepth { depth: usize, at: f64 },
    #[error("function is not finite at t = {at}")]
    NonFinite { at: f64 },
}

/// Search interval `[lo, hi]` with finite `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Bracket { lo, hi })
        } else {
            Err(NumericsError::InvalidInterval { lo, hi })
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.clamp(self.lo, self.hi)
    }

    /// `n + 1` equally spaced nodes from `lo` to `hi`, both ends exact.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(1);
        (0..=n).map(move |i| {
            if i == n {
                self.hi
            } else {
                self.lo + self.width() * (i as f64) / (n as f64)
            }
        })
    }
}

impl TryFrom<[f64; 2]> for Bracket {
    type Error = NumericsError;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self, Self::Error> {
        Bracket::new(lo, hi)
    }
}

impl From<Bracket> for [f64; 2] {
    fn from(b: Bracket) -> Self {
        [b.lo, b.hi]
    }
}

/// Stopping rules for the solver and the quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub root_abs: f64,
    pub quad_abs: f64,
    pub max_iter: usize,
    pub max_quad_depth: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_abs: 1e-12,
            quad_abs: 1e-9,
            max_iter: 200,
            max_quad_depth: 60,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_rejects_degenerate() {
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(2.0, 1.0).is_err());
        assert!(Bracket::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(Bracket::new(0.0, f64::NAN).is_err());
        assert!(Bracket::new(-1.0, 1.0).is_ok());
    }

    #[test]
    fn grid_hits_both_ends() {
        let b = Bracket::new(-0.1, 0.85).unwrap();
        let g: Vec<f64> = b.grid(500).collect();
        assert_eq!(g.len(), 501);
        assert_eq!(g[0], -0.1);
        assert_eq!(g[500], 0.85);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bracket_serde_as_pair() {
        let b: Bracket = serde_json::from_str("[-2, 2]").unwrap();
        assert_eq!((b.lo(), b.hi()), (-2.0, 2.0));
        assert!(serde_json::from_str::<Bracket>("[2, -2]").is_err());
        assert_eq!(serde_json::to_string(&b).unwrap(), "[-2.0,2.0]");
    }
}
