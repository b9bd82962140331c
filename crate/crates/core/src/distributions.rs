// SPDX-License-Identifier: Apache-2.0

//! Laws for the source variable `A`.
//!
//! Every family exposes density, CDF, quantile and inverse-transform
//! sampling. Supports are closed intervals: the uniform density at its
//! endpoints is `1/(b-a)`, and a custom density is evaluated on
//! `[lo, hi]` inclusive.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Expr, ParseError};
use crate::numerics::{
    erfc, integrate_adaptive, solve_monotone, Bracket, NumericsError, RngState, Tolerances,
};

/// Intervals used to screen a custom density for negative values.
const CUSTOM_CHECK_INTERVALS: usize = 1024;
/// Allowed deviation of a custom density's total mass from one.
const CUSTOM_MASS_TOL: f64 = 1e-6;
/// Upper tail dropped from the exponential when a finite range is needed.
const EXP_TAIL: f64 = 1e-12;
/// Half-width, in standard deviations, of the normal's finite range.
const NORMAL_HALF_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("custom density is negative or not finite at {at} (value {value})")]
    BadDensity { at: f64, value: f64 },
    #[error("custom density integrates to {integral}, not 1")]
    NotNormalized { integral: f64 },
    #[error("probability {0} is outside (0, 1)")]
    Domain(f64),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A validated user-supplied density on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomPdf {
    pdf: Expr,
    support: Bracket,
}

impl CustomPdf {
    pub fn expr(&self) -> &Expr {
        &self.pdf
    }

    pub fn support(&self) -> Bracket {
        self.support
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Normal { mean: f64, stddev: f64 },
    Custom(CustomPdf),
}

/// The law of `A`. Construct through the checked constructors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub struct SourceDistribution {
    family: Family,
}

impl SourceDistribution {
    pub fn uniform(a: f64, b: f64) -> Result<Self, DistributionError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(DistributionError::InvalidParameter(format!(
                "uniform needs finite a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self::from_family(Family::Uniform { a, b }))
    }

    pub fn exponential(rate: f64) -> Result<Self, DistributionError> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(DistributionError::InvalidParameter(format!(
                "exponential needs rate > 0, got {rate}"
            )));
        }
        Ok(Self::from_family(Family::Exponential { rate }))
    }

    pub fn normal(mean: f64, stddev: f64) -> Result<Self, DistributionError> {
        if !(mean.is_finite() && stddev.is_finite() && stddev > 0.0) {
            return Err(DistributionError::InvalidParameter(format!(
                "normal needs finite mean and stddev > 0, got mean = {mean}, stddev = {stddev}"
            )));
        }
        Ok(Self::from_family(Family::Normal { mean, stddev }))
    }

    /// A density given as an expression in `t` on `[lo, hi]`.
    ///
    /// Rejected unless it is finite and non-negative on a 1025-node grid and
    /// integrates to one within 1e-6. No rescaling is attempted.
    pub fn custom(pdf: Expr, lo: f64, hi: f64) -> Result<Self, DistributionError> {
        let support = Bracket::new(lo, hi).map_err(|_| {
            DistributionError::InvalidParameter(format!(
                "custom support needs finite lo < hi, got [{lo}, {hi}]"
            ))
        })?;
        for t in support.grid(CUSTOM_CHECK_INTERVALS) {
            let value = pdf.eval(t);
            if !(value.is_finite() && value >= 0.0) {
                return Err(DistributionError::BadDensity { at: t, value });
            }
        }
        let integral = integrate_adaptive(|t| pdf.eval(t), lo, hi, &Tolerances::default())?;
        if (integral - 1.0).abs() > CUSTOM_MASS_TOL {
            return Err(DistributionError::NotNormalized { integral });
        }
        Ok(Self::from_family(Family::Custom(CustomPdf { pdf, support })))
    }

    fn from_family(family: Family) -> Self {
        SourceDistribution { family }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Closed support; unbounded ends are infinite.
    pub fn support(&self) -> (f64, f64) {
        match &self.family {
            Family::Uniform { a, b } => (*a, *b),
            Family::Exponential { .. } => (0.0, f64::INFINITY),
            Family::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Custom(c) => (c.support.lo(), c.support.hi()),
        }
    }

    /// Finite range carrying all but a negligible tail, for quadrature only:
    /// the exponential is cut at its `1 - 1e-12` quantile, the normal at
    /// eight standard deviations.
    pub fn effective_support(&self) -> Bracket {
        let (lo, hi) = match &self.family {
            Family::Uniform { a, b } => (*a, *b),
            Family::Exponential { rate } => (0.0, -EXP_TAIL.ln() / rate),
            Family::Normal { mean, stddev } => (
                mean - NORMAL_HALF_WIDTH * stddev,
                mean + NORMAL_HALF_WIDTH * stddev,
            ),
            Family::Custom(c) => return c.support,
        };
        Bracket::new(lo, hi).expect("parameters validated at construction")
    }

    pub fn pdf(&self, a: f64) -> f64 {
        match &self.family {
            Family::Uniform { a: lo, b: hi } => {
                if *lo <= a && a <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Family::Exponential { rate } => {
                if a >= 0.0 {
                    rate * (-rate * a).exp()
                } else {
                    0.0
                }
            }
            Family::Normal { mean, stddev } => {
                let z = (a - mean) / stddev;
                (-0.5 * z * z).exp() / (stddev * (2.0 * PI).sqrt())
            }
            Family::Custom(c) => {
                if c.support.contains(a) {
                    c.pdf.eval(a).max(0.0)
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(A <= a)`. For a custom law this is a quadrature from the lower
    /// support end and is NaN if the quadrature fails.
    pub fn cdf(&self, a: f64) -> f64 {
        match &self.family {
            Family::Uniform { a: lo, b: hi } => ((a - lo) / (hi - lo)).clamp(0.0, 1.0),
            Family::Exponential { rate } => {
                if a <= 0.0 {
                    0.0
                } else {
                    -(-rate * a).exp_m1()
                }
            }
            Family::Normal { mean, stddev } => standard_normal_cdf((a - mean) / stddev),
            Family::Custom(c) => {
                if a <= c.support.lo() {
                    0.0
                } else {
                    let upper = a.min(c.support.hi());
                    integrate_adaptive(|t| c.pdf.eval(t), c.support.lo(), upper, &Tolerances::default())
                        .map(|v| v.clamp(0.0, 1.0))
                        .unwrap_or(f64::NAN)
                }
            }
        }
    }

    /// The `a` with `cdf(a) = p`, for `p` strictly inside (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64, DistributionError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(DistributionError::Domain(p));
        }
        Ok(match &self.family {
            Family::Uniform { a, b } => a + p * (b - a),
            Family::Exponential { rate } => -(-p).ln_1p() / rate,
            Family::Normal { mean, stddev } => mean + stddev * standard_normal_quantile(p),
            Family::Custom(c) => {
                let (lo, hi) = (c.support.lo(), c.support.hi());
                // Total mass is only within 1e-6 of one.
                if p >= self.cdf(hi) {
                    hi
                } else {
                    solve_monotone(
                        |a| self.cdf(a),
                        |a| self.pdf(a),
                        p,
                        c.support,
                        &Tolerances::default(),
                    )?
                    .clamp(lo, hi)
                }
            }
        })
    }

    /// Inverse-transform draw: `quantile(u)` with `u` uniform on (0, 1).
    /// Only a failed custom-law solve can yield NaN.
    pub fn sample(&self, rng: &mut RngState) -> f64 {
        let u = rng.next_uniform();
        self.quantile(u).unwrap_or(f64::NAN)
    }
}

pub(crate) fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn standard_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Rational initial guess (Acklam) refined by Halley steps on the CDF.
/// The upper half is mirrored from the lower one so the refinement always
/// works in the tail where the CDF is computed without cancellation.
fn standard_normal_quantile(p: f64) -> f64 {
    if p > 0.5 {
        return -standard_normal_quantile(1.0 - p);
    }
    let mut x = acklam(p);
    for _ in 0..3 {
        let err = standard_normal_cdf(x) - p;
        let density = standard_normal_pdf(x);
        if density == 0.0 || err == 0.0 {
            break;
        }
        let u = err / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Wire form of a distribution inside a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionSpec {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Normal { mean: f64, stddev: f64 },
    Custom { pdf: String, lo: f64, hi: f64 },
}

impl TryFrom<DistributionSpec> for SourceDistribution {
    type Error = DistributionError;

    fn try_from(spec: DistributionSpec) -> Result<Self, Self::Error> {
        match spec {
            DistributionSpec::Uniform { a, b } => Self::uniform(a, b),
            DistributionSpec::Exponential { rate } => Self::exponential(rate),
            DistributionSpec::Normal { mean, stddev } => Self::normal(mean, stddev),
            DistributionSpec::Custom { pdf, lo, hi } => Self::custom(Expr::parse(&pdf)?, lo, hi),
        }
    }
}

impl From<SourceDistribution> for DistributionSpec {
    fn from(d: SourceDistribution) -> Self {
        match d.family {
            Family::Uniform { a, b } => DistributionSpec::Uniform { a, b },
            Family::Exponential { rate } => DistributionSpec::Exponential { rate },
            Family::Normal { mean, stddev } => DistributionSpec::Normal { mean, stddev },
            Family::Custom(c) => DistributionSpec::Custom {
                pdf: c.pdf.to_text(),
                lo: c.support.lo(),
                hi: c.support.hi(),
            },
        }
    }
}
