// SPDX-License-Identifier: Apache-2.0

//! Numerical checks that an [`ImplicitDensity`] is a genuine density and
//! that its sampler reproduces its CDF.

use std::fmt;

use thiserror::Error;

use crate::numerics::{integrate_adaptive, Bracket, NumericsError, RngState, Tolerances};
use crate::transform::ImplicitDensity;

pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const CONSISTENCY_TOL: f64 = 1e-4;
/// Asymptotic one-sample KS coefficient at significance 0.01.
pub const KS_COEFFICIENT_ALPHA_01: f64 = 1.63;
/// Step of the central difference used on the CDF.
pub const FD_STEP: f64 = 1e-5;
pub const MIN_SAMPLES: usize = 1000;
pub const MIN_CONSISTENCY_POINTS: usize = 16;
pub const DEFAULT_CONSISTENCY_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("sample set is empty")]
    EmptyInput,
    #[error("samples are not sorted ascending at index {0}")]
    Unsorted(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `1.63 / sqrt(n)`.
pub fn ks_critical(n: usize) -> f64 {
    KS_COEFFICIENT_ALPHA_01 / (n as f64).sqrt()
}

/// Integrates the density over its support. Passes when the integral is
/// within `tol` of the mass `A` puts on `f(domain)`.
pub fn check_normalization(d: &ImplicitDensity, tol: f64) -> Result<(f64, bool), VerifyError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(VerifyError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let s = d.support_x();
    let integral = integrate_adaptive(|t| d.pdf_x(t), s.lo(), s.hi(), &Tolerances::default())?;
    Ok((integral, (integral - d.mass()).abs() <= tol))
}

/// Exact one-sample Kolmogorov–Smirnov statistic of ascending `samples`
/// against `cdf`: the largest of `|i/n - F(x_i)|` and `|(i-1)/n - F(x_i)|`.
pub fn ks_distance<F>(samples: &[f64], cdf: F) -> Result<f64, VerifyError>
where
    F: Fn(f64) -> f64,
{
    if samples.is_empty() {
        return Err(VerifyError::EmptyInput);
    }
    if let Some(i) = samples.windows(2).position(|w| w[1] < w[0]) {
        return Err(VerifyError::Unsorted(i + 1));
    }
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above.abs()).max(below.abs());
    }
    Ok(d.min(1.0))
}

/// Largest gap between a central difference of the CDF and the density over
/// `grid_points` nodes spanning the support. Nodes within `10 * h` of a
/// support end are skipped since the density may jump there.
pub fn cdf_pdf_consistency(d: &ImplicitDensity, grid_points: usize) -> Result<f64, VerifyError> {
    cdf_pdf_consistency_on(d, d.support_x(), grid_points)
}

/// As [`cdf_pdf_consistency`], over an explicit range.
pub fn cdf_pdf_consistency_on(
    d: &ImplicitDensity,
    range: Bracket,
    grid_points: usize,
) -> Result<f64, VerifyError> {
    if grid_points < MIN_CONSISTENCY_POINTS {
        return Err(VerifyError::InvalidInput(format!(
            "need at least {MIN_CONSISTENCY_POINTS} grid points, got {grid_points}"
        )));
    }
    let h = FD_STEP;
    let support = d.support_x();
    let near_edge = |t: f64| {
        [support.lo(), support.hi(), d.map().domain().lo(), d.map().domain().hi()]
            .iter()
            .any(|&e| (t - e).abs() < 10.0 * h)
    };
    let worst = range
        .grid(grid_points - 1)
        .filter(|&t| !near_edge(t))
        .map(|t| {
            let fd = (d.cdf_x(t + h) - d.cdf_x(t - h)) / (2.0 * h);
            (fd - d.pdf_x(t)).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Outcome of [`run_full_verification`]. Each flag is its statistic
/// compared against the matching threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub normalization_integral: f64,
    pub normalization_pass: bool,
    pub ks_statistic: f64,
    pub ks_critical: f64,
    pub ks_pass: bool,
    pub max_cdf_pdf_deviation: f64,
    pub consistency_pass: bool,
    pub n_samples: usize,
    pub seed: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.normalization_pass && self.ks_pass && self.consistency_pass
    }
}

/// `key=value` lines, one per field, in declaration order.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "normalization_integral={}", crate::problem::format_number(self.normalization_integral))?;
        writeln!(f, "normalization_pass={}", self.normalization_pass)?;
        writeln!(f, "ks_statistic={}", crate::problem::format_number(self.ks_statistic))?;
        writeln!(f, "ks_critical={}", crate::problem::format_number(self.ks_critical))?;
        writeln!(f, "ks_pass={}", self.ks_pass)?;
        writeln!(f, "max_cdf_pdf_deviation={}", crate::problem::format_number(self.max_cdf_pdf_deviation))?;
        writeln!(f, "consistency_pass={}", self.consistency_pass)?;
        writeln!(f, "n_samples={}", self.n_samples)?;
        write!(f, "seed={}", self.seed)
    }
}

/// Normalization (tol 1e-6), KS against the CDF at `alpha = 0.01` and
/// CDF/density consistency (tol 1e-4). Deterministic for a fixed seed.
pub fn run_full_verification(
    d: &ImplicitDensity,
    n_samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    run_verification_with_sampler(d, n_samples, seed, |rng| d.sample_x(rng))
}

/// As [`run_full_verification`] with samples drawn by `sampler` instead of
/// the density's own sampler.
pub fn run_verification_with_sampler<S>(
    d: &ImplicitDensity,
    n_samples: usize,
    seed: u64,
    mut sampler: S,
) -> Result<VerificationReport, VerifyError>
where
    S: FnMut(&mut RngState) -> f64,
{
    if n_samples < MIN_SAMPLES {
        return Err(VerifyError::InvalidInput(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let (normalization_integral, normalization_pass) = check_normalization(d, NORMALIZATION_TOL)?;

    let mut rng = RngState::new(seed);
    let mut samples: Vec<f64> = (0..n_samples).map(|_| sampler(&mut rng)).collect();
    samples.sort_by(f64::total_cmp);
    let ks_statistic = if d.is_full() {
        ks_distance(&samples, |t| d.cdf_x(t))?
    } else {
        // Truncated laws sample X given A in f(domain).
        let base = d.cdf_x(d.map().domain().lo());
        let mass = d.mass();
        ks_distance(&samples, |t| ((d.cdf_x(t) - base) / mass).clamp(0.0, 1.0))?
    };
    let ks_critical = ks_critical(n_samples);

    let max_cdf_pdf_deviation = cdf_pdf_consistency(d, DEFAULT_CONSISTENCY_POINTS)?;

    Ok(VerificationReport {
        normalization_integral,
        normalization_pass,
        ks_statistic,
        ks_critical,
        ks_pass: ks_statistic <= ks_critical,
        max_cdf_pdf_deviation,
        consistency_pass: max_cdf_pdf_deviation <= CONSISTENCY_TOL,
        n_samples,
        seed,
    })
}
