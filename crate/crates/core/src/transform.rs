// SPDX-License-Identifier: Apache-2.0

//! Law of `X` defined implicitly by `f(X) = A`.
//!
//! For strictly monotone, continuously differentiable `f` the density of `X`
//! is `f_A(f(t)) * |f'(t)|`. Its CDF is `F_A(f(t))` when `f` increases and
//! `1 - F_A(f(t))` when it decreases. Quantiles and samples are obtained by
//! solving `f(t) = a` numerically for the matching value `a` of `A`.
//!
//! All of this happens on a finite working domain. Monotonicity is checked
//! on a dense grid of the symbolic derivative, so an `f` that oscillates
//! between grid nodes will get through the check.

use thiserror::Error;

use crate::distributions::{DistributionError, SourceDistribution};
use crate::expr::{Expr, ParseError};
use crate::numerics::{
    solve_monotone, solve_monotone_bracketed, Bracket, NumericsError, RngState, Tolerances,
};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const MIN_GRID_POINTS: usize = 64;
/// Derivative magnitudes below this count as a flat spot.
pub const DERIVATIVE_EPS: f64 = 1e-12;
/// Largest mass of `A` that may fall outside `f(domain)` for a full law.
pub const MASS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("f is not strictly monotone: derivative vanishes or changes sign near t = {t}")]
    NotMonotone { t: f64 },
    #[error("f or its derivative is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("support mismatch: {0}")]
    SupportMismatch(String),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A function certified strictly monotone on its working domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneMap {
    f: Expr,
    df: Expr,
    domain: Bracket,
    direction: Direction,
    derivative_floor: f64,
}

impl MonotoneMap {
    /// Differentiates `f` and checks the derivative at `grid_points + 1`
    /// equally spaced nodes of `domain`: every value must be finite, share
    /// one sign and have magnitude at least 1e-12.
    pub fn build(f: Expr, domain: Bracket, grid_points: usize) -> Result<Self, TransformError> {
        if grid_points < MIN_GRID_POINTS {
            return Err(TransformError::InvalidInput(format!(
                "need at least {MIN_GRID_POINTS} grid points, got {grid_points}"
            )));
        }
        let df = f.differentiate();
        let mut sign = 0.0;
        let mut floor = f64::INFINITY;
        for t in domain.grid(grid_points) {
            let (value, slope) = (f.eval(t), df.eval(t));
            if !(value.is_finite() && slope.is_finite()) {
                return Err(TransformError::NonFinite { t });
            }
            if slope.abs() < DERIVATIVE_EPS {
                return Err(TransformError::NotMonotone { t });
            }
            if sign == 0.0 {
                sign = slope.signum();
            } else if slope.signum() != sign {
                return Err(TransformError::NotMonotone { t });
            }
            floor = floor.min(slope.abs());
        }
        let direction = if sign > 0.0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        Ok(MonotoneMap {
            f,
            df,
            domain,
            direction,
            derivative_floor: floor,
        })
    }

    /// Parses `source` and builds with the default 4096-interval grid.
    pub fn parse(source: &str, domain: Bracket) -> Result<Self, TransformError> {
        Self::build(Expr::parse(source)?, domain, DEFAULT_GRID_POINTS)
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn df(&self) -> &Expr {
        &self.df
    }

    pub fn domain(&self) -> Bracket {
        self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Smallest `|f'|` seen on the verification grid.
    pub fn derivative_floor(&self) -> f64 {
        self.derivative_floor
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.f.eval(t)
    }

    #[inline]
    pub fn slope(&self, t: f64) -> f64 {
        self.df.eval(t)
    }

    /// `f(domain)` as an ordered interval.
    pub fn image(&self) -> (f64, f64) {
        let (a, b) = (self.eval(self.domain.lo()), self.eval(self.domain.hi()));
        match self.direction {
            Direction::Increasing => (a, b),
            Direction::Decreasing => (b, a),
        }
    }

    fn solve(&self, target: f64) -> Result<f64, NumericsError> {
        solve_monotone(
            |t| self.eval(t),
            |t| self.slope(t),
            target,
            self.domain,
            &Tolerances::default(),
        )
    }
}

/// The law of `X` for a monotone map and a source law.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitDensity {
    map: MonotoneMap,
    source: SourceDistribution,
    x_support: Bracket,
    mass: f64,
}

impl ImplicitDensity {
    /// Requires `P(A in f(domain)) >= 1 - 1e-9`, so samples and the CDF
    /// describe the whole law of `X`.
    pub fn new(map: MonotoneMap, source: SourceDistribution) -> Result<Self, TransformError> {
        let d = Self::truncated(map, source)?;
        if d.mass < 1.0 - MASS_SLACK {
            let (lo, hi) = d.map.image();
            return Err(TransformError::SupportMismatch(format!(
                "f(domain) = [{lo}, {hi}] carries only {} of the mass of A",
                d.mass
            )));
        }
        Ok(d)
    }

    /// Accepts any domain whose image overlaps the source support with
    /// positive mass. The density then integrates to [`Self::mass`] and
    /// [`Self::sample_x`] draws from `X` conditioned on `A in f(domain)`.
    pub fn truncated(map: MonotoneMap, source: SourceDistribution) -> Result<Self, TransformError> {
        let (img_lo, img_hi) = map.image();
        let (s_lo, s_hi) = source.support();
        let (a_lo, a_hi) = (img_lo.max(s_lo), img_hi.min(s_hi));
        if a_lo >= a_hi {
            return Err(TransformError::SupportMismatch(format!(
                "f(domain) = [{img_lo}, {img_hi}] misses the support [{s_lo}, {s_hi}] of A"
            )));
        }
        let mass = source.cdf(img_hi) - source.cdf(img_lo);
        if mass.is_nan() || mass <= 0.0 {
            return Err(TransformError::SupportMismatch(format!(
                "A puts no mass on f(domain) = [{img_lo}, {img_hi}]"
            )));
        }

        let at_lo = support_end(&map, a_lo, img_lo, (s_lo, s_hi))?;
        let at_hi = support_end(&map, a_hi, img_hi, (s_lo, s_hi))?;
        let (x_lo, x_hi) = match map.direction {
            Direction::Increasing => (at_lo, at_hi),
            Direction::Decreasing => (at_hi, at_lo),
        };
        let x_support = Bracket::new(x_lo, x_hi).map_err(|_| {
            TransformError::SupportMismatch(format!(
                "preimage of the support of A collapses to [{x_lo}, {x_hi}]"
            ))
        })?;
        Ok(ImplicitDensity {
            map,
            source,
            x_support,
            mass: mass.min(1.0),
        })
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn source(&self) -> &SourceDistribution {
        &self.source
    }

    /// `P(A in f(domain))`, the mass the density carries.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn is_full(&self) -> bool {
        self.mass >= 1.0 - MASS_SLACK
    }

    /// Largest subinterval of the domain where the density can be positive.
    pub fn support_x(&self) -> Bracket {
        self.x_support
    }

    /// `f_A(f(t)) * |f'(t)|` inside the domain, zero outside.
    pub fn pdf_x(&self, t: f64) -> f64 {
        if !self.map.domain.contains(t) {
            return 0.0;
        }
        self.source.pdf(self.map.eval(t)) * self.map.slope(t).abs()
    }

    /// `F_A(f(t))` for increasing `f`, `1 - F_A(f(t))` for decreasing `f`.
    /// Outside the domain the value at the nearest domain end is returned.
    pub fn cdf_x(&self, t: f64) -> f64 {
        let a = self.map.eval(self.map.domain.clamp(t));
        let p = match self.map.direction {
            Direction::Increasing => self.source.cdf(a),
            Direction::Decreasing => 1.0 - self.source.cdf(a),
        };
        p.clamp(0.0, 1.0)
    }

    pub fn quantile_x(&self, p: f64) -> Result<f64, TransformError> {
        let q = match self.map.direction {
            Direction::Increasing => p,
            Direction::Decreasing => 1.0 - p,
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(DistributionError::Domain(p).into());
        }
        let a = self.source.quantile(q)?;
        let (lo, hi) = self.map.image();
        if !(lo <= a && a <= hi) {
            return Err(TransformError::SupportMismatch(format!(
                "quantile {a} of A lies outside f(domain) = [{lo}, {hi}]"
            )));
        }
        Ok(self.map.solve(a)?)
    }

    /// Draws `a` from `A` and returns the solution of `f(t) = a`.
    ///
    /// For a full law `a` comes straight from the source sampler; the
    /// at most 1e-9 chance of landing outside `f(domain)` is clamped to the
    /// domain end. A truncated law draws `a` conditioned on `f(domain)`.
    /// Returns NaN only if the solver fails, which the construction-time
    /// checks rule out for well-behaved `f`.
    pub fn sample_x(&self, rng: &mut RngState) -> f64 {
        let (lo, hi) = self.map.image();
        let a = if self.is_full() {
            self.source.sample(rng)
        } else {
            let (c_lo, c_hi) = (self.source.cdf(lo), self.source.cdf(hi));
            let u = rng.next_uniform();
            let p = (c_lo + u * (c_hi - c_lo)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
            self.source.quantile(p).unwrap_or(f64::NAN)
        };
        if a.is_nan() {
            return a;
        }
        self.map.solve(a.clamp(lo, hi)).unwrap_or(f64::NAN)
    }

    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngState::new(seed);
        (0..n).map(|_| self.sample_x(&mut rng)).collect()
    }
}

/// Preimage of one end of `f(domain) ∩ supp(A)`.
///
/// A clipped end maps back to the matching domain end. Otherwise the solved
/// root is used if `f` there stays inside the closed source support, else
/// the nearest float that does, so the density is positive at both ends of
/// the returned interval.
fn support_end(
    map: &MonotoneMap,
    a: f64,
    image_end: f64,
    (s_lo, s_hi): (f64, f64),
) -> Result<f64, TransformError> {
    let domain = map.domain;
    if a == image_end {
        let (first, second) = (domain.lo(), domain.hi());
        return Ok(if map.eval(first) == image_end { first } else { second });
    }
    let r = solve_monotone_bracketed(
        |t| map.eval(t),
        |t| map.slope(t),
        a,
        domain,
        &Tolerances::default(),
    )?;
    let inside = |t: f64| {
        let v = map.eval(t);
        s_lo <= v && v <= s_hi
    };
    if inside(r.root) {
        return Ok(r.root);
    }
    // The root rounded to the wrong side of the support end: bisect on the
    // inside/outside predicate down to adjacent floats.
    let mut good = [r.lo, r.hi]
        .into_iter()
        .find(|&t| inside(t))
        .ok_or_else(|| {
            TransformError::SupportMismatch(format!("cannot locate preimage of support end {a}"))
        })?;
    let mut bad = r.root;
    loop {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            return Ok(good);
        }
        if inside(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bracket(lo: f64, hi: f64) -> Bracket {
        Bracket::new(lo, hi).unwrap()
    }

    fn density(f: &str, domain: (f64, f64), source: SourceDistribution) -> ImplicitDensity {
        let map = MonotoneMap::parse(f, bracket(domain.0, domain.1)).unwrap();
        ImplicitDensity::new(map, source).unwrap()
    }

    fn unit() -> SourceDistribution {
        SourceDistribution::uniform(0.0, 1.0).unwrap()
    }

    /// Plain bisection to 1e-15 width; independent of the hybrid solver.
    fn bisect(g: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quintic_map_is_increasing_with_unit_floor() {
        let m = MonotoneMap::parse("t^5 + t", bracket(-2.0, 2.0)).unwrap();
        assert_eq!(m.direction(), Direction::Increasing);
        assert_eq!(m.derivative_floor(), 1.0);
    }

    #[test]
    fn sine_perturbed_floor() {
        let m = MonotoneMap::parse("t + .9*sin(t)", bracket(-10.0, 10.0)).unwrap();
        assert_eq!(m.direction(), Direction::Increasing);
        let floor = m.derivative_floor();
        assert!((0.1..=0.1 + 1e-3).contains(&floor), "{floor}");
    }

    #[test]
    fn turning_point_is_rejected() {
        let err = MonotoneMap::parse("sin(t)", bracket(0.0, 6.3)).unwrap_err();
        match err {
            TransformError::NotMonotone { t } => assert!(t > 1.5 && t < 1.65, "{t}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stationary_point_is_rejected() {
        // t^3 has f'(0) = 0 exactly on a grid node.
        let err = MonotoneMap::parse("t^3", bracket(-1.0, 1.0)).unwrap_err();
        assert_eq!(err, TransformError::NotMonotone { t: 0.0 });
    }

    #[test]
    fn non_finite_is_rejected() {
        let err = MonotoneMap::parse("ln(t)", bracket(-1.0, 1.0)).unwrap_err();
        assert!(matches!(err, TransformError::NonFinite { t } if t == -1.0));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = Expr::parse("t").unwrap();
        assert!(matches!(
            MonotoneMap::build(f, bracket(0.0, 1.0), 10),
            Err(TransformError::InvalidInput(_))
        ));
    }

    #[test]
    fn pdf_x_at_origin() {
        let ex1 = density("t^5+t", (-2.0, 2.0), unit());
        assert_eq!(ex1.pdf_x(0.0), 1.0);
        let ex2 = density("t^5+t", (-3.0, 3.0), SourceDistribution::exponential(0.1).unwrap());
        assert_eq!(ex2.pdf_x(0.0), 0.1);
        let ex4 = density("t^5+t", (-2.0, 2.0), SourceDistribution::normal(0.0, 1.0).unwrap());
        assert!((ex4.pdf_x(0.0) - 0.398_942_280_4).abs() <= 1e-10);
        assert_eq!(ex4.pdf_x(0.0), 1.0 / (2.0 * std::f64::consts::PI).sqrt());
        assert_eq!(ex4.pdf_x(2.5), 0.0);
    }

    #[test]
    fn cdf_x_examples() {
        let ex1 = density("t^5+t", (-2.0, 2.0), unit());
        let root = bisect(|t| t.powi(5) + t, 1.0, 0.0, 1.0);
        assert!((ex1.cdf_x(root) - 1.0).abs() <= 1e-9);
        assert!((ex1.cdf_x(0.754_877_666_246_693) - 1.0).abs() <= 1e-9);
        assert_eq!(ex1.cdf_x(0.0), 0.0);
        assert_eq!(ex1.cdf_x(-5.0), 0.0);
        assert_eq!(ex1.cdf_x(5.0), 1.0);

        let dec = density("-t", (-2.0, 2.0), unit());
        assert_eq!(dec.map().direction(), Direction::Decreasing);
        assert_eq!(dec.cdf_x(-0.25), 0.75);
    }

    #[test]
    fn quantile_x_examples() {
        let ex1 = density("t^5+t", (-2.0, 2.0), unit());
        let near_one = bisect(|t| t.powi(5) + t, 0.999_999, 0.0, 1.0);
        let q = ex1.quantile_x(0.999_999).unwrap();
        assert!((q - near_one).abs() <= 1e-12);
        assert!((q - 0.754_877).abs() <= 1e-4);

        let median = bisect(|t| t.powi(5) + t, 0.5, 0.0, 1.0);
        let q = ex1.quantile_x(0.5).unwrap();
        assert!((q - median).abs() <= 1e-12);
        assert!((q - 0.475_652_743_539_604_8).abs() <= 1e-12);

        let id = density("t", (-2.0, 2.0), unit());
        assert_eq!(id.quantile_x(0.25).unwrap(), 0.25);
        assert!(id.quantile_x(0.0).is_err());
        assert!(id.quantile_x(1.0).is_err());
    }

    #[test]
    fn quantile_outside_image_is_support_mismatch() {
        let map = MonotoneMap::parse("t", bracket(0.0, 0.5)).unwrap();
        let d = ImplicitDensity::truncated(map, unit()).unwrap();
        assert!(matches!(d.quantile_x(0.75), Err(TransformError::SupportMismatch(_))));
        assert_eq!(d.quantile_x(0.25).unwrap(), 0.25);
    }

    #[test]
    fn support_examples() {
        let ex1 = density("t^5+t", (-2.0, 2.0), unit());
        let s = ex1.support_x();
        assert_eq!(s.lo(), 0.0);
        assert!((s.hi() - 0.754_877_666_246_693).abs() <= 1e-9);
        assert!(ex1.pdf_x(s.hi()) > 0.0);

        let ex3 = density("t + .9*sin(t)", (-10.0, 10.0), unit());
        let s = ex3.support_x();
        let r = bisect(|t| t + 0.9 * t.sin(), 1.0, 0.0, 1.0);
        assert_eq!(s.lo(), 0.0);
        assert!((s.hi() - r).abs() <= 1e-9);
        assert!((r - 0.5385).abs() <= 1e-4);

        let ex4 = density("t^5+t", (-2.0, 2.0), SourceDistribution::normal(0.0, 1.0).unwrap());
        assert_eq!(ex4.support_x(), bracket(-2.0, 2.0));
    }

    #[test]
    fn support_of_decreasing_map() {
        let d = density("-t", (-2.0, 2.0), unit());
        assert_eq!(d.support_x(), bracket(-1.0, 0.0));
    }

    #[test]
    fn disjoint_supports() {
        let map = MonotoneMap::parse("t", bracket(2.0, 3.0)).unwrap();
        assert!(matches!(
            ImplicitDensity::new(map.clone(), unit()),
            Err(TransformError::SupportMismatch(_))
        ));
        assert!(matches!(
            ImplicitDensity::truncated(map, unit()),
            Err(TransformError::SupportMismatch(_))
        ));
    }

    #[test]
    fn partial_mass_needs_truncated_constructor() {
        let map = MonotoneMap::parse("t^5+t", bracket(-2.0, 2.0)).unwrap();
        let exp = SourceDistribution::exponential(0.1).unwrap();
        assert!(matches!(
            ImplicitDensity::new(map.clone(), exp.clone()),
            Err(TransformError::SupportMismatch(_))
        ));
        let d = ImplicitDensity::truncated(map, exp).unwrap();
        assert!((d.mass() - (1.0 - (-3.4_f64).exp())).abs() <= 1e-15);
        assert!(!d.is_full());
    }

    #[test]
    fn truncated_samples_stay_in_support() {
        let map = MonotoneMap::parse("t", bracket(0.0, 0.5)).unwrap();
        let d = ImplicitDensity::truncated(map, unit()).unwrap();
        let mut rng = RngState::new(3);
        for _ in 0..1000 {
            let x = d.sample_x(&mut rng);
            assert!((0.0..=0.5).contains(&x));
        }
    }

    #[test]
    fn identity_samples_are_raw_draws() {
        let d = density("t", (-2.0, 2.0), unit());
        let mut a = RngState::new(11);
        let mut b = RngState::new(11);
        for _ in 0..1000 {
            assert_eq!(d.sample_x(&mut a), b.next_uniform());
        }
    }

    #[test]
    fn samples_are_reproducible() {
        let d = density("t^5+t", (-2.0, 2.0), unit());
        let a = d.sample_n(500, 42);
        let b = d.sample_n(500, 42);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn affine_map_scales_density() {
        let src = SourceDistribution::normal(0.3, 1.7).unwrap();
        let d = density("2.5*t - 1", (-5.0, 5.0), src.clone());
        for t in d.map().domain().grid(200) {
            assert_eq!(d.pdf_x(t), src.pdf(2.5 * t - 1.0) * 2.5);
        }
    }

    #[test]
    fn mirrored_map_mirrors_density() {
        // g(s) = f(-s) is decreasing and carries the same law reflected.
        let src = SourceDistribution::exponential(0.1).unwrap();
        let d = density("t^5+t", (-3.0, 3.0), src.clone());
        let m = density("(-t)^5 + (-t)", (-3.0, 3.0), src);
        assert_eq!(m.map().direction(), Direction::Decreasing);
        for t in d.map().domain().grid(1000) {
            let (a, b) = (d.pdf_x(t), m.pdf_x(-t));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "t = {t}");
        }
        // With a symmetric source, -f(-t) reproduces the density exactly.
        let normal = SourceDistribution::normal(0.0, 1.0).unwrap();
        let d = density("t^5+t", (-2.0, 2.0), normal.clone());
        let m = density("-((-t)^5 + (-t))", (-2.0, 2.0), normal);
        for t in d.map().domain().grid(1000) {
            assert!((d.pdf_x(t) - m.pdf_x(-t)).abs() <= 1e-12);
        }
    }
}
