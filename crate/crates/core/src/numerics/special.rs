// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_LIMIT: f64 = 2.0;

/// Error function, absolute error below 1e-10 (in practice a few ulp).
///
/// Uses the everywhere-positive series
/// `erf(x) = 2/sqrt(pi) * exp(-x^2) * sum (2x^2)^n x / (1*3*...*(2n+1))`
/// for `|x| <= 2` and `1 - erfc(|x|)` from a continued fraction beyond.
/// Computed on `|x|` so `erf(-x) == -erf(x)` holds bit for bit.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let a = x.abs();
    let v = if a <= SERIES_LIMIT {
        erf_series(a)
    } else {
        1.0 - erfc_cf(a)
    };
    v.copysign(x)
}

/// Complementary error function `1 - erf(x)`, accurate in the upper tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x > SERIES_LIMIT {
        erfc_cf(x)
    } else if x < -SERIES_LIMIT {
        2.0 - erfc_cf(-x)
    } else {
        1.0 - erf(x)
    }
}

fn erf_series(a: f64) -> f64 {
    let x2 = a * a;
    let mut term = a;
    let mut sum = a;
    for n in 1..200 {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

/// `erfc(x)` for `x > 0` via the Laplace continued fraction
/// `exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated with the modified Lentz method.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Alternating Maclaurin series, summed with enough terms for |x| <= 3.
    fn maclaurin(x: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut pow = x;
        let mut fact = 1.0;
        for n in 0..terms {
            if n > 0 {
                pow *= x * x;
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (fact * (2 * n + 1) as f64);
        }
        TWO_OVER_SQRT_PI * sum
    }

    #[test]
    fn reference_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() <= 1e-15);
        assert!((erf(2.0) - 0.995_322_265_018_952_7).abs() <= 1e-15);
        assert!((erf(3.0) - 0.999_977_909_503_001_4).abs() <= 1e-15);
        assert!((erfc(3.0) - 2.209_049_699_858_544e-5).abs() <= 1e-18);
        assert!((erfc(5.0) - 1.537_459_794_428_034_8e-12).abs() <= 1e-24);
    }

    #[test]
    fn agrees_with_maclaurin_series() {
        for i in -300..=300 {
            let x = i as f64 / 100.0;
            let want = maclaurin(x, 80);
            assert!((erf(x) - want).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn odd_symmetry_is_exact() {
        for i in 0..1000 {
            let x = i as f64 * 0.0073;
            assert_eq!(erf(-x).to_bits(), (-erf(x)).to_bits());
        }
    }

    #[test]
    fn continuous_across_method_switch() {
        let below = erf(SERIES_LIMIT);
        let above = erf(SERIES_LIMIT + f64::EPSILON * 4.0);
        assert!((above - below).abs() <= 1e-15);
        assert!((erfc(2.0) + erf(2.0) - 1.0).abs() <= 1e-16);
    }

    #[test]
    fn complement_in_tails() {
        assert_eq!(erfc(-40.0), 2.0);
        assert_eq!(erfc(40.0), 0.0);
        assert!(erfc(10.0) > 0.0 && erfc(10.0) < 1e-44);
        assert_eq!(erf(10.0), 1.0);
        assert!(erf(f64::NAN).is_nan());
    }
}
