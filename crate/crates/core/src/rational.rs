//! Small helpers around `BigRational`: parsing, printing, rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Always `p/q`, including integers (`1/1`), so output is uniform.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite float.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Twelve significant digits and an explicit error bound, e.g.
/// `0.464101615138 ± 2.2e-16`.
pub fn format_float(value: f64, error: f64) -> String {
    format!("{} ± {error:.1e}", significant(value, 12))
}

/// `x` rounded to `digits` significant digits, in positional notation.
pub fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions (the last convergent or semiconvergent in range).
pub fn best_rational(x: f64, max_den: u64) -> BigRational {
    assert!(max_den >= 1);
    if !x.is_finite() {
        return BigRational::zero();
    }
    let neg = x < 0.0;
    let target = match from_f64(x.abs()) {
        Some(t) => t,
        None => return BigRational::zero(),
    };
    let max_den = BigInt::from(max_den);
    // Convergents h/k.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    let mut best;
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            // Largest semiconvergent that fits, if it beats the last convergent.
            let m = (&max_den - &k0) / &k1;
            let semi = BigRational::new(&m * &h1 + &h0, &m * &k1 + &k0);
            let conv = BigRational::new(h1.clone(), k1.clone());
            best = if (&semi - &target).abs() < (&conv - &target).abs() { semi } else { conv };
            break;
        }
        best = BigRational::new(h2.clone(), k2.clone());
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    if neg {
        -best
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/8"), Some(ratio(3, 4)));
        assert_eq!(parse_rational(" -2 "), Some(int(-2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&ratio(-4, 6)), "-2/3");
    }

    #[test]
    fn best_rational_recovers_small_fractions() {
        for q in 1..60i64 {
            for p in -q..=q {
                let x = p as f64 / q as f64;
                assert_eq!(best_rational(x, 1000), ratio(p, q));
                assert_eq!(best_rational(x + 1e-12, 1000), ratio(p, q));
            }
        }
        assert_eq!(best_rational(std::f64::consts::PI, 1000), ratio(355, 113));
        assert_eq!(best_rational(std::f64::consts::PI, 100), ratio(311, 99));
        assert_eq!(best_rational(0.0, 5), int(0));
    }

    #[test]
    fn float_format() {
        assert_eq!(significant(2.0 * 3f64.sqrt() - 3.0, 12), "0.464101615138");
        assert_eq!(significant(123.456, 4), "123.5");
        assert_eq!(significant(0.00012345678, 3), "0.000123");
        assert_eq!(format_float(0.5, 1e-15), "0.500000000000 ± 1.0e-15");
    }
}
