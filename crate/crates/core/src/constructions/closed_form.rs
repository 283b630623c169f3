//! Closed-form densities for the `G_t` family, kept separate from the
//! evaluators so the two can be checked against each other.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn r(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigRational {
    (1..=n as u64).map(r).fold(BigRational::one(), |a, b| a * b)
}

fn two_pow(e: i32) -> BigRational {
    r(2).pow(e)
}

/// Edge density of the balanced `G_t` blow-up: `1 - 4/(t-1)^2`.
pub fn gt_edge_density(t: usize) -> BigRational {
    assert!(t >= 3);
    let m = r(t as u64 - 1);
    BigRational::one() - r(4) / (&m * &m)
}

/// `K_t^-` density of the balanced `G_t` blow-up.
pub fn gt_kt_minus_density(t: usize) -> BigRational {
    assert!(t >= 3);
    let m = r(t as u64 - 1);
    if t % 2 == 1 {
        factorial(t) / m.pow(t as i32 - 1) * two_pow((t as i32 - 1) / 2) / r(3)
    } else {
        factorial(t) / m.pow(t as i32) * r(5 * t as u64 - 8) / r(3) * two_pow((t as i32 - 6) / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn small_cases() {
        assert_eq!(gt_edge_density(4), ratio(5, 9));
        assert_eq!(gt_kt_minus_density(3), ratio(1, 1));
        assert_eq!(gt_kt_minus_density(4), ratio(16, 27));
    }
}
