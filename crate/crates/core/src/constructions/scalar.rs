//! Field abstraction so the evaluators run over exact rationals, `f64`, or
//! forward-mode dual numbers (value plus derivative) for the optimiser.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone + PartialEq + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(n: u64) -> Self;
    fn is_exact_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `value + deriv·ε` with ε² = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub deriv: f64,
}

impl Dual {
    pub fn constant(value: f64) -> Self {
        Dual { value, deriv: 0.0 }
    }

    pub fn variable(value: f64) -> Self {
        Dual { value, deriv: 1.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { value: self.value + o.value, deriv: self.deriv + o.deriv }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { value: self.value - o.value, deriv: self.deriv - o.deriv }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { value: self.value * o.value, deriv: self.deriv * o.value + self.value * o.deriv }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { value: self.value / o.value, deriv: (self.deriv * o.value - self.value * o.deriv) / (o.value * o.value) }
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Dual::constant(0.0)
    }
    fn one() -> Self {
        Dual::constant(1.0)
    }
    fn from_u64(n: u64) -> Self {
        Dual::constant(n as f64)
    }
    fn is_exact_zero(&self) -> bool {
        self.value == 0.0 && self.deriv == 0.0
    }
    fn to_f64(&self) -> f64 {
        self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_derivative_of_rational_function() {
        // f(x) = x(1-x)^2 / (1-x^3), compare with central differences.
        fn f<T: Scalar>(x: T) -> T {
            let one = T::one();
            let y = one.clone() - x.clone();
            x.clone() * y.clone() * y / (one - x.pow(3))
        }
        let x = 0.37;
        let d = f(Dual::variable(x));
        let h = 1e-6;
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        assert!((d.value - f(x)).abs() < 1e-15);
        assert!((d.deriv - fd).abs() < 1e-8);
    }
}
