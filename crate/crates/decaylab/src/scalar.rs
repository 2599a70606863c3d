//! Exponent arithmetic that stays exact as long as the inputs do.
//!
//! Exponents produced by the rate pipeline are rational functions of the
//! input exponents (`(β+2)/(β+3)`, `(2α+1)/α`, ...). They are kept as
//! arbitrary-precision rationals and only degrade to `f64` when an
//! operation leaves the rationals (non-integer powers, logarithms).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real number that is either an exact rational or a float.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub const ZERO: f64 = 0.0;

    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Returns the integer value if the scalar is an exact integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Rational(r) if !r.is_zero() => Scalar::Rational(r.recip()),
            _ => Scalar::Float(1.0 / self.to_f64()),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// `self^e`; exact if `self` is rational and `e` is an exact integer.
    pub fn pow(&self, e: &Scalar) -> Scalar {
        if let (Scalar::Rational(base), Some(k)) = (self, e.as_integer()) {
            if let Some(k) = k.to_i32() {
                if !base.is_zero() || k >= 0 {
                    return Scalar::Rational(base.pow(k));
                }
            }
        }
        Scalar::Float(self.to_f64().powf(e.to_f64()))
    }

    /// Square root; stays rational for perfect squares.
    pub fn sqrt(&self) -> Scalar {
        if let Scalar::Rational(r) = self {
            if !r.is_negative() {
                let ns = r.numer().sqrt();
                let ds = r.denom().sqrt();
                if &ns * &ns == *r.numer() && &ds * &ds == *r.denom() {
                    return Scalar::Rational(BigRational::new(ns, ds));
                }
            }
        }
        Scalar::Float(self.to_f64().sqrt())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.$method(b)),
                    _ => Scalar::Float(self.to_f64().$method(rhs.to_f64())),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) if !b.is_zero() => {
                Scalar::Rational(a / b)
            }
            _ => Scalar::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).div(&rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_stays_exact() {
        let a = Scalar::ratio(2, 3);
        let b = Scalar::ratio(5, 4);
        let c = &a + &b;
        assert_eq!(c, Scalar::ratio(23, 12));
        assert!(c.as_rational().is_some());
        assert_eq!((&a * &b), Scalar::ratio(5, 6));
        assert_eq!((&a / &b), Scalar::ratio(8, 15));
    }

    #[test]
    fn float_contaminates() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        assert!((&a + &b).as_rational().is_none());
    }

    #[test]
    fn integer_powers_exact() {
        let a = Scalar::ratio(3, 2);
        assert_eq!(a.pow(&Scalar::from_int(2)), Scalar::ratio(9, 4));
        assert_eq!(a.pow(&Scalar::from_int(-1)), Scalar::ratio(2, 3));
        assert!(a.pow(&Scalar::ratio(1, 2)).as_rational().is_none());
    }

    #[test]
    fn sqrt_of_perfect_square() {
        assert_eq!(Scalar::ratio(9, 4).sqrt(), Scalar::ratio(3, 2));
        assert!(Scalar::from_int(2).sqrt().as_rational().is_none());
    }

    #[test]
    fn ordering_crosses_representations() {
        assert!(Scalar::ratio(1, 3) < Scalar::Float(0.34));
        assert!(Scalar::ratio(1, 2) == Scalar::Float(0.5));
    }
}
