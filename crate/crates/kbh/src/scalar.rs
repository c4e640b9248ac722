//! Exact scalars: the Gaussian rationals Q(i).
//!
//! Every computation in this crate runs over `GaussianRational`, so all
//! identity checks are strict equalities and every rank is an integer fact,
//! not a numerical estimate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An exact complex rational `re + im*i`.
///
/// Both parts are arbitrary-precision rationals kept in lowest terms with
/// positive denominator (maintained by `BigRational` itself), so equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den`, panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `a + b*i` from four integer parts `a = n1/d1`, `b = n2/d2`.
    pub fn from_parts(n1: i64, d1: i64, n2: i64, d2: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(n1), BigInt::from(d1)),
            BigRational::new(BigInt::from(n2), BigInt::from(d2)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`, a nonnegative rational; zero only for the zero scalar.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(i)");
        let n = self.norm();
        GaussianRational::new(&self.re / &n, -&self.im / &n)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let f = BigRational::from_integer(BigInt::from(n));
        GaussianRational::new(&self.re * &f, &self.im * &f)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inverse()
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let fmt_im = |f: &mut fmt::Formatter<'_>, im: &BigRational, leading: bool| -> fmt::Result {
            let mag = im.abs();
            let sign = if im.is_negative() {
                "-"
            } else if leading {
                ""
            } else {
                "+"
            };
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}i")
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            fmt_im(f, &self.im, true)
        } else {
            write!(f, "{}", self.re)?;
            fmt_im(f, &self.im, false)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_smoke() {
        let a = GaussianRational::from_parts(1, 2, -3, 4);
        let b = GaussianRational::from_parts(2, 1, 1, 3);
        let prod = &a * &b;
        assert_eq!(&prod / &b, a);
        assert_eq!(&a + &(-&a), GaussianRational::zero());
        assert_eq!(&a * &GaussianRational::one(), a);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::zero().to_string(), "0");
        assert_eq!(GaussianRational::from_ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!(GaussianRational::from_parts(1, 1, -2, 1).to_string(), "1-2i");
        assert_eq!(GaussianRational::from_parts(0, 1, 3, 4).to_string(), "3/4i");
    }
}
