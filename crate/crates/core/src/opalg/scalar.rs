//! Exact complex rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the printed form needs a leading minus and no parentheses.
    pub(crate) fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }
}

impl From<i64> for CRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for CRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, rhs: &CRational) -> CRational {
        CRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for CRational {
    type Output = CRational;
    fn add(self, rhs: CRational) -> CRational {
        &self + &rhs
    }
}

impl AddAssign<&CRational> for CRational {
    fn add_assign(&mut self, rhs: &CRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, rhs: &CRational) -> CRational {
        CRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for CRational {
    type Output = CRational;
    fn mul(self, rhs: CRational) -> CRational {
        &self * &rhs
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        -&self
    }
}

/// Printed as `3/2`, `-1`, `i`, `(1/2+3i)`, `(-2i)`.
impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "({}i)", self.im);
        }
        if self.im.is_negative() {
            write!(f, "({}-{}i)", self.re, -self.im.clone())
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}
