use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use super::quadint::checked;
use super::{FieldSpec, QuadInt};
use crate::error::{Error, Result};

/// A formal quotient `num / den` of elements of `O_d`.
///
/// The denominator is rationalised on construction (multiplied through by its
/// conjugate) and the quotient is reduced by its rational-integer content, so
/// the stored form is canonical: `den` is a positive rational integer and
/// `gcd(num.a, num.b, den) = 1`. Structural equality therefore coincides with
/// cross-multiplicative equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadRat {
    num: QuadInt,
    den: i128,
}

impl QuadRat {
    pub fn new(num: QuadInt, den: QuadInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch(num.field().d(), den.field().d()));
        }
        let n = num * den.conj();
        Ok(Self::reduced(n, den.norm()))
    }

    pub fn from_quadint(x: QuadInt) -> Self {
        Self { num: x, den: 1 }
    }

    pub fn from_int(field: FieldSpec, n: i128) -> Self {
        Self::from_quadint(QuadInt::from_int(field, n))
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    fn reduced(num: QuadInt, den: i128) -> Self {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.content().gcd(&den);
        if g > 1 {
            Self { num: num.div_int_exact(g), den: den / g }
        } else {
            Self { num, den }
        }
    }

    pub fn num(&self) -> QuadInt {
        self.num
    }

    /// The denominator, a positive rational integer viewed in `O_d`.
    pub fn den(&self) -> QuadInt {
        QuadInt::from_int(self.num.field(), self.den)
    }

    pub fn den_int(&self) -> i128 {
        self.den
    }

    pub fn field(&self) -> FieldSpec {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_rational()
    }

    pub fn is_sign_canonical(&self) -> bool {
        self.num.is_sign_canonical()
    }

    pub fn conj(&self) -> Self {
        Self { num: self.num.conj(), den: self.den }
    }

    /// `N(num) / den^2` as an exact rational.
    pub fn norm(&self) -> Ratio<i128> {
        Ratio::new(self.num.norm(), checked(self.den.checked_mul(self.den)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // den / num = den * conj(num) / N(num)
        Ok(Self::reduced(self.num.conj().scale(self.den), self.num.norm()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(*self * rhs.inv()?)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.num.to_complex() / self.den as f64
    }

    pub fn embeddings(&self) -> [Complex64; 2] {
        let z = self.to_complex();
        [z, z.conj()]
    }

    /// Parses `x` or `x/n` or `(x)/(y)` where `x`, `y` are [`QuadInt`] strings.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let strip = |t: &str| {
            let t = t.trim();
            t.strip_prefix('(')
                .and_then(|u| u.strip_suffix(')'))
                .unwrap_or(t)
                .to_string()
        };
        match s.split_once('/') {
            None => Ok(Self::from_quadint(QuadInt::parse(field, &strip(s))?)),
            Some((n, d)) => {
                let num = QuadInt::parse(field, &strip(n))?;
                let den = QuadInt::parse(field, &strip(d))?;
                Self::new(num, den)
            }
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else if self.num.is_rational() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl From<QuadInt> for QuadRat {
    fn from(x: QuadInt) -> Self {
        Self::from_quadint(x)
    }
}

impl Add for QuadRat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::reduced(self.num + rhs.num, self.den);
        }
        let num = self.num.scale(rhs.den) + rhs.num.scale(self.den);
        Self::reduced(num, checked(self.den.checked_mul(rhs.den)))
    }
}

impl Sub for QuadRat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadRat {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Mul for QuadRat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.den == 1 && rhs.den == 1 {
            return Self { num: self.num * rhs.num, den: 1 };
        }
        Self::reduced(self.num * rhs.num, checked(self.den.checked_mul(rhs.den)))
    }
}
