use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

use super::FieldSpec;
use crate::error::{Error, Result};

#[inline]
pub(crate) fn checked(v: Option<i128>) -> i128 {
    v.expect("quadratic integer arithmetic overflowed i128")
}

/// An element `a + b w` of the ring of integers of a [`FieldSpec`].
///
/// Coefficients are `i128` and every operation is overflow-checked; an
/// overflow panics rather than wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    a: i128,
    b: i128,
    field: FieldSpec,
}

impl QuadInt {
    pub fn new(field: FieldSpec, a: i128, b: i128) -> Self {
        Self { a, b, field }
    }

    pub fn from_int(field: FieldSpec, a: i128) -> Self {
        Self::new(field, a, 0)
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::new(field, 0, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::new(field, 1, 0)
    }

    pub fn omega(field: FieldSpec) -> Self {
        Self::new(field, 0, 1)
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn conj(&self) -> Self {
        let t = self.field.omega_trace();
        Self::new(
            self.field,
            checked(self.a.checked_add(checked(self.b.checked_mul(t)))),
            checked(self.b.checked_neg()),
        )
    }

    /// `x * conj(x)`, always a non-negative rational integer.
    pub fn norm(&self) -> i128 {
        let t = self.field.omega_trace();
        let n = self.field.omega_norm();
        let aa = checked(self.a.checked_mul(self.a));
        let ab = checked(checked(self.a.checked_mul(self.b)).checked_mul(t));
        let bb = checked(checked(self.b.checked_mul(self.b)).checked_mul(n));
        checked(checked(aa.checked_add(ab)).checked_add(bb))
    }

    /// `x + conj(x)`.
    pub fn trace(&self) -> i128 {
        let t = self.field.omega_trace();
        checked(checked(self.a.checked_mul(2)).checked_add(checked(self.b.checked_mul(t))))
    }

    /// `gcd(a, b)`, the largest rational integer dividing `x`.
    pub fn content(&self) -> i128 {
        self.a.gcd(&self.b)
    }

    pub fn scale(&self, k: i128) -> Self {
        Self::new(
            self.field,
            checked(self.a.checked_mul(k)),
            checked(self.b.checked_mul(k)),
        )
    }

    /// Exact division by a rational integer that divides both coefficients.
    pub(crate) fn div_int_exact(&self, k: i128) -> Self {
        debug_assert!(k != 0 && self.a % k == 0 && self.b % k == 0);
        Self::new(self.field, self.a / k, self.b / k)
    }

    /// True when the first nonzero coefficient (scanning `a` then `b`) is positive.
    pub fn is_sign_canonical(&self) -> bool {
        self.a > 0 || (self.a == 0 && self.b >= 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.a as f64, 0.0) + self.field.omega_complex() * self.b as f64
    }

    /// Images under both complex embeddings (identity and conjugation).
    pub fn embeddings(&self) -> [Complex64; 2] {
        let z = self.to_complex();
        [z, z.conj()]
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc * *self;
        }
        acc
    }

    fn assert_same_field(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "{}",
            Error::FieldMismatch(self.field.d(), other.field.d())
        );
    }

    /// Parses `a + b w` style input such as `2`, `-w`, `1-w`, `3+2w`, `2*w`.
    /// In `Q(i)` the letter `i` is accepted in place of `w`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty quadratic integer".into()));
        }
        let mut a: i128 = 0;
        let mut b: i128 = 0;
        let mut term = String::new();
        let mut sign = 1i128;
        let mut flush = |term: &str, sign: i128| -> Result<()> {
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let (coef, is_omega) = match term
                .strip_suffix('w')
                .or_else(|| term.strip_suffix('ω'))
                .or_else(|| (field.d() == 1).then(|| term.strip_suffix('i')).flatten())
            {
                Some(rest) => (rest.strip_suffix('*').unwrap_or(rest), true),
                None => (term, false),
            };
            let value: i128 = if coef.is_empty() {
                if !is_omega {
                    return Err(Error::Parse(format!("bad term in {s:?}")));
                }
                1
            } else {
                coef.parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {coef:?} in {s:?}")))?
            };
            let v = checked(value.checked_mul(sign));
            if is_omega {
                b = checked(b.checked_add(v));
            } else {
                a = checked(a.checked_add(v));
            }
            Ok(())
        };
        for (idx, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && idx > 0 {
                flush(&term, sign)?;
                term.clear();
                sign = if ch == '-' { -1 } else { 1 };
            } else if (ch == '+' || ch == '-') && idx == 0 {
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                term.push(ch);
            }
        }
        flush(&term, sign)?;
        Ok(Self::new(field, a, b))
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let omega_term = |b: i128| match b {
            1 => "w".to_string(),
            -1 => "-w".to_string(),
            _ => format!("{b}w"),
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{}", omega_term(b)),
            (a, b) if b > 0 => write!(f, "{a}+{}", omega_term(b)),
            (a, b) => write!(f, "{a}{}", omega_term(b)),
        }
    }
}

impl Add for QuadInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.assert_same_field(&rhs);
        Self::new(
            self.field,
            checked(self.a.checked_add(rhs.a)),
            checked(self.b.checked_add(rhs.b)),
        )
    }
}

impl Sub for QuadInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.assert_same_field(&rhs);
        Self::new(
            self.field,
            checked(self.a.checked_sub(rhs.a)),
            checked(self.b.checked_sub(rhs.b)),
        )
    }
}

impl Neg for QuadInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.field, checked(self.a.checked_neg()), checked(self.b.checked_neg()))
    }
}

impl Mul for QuadInt {
    type Output = Self;
    // (a + b w)(c + e w) = (ac - be n) + (ae + bc + be t) w, using w^2 = t w - n
    fn mul(self, rhs: Self) -> Self {
        self.assert_same_field(&rhs);
        let t = self.field.omega_trace();
        let n = self.field.omega_norm();
        let ac = checked(self.a.checked_mul(rhs.a));
        let be = checked(self.b.checked_mul(rhs.b));
        let ae = checked(self.a.checked_mul(rhs.b));
        let bc = checked(self.b.checked_mul(rhs.a));
        let re = checked(ac.checked_sub(checked(be.checked_mul(n))));
        let om = checked(checked(ae.checked_add(bc)).checked_add(checked(be.checked_mul(t))));
        Self::new(self.field, re, om)
    }
}
