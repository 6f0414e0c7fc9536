use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadfield::{FieldSpec, QuadInt, QuadRat};

/// A 2x2 matrix over `K` with determinant exactly 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: QuadRat,
    b: QuadRat,
    c: QuadRat,
    d: QuadRat,
}

impl Mat2 {
    pub fn new(a: QuadRat, b: QuadRat, c: QuadRat, d: QuadRat) -> Result<Self> {
        let f = a.field();
        for x in [b, c, d] {
            if x.field() != f {
                return Err(Error::FieldMismatch(f.d(), x.field().d()));
            }
        }
        let det = a * d - b * c;
        if det != QuadRat::one(f) {
            return Err(Error::NotDeterminantOne(det.to_string()));
        }
        Ok(Self { a, b, c, d })
    }

    /// Builds a matrix from `QuadInt` entries.
    pub fn from_quadints(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Builds a matrix from `(a, b)` coefficient pairs of `a + b w`.
    pub fn from_coeffs(field: FieldSpec, m: [[(i128, i128); 2]; 2]) -> Result<Self> {
        let q = |(a, b): (i128, i128)| QuadInt::new(field, a, b);
        Self::from_quadints(q(m[0][0]), q(m[0][1]), q(m[1][0]), q(m[1][1]))
    }

    pub fn from_ints(field: FieldSpec, m: [[i128; 2]; 2]) -> Result<Self> {
        Self::from_coeffs(field, m.map(|row| row.map(|x| (x, 0))))
    }

    pub fn identity(field: FieldSpec) -> Self {
        let (o, z) = (QuadRat::one(field), QuadRat::zero(field));
        Self { a: o, b: z, c: z, d: o }
    }

    /// Parses `[[a, b], [c, d]]` with entries in the [`QuadRat`] syntax.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("expected [[a,b],[c,d]], got {s:?}")))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("expected two rows in {s:?}")));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!("expected two columns in {s:?}")));
            }
            for c in cols {
                entries.push(QuadRat::parse(field, c)?);
            }
        }
        Self::new(entries[0], entries[1], entries[2], entries[3])
    }

    pub fn entries(&self) -> [QuadRat; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> QuadRat {
        self.a
    }

    pub fn b(&self) -> QuadRat {
        self.b
    }

    pub fn c(&self) -> QuadRat {
        self.c
    }

    pub fn d(&self) -> QuadRat {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    pub fn trace(&self) -> QuadRat {
        self.a + self.d
    }

    /// Inverse via the adjugate (determinant is 1).
    pub fn inv(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    pub fn to_complex(&self) -> [Complex64; 4] {
        self.entries().map(|x| x.to_complex())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of `PSL_2(K)`: a [`Mat2`] with the sign fixed so that the first
/// nonzero entry, scanning `a, b, c, d`, has a sign-canonical numerator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PslElem {
    rep: Mat2,
}

impl PslElem {
    pub fn new(m: Mat2) -> Self {
        let lead = m.entries().into_iter().find(|x| !x.is_zero());
        match lead {
            Some(x) if !x.is_sign_canonical() => Self { rep: m.neg() },
            _ => Self { rep: m },
        }
    }

    pub fn identity(field: FieldSpec) -> Self {
        Self { rep: Mat2::identity(field) }
    }

    pub fn rep(&self) -> &Mat2 {
        &self.rep
    }

    pub fn field(&self) -> FieldSpec {
        self.rep.field()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.rep.mul(&rhs.rep))
    }

    pub fn inv(&self) -> Self {
        Self::new(self.rep.inv())
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_identity()
    }

    /// The trace of the canonical lift, with its own sign made canonical;
    /// this is the common value of `±tr` for both lifts.
    pub fn trace_pair(&self) -> QuadRat {
        let t = self.rep.trace();
        if t.is_sign_canonical() {
            t
        } else {
            -t
        }
    }

    pub fn trace_complex(&self) -> Complex64 {
        self.rep.trace().to_complex()
    }
}

impl From<Mat2> for PslElem {
    fn from(m: Mat2) -> Self {
        Self::new(m)
    }
}

impl fmt::Display for PslElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.rep)
    }
}

impl fmt::Debug for PslElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
