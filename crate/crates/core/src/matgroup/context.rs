use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Mat2, PslElem};
use crate::error::{Error, Result};
use crate::quadfield::{FieldSpec, QuadInt};

/// Generators are named `a`, `b`, ... so at most 26 are accepted.
pub const MAX_GENERATORS: usize = 26;

/// A finitely generated subgroup of `PSL_2(K)` with the user-supplied
/// constants the geodesic bounds depend on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct GroupContext {
    field: FieldSpec,
    generators: Vec<Mat2>,
    beta_prime: QuadInt,
    c_prime: f64,
    systole: f64,
    geodesic_count_exponent: f64,
}

/// Serializable description of a [`GroupContext`]; matrices are written as
/// `[[a,b],[c,d]]` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub d: u64,
    pub generators: Vec<String>,
    #[serde(default = "one")]
    pub c_prime: f64,
    #[serde(default = "one")]
    pub systole: f64,
    #[serde(default = "two")]
    pub geodesic_count_exponent: f64,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

impl TryFrom<GroupSpec> for GroupContext {
    type Error = Error;
    fn try_from(spec: GroupSpec) -> Result<Self> {
        let field = FieldSpec::new(spec.d)?;
        let gens = spec
            .generators
            .iter()
            .map(|g| Mat2::parse(field, g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, gens)?
            .with_c_prime(spec.c_prime)?
            .with_systole(spec.systole)?
            .with_geodesic_count_exponent(spec.geodesic_count_exponent)
    }
}

impl From<GroupContext> for GroupSpec {
    fn from(ctx: GroupContext) -> Self {
        GroupSpec {
            d: ctx.field.d(),
            generators: ctx.generators.iter().map(|g| g.to_string()).collect(),
            c_prime: ctx.c_prime,
            systole: ctx.systole,
            geodesic_count_exponent: ctx.geodesic_count_exponent,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::OutOfRange(format!("{name} must be positive and finite, got {v}")))
    }
}

impl GroupContext {
    /// Defaults: `c' = 1`, systole estimate `s = 1`, geodesic count exponent 2.
    pub fn new(field: FieldSpec, generators: Vec<Mat2>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators { max: MAX_GENERATORS, got: generators.len() });
        }
        let mut den: i128 = 1;
        for g in &generators {
            if g.field() != field {
                return Err(Error::FieldMismatch(field.d(), g.field().d()));
            }
            for x in g.entries() {
                den = den.lcm(&x.den_int());
            }
        }
        Ok(Self {
            field,
            generators,
            beta_prime: QuadInt::from_int(field, den),
            c_prime: 1.0,
            systole: 1.0,
            geodesic_count_exponent: 2.0,
        })
    }

    pub fn with_c_prime(mut self, c_prime: f64) -> Result<Self> {
        self.c_prime = positive("c'", c_prime)?;
        Ok(self)
    }

    pub fn with_systole(mut self, s: f64) -> Result<Self> {
        self.systole = positive("systole estimate", s)?;
        Ok(self)
    }

    /// 2 for the generic closed case, 1 for the arithmetic case.
    pub fn with_geodesic_count_exponent(mut self, e: f64) -> Result<Self> {
        self.geodesic_count_exponent = positive("geodesic count exponent", e)?;
        Ok(self)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn psl_generators(&self) -> Vec<PslElem> {
        self.generators.iter().map(|&g| g.into()).collect()
    }

    /// A common denominator of all generator entries (and of their inverses).
    pub fn beta_prime(&self) -> QuadInt {
        self.beta_prime
    }

    pub fn c_prime(&self) -> f64 {
        self.c_prime
    }

    pub fn systole(&self) -> f64 {
        self.systole
    }

    pub fn geodesic_count_exponent(&self) -> f64 {
        self.geodesic_count_exponent
    }

    pub fn spec(&self) -> GroupSpec {
        self.clone().into()
    }
}
