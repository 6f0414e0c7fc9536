use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::primes::{inv_mod, is_prime, mul_mod, rem_euclid_i128, sieve, sqrt_mod};
use super::{FieldSpec, QuadInt};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl SplittingType {
    pub fn name(&self) -> &'static str {
        match self {
            SplittingType::Split => "split",
            SplittingType::Inert => "inert",
            SplittingType::Ramified => "ramified",
        }
    }
}

/// Roots of the minimal polynomial `x^2 - t x + n` of `w` modulo `p`, ascending.
fn omega_roots_mod(field: FieldSpec, p: u64) -> Vec<u64> {
    let t = rem_euclid_i128(field.omega_trace(), p);
    let n = rem_euclid_i128(field.omega_norm(), p);
    if p == 2 {
        return (0..2u64)
            .filter(|&x| (x * x + (2 - t) * x + n) % 2 == 0)
            .collect();
    }
    // discriminant t^2 - 4n
    let disc = (mul_mod(t, t, p) + p - mul_mod(4 % p, n, p)) % p;
    let Some(s) = sqrt_mod(disc, p) else {
        return Vec::new();
    };
    let half = inv_mod(2, p).expect("p odd");
    let r1 = mul_mod((t + s) % p, half, p);
    let r2 = mul_mod((t + p - s) % p, half, p);
    let mut roots = vec![r1.min(r2), r1.max(r2)];
    roots.dedup();
    roots
}

/// Decomposition type of the rational prime `p` in `O_d`.
pub fn splitting_type(field: FieldSpec, p: u64) -> Result<SplittingType> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if field.discriminant().unsigned_abs() % p == 0 {
        return Ok(SplittingType::Ramified);
    }
    Ok(if omega_roots_mod(field, p).is_empty() {
        SplittingType::Inert
    } else {
        SplittingType::Split
    })
}

/// A prime ideal `P` of `O_d` above the rational prime `p`.
///
/// For residue degree 1 the ideal is `(p, w - r)` where `r` is the recorded
/// root of the minimal polynomial of `w` modulo `p`; reduction mod `P` sends
/// `w` to `r`. For residue degree 2 the ideal is `(p)` itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PrimeIdealRaw", into = "PrimeIdealRaw")]
pub struct PrimeIdealData {
    field: FieldSpec,
    p: u64,
    root: Option<u64>,
    kind: SplittingType,
}

#[derive(Serialize, Deserialize)]
struct PrimeIdealRaw {
    d: u64,
    p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<u64>,
}

impl TryFrom<PrimeIdealRaw> for PrimeIdealData {
    type Error = Error;
    fn try_from(raw: PrimeIdealRaw) -> Result<Self> {
        let field = FieldSpec::new(raw.d)?;
        match raw.root {
            Some(r) => PrimeIdealData::with_root(field, raw.p, r),
            None => PrimeIdealData::above(field, raw.p),
        }
    }
}

impl From<PrimeIdealData> for PrimeIdealRaw {
    fn from(p: PrimeIdealData) -> Self {
        PrimeIdealRaw { d: p.field.d(), p: p.p, root: p.root }
    }
}

impl PrimeIdealData {
    /// The canonical prime above `p`: for split primes the one with the
    /// smallest non-negative root.
    pub fn above(field: FieldSpec, p: u64) -> Result<Self> {
        let kind = splitting_type(field, p)?;
        let root = match kind {
            SplittingType::Inert => None,
            _ => Some(omega_roots_mod(field, p)[0]),
        };
        Ok(Self { field, p, root, kind })
    }

    /// The prime `(p, w - root)`; `root` must annihilate the minimal polynomial of `w`.
    pub fn with_root(field: FieldSpec, p: u64, root: u64) -> Result<Self> {
        let kind = splitting_type(field, p)?;
        if kind == SplittingType::Inert || !omega_roots_mod(field, p).contains(&(root % p)) {
            return Err(Error::InvalidRoot { p, root });
        }
        Ok(Self { field, p, root: Some(root % p), kind })
    }

    /// The prime ideal generated by `pi`, which must have prime norm, or be an
    /// inert rational prime up to a unit.
    pub fn from_generator(pi: QuadInt) -> Result<Self> {
        let field = pi.field();
        let norm = pi.norm();
        let n = u64::try_from(norm).map_err(|_| Error::InvalidIdeal(format!("{pi} too large")))?;
        if is_prime(n) {
            // pi = a + b w lies in P, so w = -a / b mod p
            let b_inv = inv_mod(rem_euclid_i128(pi.b(), n), n)
                .ok_or_else(|| Error::InvalidIdeal(format!("{pi} is not a prime element")))?;
            let r = mul_mod(rem_euclid_i128(-pi.a(), n), b_inv, n);
            return Self::with_root(field, n, r);
        }
        let c = pi.content().unsigned_abs() as u64;
        if c > 1 && (c as i128) * (c as i128) == norm && is_prime(c) {
            let p = Self::above(field, c)?;
            if p.kind == SplittingType::Inert {
                return Ok(p);
            }
        }
        Err(Error::InvalidIdeal(format!("{pi} does not generate a prime ideal")))
    }

    /// Splitting primes only; errors for inert or ramified `p`.
    pub fn find_split(field: FieldSpec, p: u64) -> Result<Self> {
        let kind = splitting_type(field, p)?;
        if kind != SplittingType::Split {
            return Err(Error::NotSplit { p, actual: kind.name() });
        }
        Self::above(field, p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        if self.kind == SplittingType::Inert {
            2
        } else {
            1
        }
    }

    pub fn split_root(&self) -> Option<u64> {
        self.root
    }

    pub fn kind(&self) -> SplittingType {
        self.kind
    }

    /// `N(P) = p^f`.
    pub fn norm(&self) -> u128 {
        (self.p as u128).pow(self.residue_degree())
    }

    /// The Galois conjugate prime; equal to `self` unless `p` splits.
    pub fn conjugate(&self) -> Self {
        match (self.kind, self.root) {
            (SplittingType::Split, Some(r)) => {
                let t = rem_euclid_i128(self.field.omega_trace(), self.p);
                Self { root: Some((t + self.p - r) % self.p), ..*self }
            }
            _ => *self,
        }
    }
}

impl fmt::Display for PrimeIdealData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            Some(0) => write!(f, "({}, w)", self.p),
            Some(r) => write!(f, "({}, w-{})", self.p, r),
            None => write!(f, "({})", self.p),
        }
    }
}

impl fmt::Debug for PrimeIdealData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field)
    }
}

/// Ascending list of primes `<= limit` splitting completely in `O_d`.
pub fn enumerate_split_primes(field: FieldSpec, limit: u64) -> Vec<u64> {
    sieve(limit)
        .into_iter()
        .filter(|&p| splitting_type(field, p) == Ok(SplittingType::Split))
        .collect()
}

/// A product of distinct prime ideals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<PrimeIdealData>", into = "Vec<PrimeIdealData>")]
pub struct SquareFreeIdeal {
    factors: Vec<PrimeIdealData>,
}

impl SquareFreeIdeal {
    pub fn new(factors: Vec<PrimeIdealData>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::InvalidIdeal("no prime factors".into()));
        };
        let field = first.field;
        for (i, p) in factors.iter().enumerate() {
            if p.field != field {
                return Err(Error::FieldMismatch(field.d(), p.field.d()));
            }
            if factors[..i].contains(p) {
                return Err(Error::InvalidIdeal(format!("repeated factor {p}")));
            }
        }
        Ok(Self { factors })
    }

    pub fn prime(p: PrimeIdealData) -> Self {
        Self { factors: vec![p] }
    }

    /// Parses `5`, `5:3` (root given) and products such as `5*13:8*3`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (p, root) = match part.split_once(':') {
                Some((p, r)) => (p, Some(r)),
                None => (part, None),
            };
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {p:?} in ideal {s:?}")))?;
            let prime = match root {
                Some(r) => {
                    let r: u64 = r
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad root {r:?} in ideal {s:?}")))?;
                    PrimeIdealData::with_root(field, p, r)?
                }
                None => PrimeIdealData::above(field, p)?,
            };
            factors.push(prime);
        }
        Self::new(factors)
    }

    pub fn factors(&self) -> &[PrimeIdealData] {
        &self.factors
    }

    pub fn field(&self) -> FieldSpec {
        self.factors[0].field
    }

    pub fn contains_factor(&self, p: &PrimeIdealData) -> bool {
        self.factors.contains(p)
    }

    /// `self * p`, failing if `p` already divides `self`.
    pub fn with_factor(&self, p: PrimeIdealData) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.push(p);
        Self::new(factors)
    }

    pub fn norm(&self) -> BigUint {
        ideal_norm(self)
    }

    pub fn norm_f64(&self) -> f64 {
        self.factors.iter().map(|p| p.norm() as f64).product()
    }

    /// `ln N(I)` computed factorwise.
    pub fn log_norm(&self) -> f64 {
        self.factors.iter().map(|p| (p.norm() as f64).ln()).sum()
    }
}

impl TryFrom<Vec<PrimeIdealData>> for SquareFreeIdeal {
    type Error = Error;
    fn try_from(v: Vec<PrimeIdealData>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SquareFreeIdeal> for Vec<PrimeIdealData> {
    fn from(i: SquareFreeIdeal) -> Self {
        i.factors
    }
}

impl fmt::Display for SquareFreeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.factors {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SquareFreeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field())
    }
}

/// `N(I) = prod p_i^{f_i}`.
pub fn ideal_norm(ideal: &SquareFreeIdeal) -> BigUint {
    ideal
        .factors
        .iter()
        .map(|p| BigUint::from(p.norm()))
        .product()
}
