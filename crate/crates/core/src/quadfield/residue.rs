use std::fmt;

use super::primes::{inv_mod, mul_mod, pow_mod, rem_euclid_i128};
use super::{PrimeIdealData, QuadInt, QuadRat};
use crate::error::{Error, Result};

/// `u + v·θ` in the residue field; `v` is always zero for degree-one residue fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ResidueElem {
    pub u: u64,
    pub v: u64,
}

impl ResidueElem {
    pub const ZERO: Self = Self { u: 0, v: 0 };
    pub const ONE: Self = Self { u: 1, v: 0 };

    pub fn scalar(u: u64) -> Self {
        Self { u, v: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.v {
            0 => write!(f, "{}", self.u),
            v => write!(f, "{}+{}t", self.u, v),
        }
    }
}

/// The residue field `O_d / P`, either `F_p` or `F_{p^2} = F_p[θ]` with
/// `θ^2 = tθ - n` the reduction of the minimal polynomial of `w`.
///
/// Elements are plain [`ResidueElem`] values; all arithmetic goes through the
/// field so that elements stay small enough to hash in bulk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    prime: PrimeIdealData,
    p: u64,
    t: u64,
    n: u64,
}

impl ResidueField {
    pub fn new(prime: PrimeIdealData) -> Self {
        let p = prime.p();
        let field = prime.field();
        Self {
            prime,
            p,
            t: rem_euclid_i128(field.omega_trace(), p),
            n: rem_euclid_i128(field.omega_norm(), p),
        }
    }

    pub fn prime(&self) -> PrimeIdealData {
        self.prime
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.prime.residue_degree()
    }

    /// Number of elements `q = p^f`.
    pub fn order(&self) -> u128 {
        self.prime.norm()
    }

    pub fn from_int(&self, k: i128) -> ResidueElem {
        ResidueElem::scalar(rem_euclid_i128(k, self.p))
    }

    /// The `i`-th element in the fixed enumeration `u + v·θ`, `i = u + v·p`.
    pub fn element(&self, i: u64) -> ResidueElem {
        ResidueElem { u: i % self.p, v: i / self.p }
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        (0..self.order() as u64).map(|i| self.element(i))
    }

    pub fn index_of(&self, x: ResidueElem) -> u64 {
        x.u + x.v * self.p
    }

    pub fn add(&self, x: ResidueElem, y: ResidueElem) -> ResidueElem {
        ResidueElem { u: (x.u + y.u) % self.p, v: (x.v + y.v) % self.p }
    }

    pub fn neg(&self, x: ResidueElem) -> ResidueElem {
        ResidueElem { u: (self.p - x.u) % self.p, v: (self.p - x.v) % self.p }
    }

    pub fn sub(&self, x: ResidueElem, y: ResidueElem) -> ResidueElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: ResidueElem, y: ResidueElem) -> ResidueElem {
        let p = self.p;
        if x.v == 0 && y.v == 0 {
            return ResidueElem::scalar(mul_mod(x.u, y.u, p));
        }
        // (a + bθ)(c + eθ) = (ac - be n) + (ae + bc + be t) θ
        let be = mul_mod(x.v, y.v, p);
        let u = (mul_mod(x.u, y.u, p) + p - mul_mod(be, self.n, p)) % p;
        let v = (mul_mod(x.u, y.v, p) + mul_mod(x.v, y.u, p) + mul_mod(be, self.t, p)) % p;
        ResidueElem { u, v }
    }

    pub fn inv(&self, x: ResidueElem) -> Option<ResidueElem> {
        let p = self.p;
        if x.v == 0 {
            return inv_mod(x.u, p).map(ResidueElem::scalar);
        }
        // x * conj(x) = N(x) lies in F_p
        let conj = ResidueElem { u: (x.u + mul_mod(x.v, self.t, p)) % p, v: (p - x.v) % p };
        let norm = self.mul(x, conj);
        debug_assert_eq!(norm.v, 0);
        let ninv = inv_mod(norm.u, p)?;
        Some(self.mul(conj, ResidueElem::scalar(ninv)))
    }

    pub fn pow(&self, x: ResidueElem, mut e: u128) -> ResidueElem {
        if x.v == 0 {
            if x.u == 0 {
                return if e == 0 { ResidueElem::ONE } else { ResidueElem::ZERO };
            }
            let e = (e % (self.p as u128 - 1).max(1)) as u64;
            return ResidueElem::scalar(pow_mod(x.u, e, self.p));
        }
        let mut base = x;
        let mut acc = ResidueElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn reduce_int(&self, x: &QuadInt) -> ResidueElem {
        assert_eq!(x.field(), self.prime.field(), "element and prime lie in different fields");
        let a = ResidueElem::scalar(rem_euclid_i128(x.a(), self.p));
        let b = rem_euclid_i128(x.b(), self.p);
        match self.prime.split_root() {
            Some(r) => self.add(a, ResidueElem::scalar(mul_mod(b, r, self.p))),
            None => self.add(a, ResidueElem { u: 0, v: b }),
        }
    }

    /// Reduction of an S-integer; fails when `P` divides the denominator.
    pub fn reduce(&self, x: &QuadRat) -> Result<ResidueElem> {
        let den = rem_euclid_i128(x.den_int(), self.p);
        let den_inv = inv_mod(den, self.p).ok_or_else(|| Error::DenominatorNotInvertible {
            p: self.p,
            den: x.den_int().to_string(),
        })?;
        Ok(self.mul(self.reduce_int(&x.num()), ResidueElem::scalar(den_inv)))
    }
}

/// Reduction of `x` modulo `P`.
pub fn reduce_scalar(x: &QuadRat, prime: &PrimeIdealData) -> Result<ResidueElem> {
    ResidueField::new(*prime).reduce(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::primes::sieve;
    use crate::quadfield::{splitting_type, FieldSpec, SplittingType};

    #[test]
    fn reduction_examples() {
        let g = FieldSpec::gaussian();
        let p = PrimeIdealData::from_generator(QuadInt::new(g, 2, 1)).unwrap();
        let f = ResidueField::new(p);
        let i = f.reduce_int(&QuadInt::omega(g));
        assert_eq!(i, ResidueElem::scalar(3));
        assert_eq!(f.mul(i, i), f.from_int(-1));
        assert_eq!(f.reduce(&QuadRat::from_int(g, 7)).unwrap(), ResidueElem::scalar(2));
        let two = PrimeIdealData::above(g, 2).unwrap();
        let half = QuadRat::new(QuadInt::one(g), QuadInt::from_int(g, 2)).unwrap();
        assert!(matches!(
            reduce_scalar(&half, &two),
            Err(Error::DenominatorNotInvertible { p: 2, .. })
        ));
    }

    #[test]
    fn quadratic_residue_fields_are_fields() {
        for d in [1u64, 2, 3, 7] {
            let k = FieldSpec::new(d).unwrap();
            for p in sieve(50) {
                if splitting_type(k, p).unwrap() != SplittingType::Inert {
                    continue;
                }
                let f = ResidueField::new(PrimeIdealData::above(k, p).unwrap());
                let q = f.order();
                assert_eq!(q, (p * p) as u128);
                for x in f.elements().filter(|x| !x.is_zero()) {
                    assert_eq!(f.pow(x, q - 1), ResidueElem::ONE, "d={d} p={p} x={x}");
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), ResidueElem::ONE);
                }
            }
        }
    }

    #[test]
    fn prime_field_powers() {
        let g = FieldSpec::gaussian();
        let f = ResidueField::new(PrimeIdealData::above(g, 13).unwrap());
        for x in f.elements() {
            let y = f.pow(x, 13);
            assert_eq!(y, x);
        }
        assert_eq!(f.pow(ResidueElem::ZERO, 0), ResidueElem::ONE);
    }
}
