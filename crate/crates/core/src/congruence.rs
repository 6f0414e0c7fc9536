//! Congruence subgroups of level `I`: reduction modulo prime ideals,
//! membership, index formulas and finite closures over residue fields.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgroup::{GroupContext, PslElem};
use crate::quadfield::{PrimeIdealData, ResidueElem, ResidueField, SquareFreeIdeal};

/// Default bound on the size of a finite closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CongruenceKind {
    /// Kernel of reduction: `≡ ±I`.
    Principal,
    /// `c ≡ 0`.
    Hecke0,
    /// `≡ ±[[1, *], [0, 1]]`.
    Hecke1,
}

impl CongruenceKind {
    pub const ALL: [CongruenceKind; 3] =
        [CongruenceKind::Principal, CongruenceKind::Hecke0, CongruenceKind::Hecke1];

    pub fn name(&self) -> &'static str {
        match self {
            CongruenceKind::Principal => "principal",
            CongruenceKind::Hecke0 => "hecke0",
            CongruenceKind::Hecke1 => "hecke1",
        }
    }
}

impl fmt::Display for CongruenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CongruenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "principal" | "gamma" | "full" => Ok(CongruenceKind::Principal),
            "hecke0" | "gamma0" => Ok(CongruenceKind::Hecke0),
            "hecke1" | "gamma1" => Ok(CongruenceKind::Hecke1),
            _ => Err(Error::Parse(format!("unknown congruence kind {s:?}"))),
        }
    }
}

/// A matrix `[[a, b], [c, d]]` over a residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMat(pub [ResidueElem; 4]);

impl fmt::Display for ResidueMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// `SL_2` / `PSL_2` arithmetic over one residue field.
#[derive(Clone, Copy, Debug)]
pub struct ResidueGroup {
    pub field: ResidueField,
}

impl ResidueGroup {
    pub fn new(prime: PrimeIdealData) -> Self {
        Self { field: ResidueField::new(prime) }
    }

    pub fn identity(&self) -> ResidueMat {
        ResidueMat([ResidueElem::ONE, ResidueElem::ZERO, ResidueElem::ZERO, ResidueElem::ONE])
    }

    pub fn mul(&self, x: &ResidueMat, y: &ResidueMat) -> ResidueMat {
        let f = &self.field;
        let [a, b, c, d] = x.0;
        let [e, g, h, k] = y.0;
        ResidueMat([
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ])
    }

    pub fn inv(&self, x: &ResidueMat) -> ResidueMat {
        let f = &self.field;
        let [a, b, c, d] = x.0;
        ResidueMat([d, f.neg(b), f.neg(c), a])
    }

    pub fn det(&self, x: &ResidueMat) -> ResidueElem {
        let f = &self.field;
        let [a, b, c, d] = x.0;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    /// Picks the sign so that the first nonzero entry, scanning `d, c, b, a`,
    /// has the smaller enumeration index of the pair `±e`.
    pub fn canonical(&self, x: &ResidueMat) -> ResidueMat {
        let f = &self.field;
        let Some(lead) = x.0.iter().rev().find(|e| !e.is_zero()) else {
            return *x;
        };
        if f.index_of(*lead) <= f.index_of(f.neg(*lead)) {
            *x
        } else {
            ResidueMat(x.0.map(|e| f.neg(e)))
        }
    }

    /// Entrywise reduction of the canonical lift (no sign normalisation).
    pub fn reduce_lift(&self, g: &PslElem) -> Result<ResidueMat> {
        let e = g.rep().entries();
        Ok(ResidueMat([
            self.field.reduce(&e[0])?,
            self.field.reduce(&e[1])?,
            self.field.reduce(&e[2])?,
            self.field.reduce(&e[3])?,
        ]))
    }

    pub fn reduce(&self, g: &PslElem) -> Result<ResidueMat> {
        Ok(self.canonical(&self.reduce_lift(g)?))
    }

    /// `|PSL_2(F_q)| = q(q^2 - 1) / gcd(2, q - 1)`.
    pub fn psl_order(&self) -> u128 {
        psl2_order(self.field.order())
    }
}

pub fn psl2_order(q: u128) -> u128 {
    let g = if q % 2 == 1 { 2 } else { 1 };
    q * (q * q - 1) / g
}

/// Reduction of `g` modulo `P`, in canonical `±` form.
pub fn reduce_mat(g: &PslElem, prime: &PrimeIdealData) -> Result<ResidueMat> {
    ResidueGroup::new(*prime).reduce(g)
}

/// Membership tester for one congruence subgroup; residue data is prepared once.
#[derive(Clone, Debug)]
pub struct CongruenceTester {
    kind: CongruenceKind,
    ideal: SquareFreeIdeal,
    groups: Vec<ResidueGroup>,
}

impl CongruenceTester {
    pub fn new(kind: CongruenceKind, ideal: &SquareFreeIdeal) -> Self {
        Self {
            kind,
            ideal: ideal.clone(),
            groups: ideal.factors().iter().map(|p| ResidueGroup::new(*p)).collect(),
        }
    }

    pub fn kind(&self) -> CongruenceKind {
        self.kind
    }

    pub fn ideal(&self) -> &SquareFreeIdeal {
        &self.ideal
    }

    /// One sign `s` is used across all factors: the lift must reduce to
    /// `s·[[1, *], [0, 1]]` (Hecke1) or `s·I` (principal) modulo every factor.
    pub fn contains(&self, g: &PslElem) -> Result<bool> {
        let mut plus = true;
        let mut minus = true;
        for grp in &self.groups {
            let f = &grp.field;
            let [a, b, c, d] = grp.reduce_lift(g)?.0;
            if !c.is_zero() {
                return Ok(false);
            }
            let (one, neg_one) = (ResidueElem::ONE, f.neg(ResidueElem::ONE));
            match self.kind {
                CongruenceKind::Hecke0 => continue,
                CongruenceKind::Hecke1 => {
                    plus &= a == one && d == one;
                    minus &= a == neg_one && d == neg_one;
                }
                CongruenceKind::Principal => {
                    plus &= a == one && d == one && b.is_zero();
                    minus &= a == neg_one && d == neg_one && b.is_zero();
                }
            }
            if !plus && !minus {
                return Ok(false);
            }
        }
        Ok(plus || minus)
    }
}

pub fn member(g: &PslElem, kind: CongruenceKind, ideal: &SquareFreeIdeal) -> Result<bool> {
    CongruenceTester::new(kind, ideal).contains(g)
}

/// `[Γ : Γ_kind(I)]` assuming surjectivity of reduction at every factor.
pub fn index_formula(kind: CongruenceKind, ideal: &SquareFreeIdeal) -> Result<BigUint> {
    index_formula_from_norms(kind, ideal.factors().iter().map(|p| p.norm()))
}

/// As [`index_formula`], from the factor norms alone.
pub fn index_formula_from_norms(
    kind: CongruenceKind,
    norms: impl IntoIterator<Item = u128>,
) -> Result<BigUint> {
    let mut acc = BigUint::from(1u32);
    for q in norms {
        if q % 2 == 0 {
            return Err(Error::UnsupportedEvenResidueField(q));
        }
        let q = BigUint::from(q);
        let one = BigUint::from(1u32);
        acc *= match kind {
            CongruenceKind::Principal => &q * (&q * &q - &one),
            CongruenceKind::Hecke0 => &q + &one,
            CongruenceKind::Hecke1 => &q * &q - &one,
        };
    }
    if kind != CongruenceKind::Hecke0 {
        acc /= 2u32;
    }
    Ok(acc)
}

/// `ln` of [`index_formula_from_norms`], for norms too large to multiply out cheaply.
pub fn log_index_from_norms(kind: CongruenceKind, norms: &[f64]) -> f64 {
    let s: f64 = norms
        .iter()
        .map(|&q| match kind {
            CongruenceKind::Principal => q.ln() + (q * q - 1.0).ln(),
            CongruenceKind::Hecke0 => q.ln_1p(),
            CongruenceKind::Hecke1 => (q * q - 1.0).ln(),
        })
        .sum();
    if kind == CongruenceKind::Hecke0 {
        s
    } else {
        s - std::f64::consts::LN_2
    }
}

/// The subgroup of `PSL_2(O/P)` generated by a list of residue matrices.
#[derive(Clone, Debug)]
pub struct FiniteClosure {
    pub group: ResidueGroup,
    pub generators: Vec<ResidueMat>,
    pub elements: IndexSet<ResidueMat>,
}

impl FiniteClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &ResidueMat) -> bool {
        self.elements.contains(&self.group.canonical(x))
    }
}

/// Breadth-first closure under right multiplication by the generators (which
/// suffices in a finite group). Iteration order is deterministic.
pub fn closure(group: ResidueGroup, generators: Vec<ResidueMat>, cap: usize) -> Result<FiniteClosure> {
    let gens: Vec<ResidueMat> = generators.iter().map(|g| group.canonical(g)).collect();
    let mut elements = IndexSet::new();
    elements.insert(group.identity());
    let mut start = 0;
    while start < elements.len() {
        let end = elements.len();
        let products: Vec<ResidueMat> = (start..end)
            .into_par_iter()
            .flat_map_iter(|i| {
                let x = elements[i];
                gens.iter().map(move |g| group.canonical(&group.mul(&x, g)))
            })
            .collect();
        for m in products {
            if elements.insert(m) && elements.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        }
        start = end;
    }
    Ok(FiniteClosure { group, generators: gens, elements })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Surjectivity {
    Surjective { order: u128 },
    ProperSubgroup { order: u128, psl_order: u128 },
    Excluded { reason: String },
}

impl Surjectivity {
    pub fn is_surjective(&self) -> bool {
        matches!(self, Surjectivity::Surjective { .. })
    }
}

fn reduced_generators(ctx: &GroupContext, group: &ResidueGroup) -> Result<Vec<ResidueMat>> {
    ctx.psl_generators().iter().map(|g| group.reduce(g)).collect()
}

pub fn surjectivity_check(ctx: &GroupContext, prime: &PrimeIdealData) -> Result<Surjectivity> {
    surjectivity_check_capped(ctx, prime, DEFAULT_CLOSURE_CAP)
}

pub fn surjectivity_check_capped(
    ctx: &GroupContext,
    prime: &PrimeIdealData,
    cap: usize,
) -> Result<Surjectivity> {
    let group = ResidueGroup::new(*prime);
    let full = group.psl_order();
    if full > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    let gens = match reduced_generators(ctx, &group) {
        Ok(g) => g,
        Err(e @ Error::DenominatorNotInvertible { .. }) => {
            return Ok(Surjectivity::Excluded { reason: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    let order = closure(group, gens, cap)?.order() as u128;
    Ok(if order == full {
        Surjectivity::Surjective { order }
    } else {
        Surjectivity::ProperSubgroup { order, psl_order: full }
    })
}

/// A point of the projective line over the residue field, normalised to
/// `(x : 1)` or `(1 : 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum ProjPoint {
    Finite(ResidueElem),
    Infinity,
}

/// Size of the orbit of `(1 : 0)` under the reduced generators; equals
/// `N(P) + 1` exactly when the action on the projective line is transitive.
pub fn coset_count_orbit(ctx: &GroupContext, prime: &PrimeIdealData) -> Result<u64> {
    let group = ResidueGroup::new(*prime);
    let f = group.field;
    let gens = reduced_generators(ctx, &group)?;
    let act = |m: &ResidueMat, p: ProjPoint| -> ProjPoint {
        let [a, b, c, d] = m.0;
        let (x, y) = match p {
            ProjPoint::Finite(x) => (f.add(f.mul(a, x), b), f.add(f.mul(c, x), d)),
            ProjPoint::Infinity => (a, c),
        };
        match f.inv(y) {
            Some(yi) => ProjPoint::Finite(f.mul(x, yi)),
            None => ProjPoint::Infinity,
        }
    };
    let mut orbit = IndexSet::new();
    orbit.insert(ProjPoint::Infinity);
    let mut i = 0;
    while i < orbit.len() {
        let p = orbit[i];
        for g in &gens {
            orbit.insert(act(g, p));
        }
        i += 1;
    }
    Ok(orbit.len() as u64)
}
