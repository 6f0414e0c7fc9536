use rayon::prelude::*;
use serde::Serialize;

use super::{displacement_bound, DisplacementBound};
use crate::congruence::{CongruenceKind, CongruenceTester};
use crate::error::{Error, Result};
use crate::geometry::{classify_exact, orbit_cosh_distance, IsometryClass};
use crate::matgroup::{enumerate_words, GroupContext};
use crate::quadfield::SquareFreeIdeal;

/// Absolute tolerance on the orbit-distance comparison.
pub const DISPLACEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub word: String,
    pub cosh_distance: f64,
}

/// Brute-force check of the orbit-displacement bound over the enumerated
/// members of a congruence subgroup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisplacementReport {
    pub kind: CongruenceKind,
    pub ideal: String,
    pub depth: usize,
    pub bound: DisplacementBound,
    pub elements_enumerated: usize,
    pub members: usize,
    /// Minimum of `cosh d(γζ, ζ)` over all nontrivial members.
    pub min_all: Option<Witness>,
    /// Minimum over members other than non-parabolic elements fixing infinity.
    pub min_hypothesis: Option<Witness>,
    /// Nontrivial members fixing infinity that are not parabolic.
    pub hypothesis_violations: Vec<String>,
    /// Members with `c != 0` and `|c| < C1`, or parabolic with `|b| < C2`.
    pub entry_violations: Vec<String>,
    pub passed: bool,
}

impl DisplacementReport {
    /// Converts a failed report into a [`Error::BoundViolation`] naming the witness.
    pub fn ensure(self) -> Result<Self> {
        if self.passed {
            return Ok(self);
        }
        let (witness, detail) = match (&self.min_all, self.entry_violations.first()) {
            (_, Some(w)) => (w.clone(), "entry hypothesis fails".to_string()),
            (Some(m), None) => (
                m.word.clone(),
                format!("cosh distance {} < bound {}", m.cosh_distance, self.bound.cosh_bound),
            ),
            (None, None) => unreachable!("a report without members passes"),
        };
        Err(Error::BoundViolation { check: "orbit displacement", witness, detail })
    }
}

struct Scored {
    index: usize,
    cosh: f64,
    fixes_infinity_non_parabolic: bool,
    entry_violation: bool,
}

pub fn verify_displacement(
    ctx: &GroupContext,
    kind: CongruenceKind,
    ideal: &SquareFreeIdeal,
    depth: usize,
) -> Result<DisplacementReport> {
    let bound = displacement_bound(kind, ideal.norm_f64());
    let tester = CongruenceTester::new(kind, ideal);
    let e = enumerate_words(ctx, depth)?;
    let (c1_sq, c2_sq) = (bound.c1 * bound.c1, bound.c2 * bound.c2);
    let scored: Vec<Scored> = (1..e.len())
        .into_par_iter()
        .map(|i| -> Result<Option<Scored>> {
            let g = e.elem(i);
            if !tester.contains(g)? {
                return Ok(None);
            }
            let m = g.rep();
            let cosh = orbit_cosh_distance(&m.to_complex(), bound.t);
            let c_zero = m.c().is_zero();
            let class = classify_exact(&g.trace_pair(), Some(false));
            let abs_sq = |x: crate::quadfield::QuadRat| {
                let r = x.norm();
                *r.numer() as f64 / *r.denom() as f64
            };
            let tol = |v: f64| v * (1.0 - 1e-12);
            let entry_violation = if !c_zero {
                abs_sq(m.c()) < tol(c1_sq)
            } else {
                class == IsometryClass::Parabolic && abs_sq(m.b()) < tol(c2_sq)
            };
            Ok(Some(Scored {
                index: i,
                cosh,
                fixes_infinity_non_parabolic: c_zero && class != IsometryClass::Parabolic,
                entry_violation,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let witness = |s: &Scored| Witness { word: e.word(s.index).to_string(), cosh_distance: s.cosh };
    let min_of = |it: &mut dyn Iterator<Item = &Scored>| {
        it.min_by(|a, b| a.cosh.total_cmp(&b.cosh).then(a.index.cmp(&b.index))).map(witness)
    };
    let min_all = min_of(&mut scored.iter());
    let min_hypothesis = min_of(&mut scored.iter().filter(|s| !s.fixes_infinity_non_parabolic));
    let hypothesis_violations: Vec<String> = scored
        .iter()
        .filter(|s| s.fixes_infinity_non_parabolic)
        .map(|s| e.word(s.index).to_string())
        .collect();
    let entry_violations: Vec<String> =
        scored.iter().filter(|s| s.entry_violation).map(|s| e.word(s.index).to_string()).collect();
    let passed = entry_violations.is_empty()
        && min_all.as_ref().map_or(true, |w| w.cosh_distance >= bound.cosh_bound - DISPLACEMENT_TOLERANCE);
    Ok(DisplacementReport {
        kind,
        ideal: ideal.to_string(),
        depth,
        bound,
        elements_enumerated: e.len(),
        members: scored.len(),
        min_all,
        min_hypothesis,
        hypothesis_violations,
        entry_violations,
        passed,
    })
}
