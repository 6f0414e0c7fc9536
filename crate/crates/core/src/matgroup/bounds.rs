use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_words, Enumeration, GroupContext, Word};
use crate::error::{Error, Result};
use crate::quadfield::{QuadInt, QuadRat};

/// Entry-size constants of a generating set: `C1` bounds every generator entry
/// under both complex embeddings, `C2` bounds the common denominator `β'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    /// Filled in by the tower module once `c'` and `s` are fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
}

/// An upper bound for `|σ(x)|`, identical for both embeddings of an imaginary
/// quadratic field since they are complex conjugate.
pub fn abs_upper(x: &QuadRat) -> f64 {
    let num = sqrt_upper(x.num().norm());
    match x.den_int() {
        1 => num,
        den => (num / den as f64).next_up(),
    }
}

/// `sqrt(n)` rounded up, exact when `n` is a perfect square.
fn sqrt_upper(n: i128) -> f64 {
    let r = n.isqrt();
    if r * r == n {
        r as f64
    } else {
        (n as f64).sqrt().next_up()
    }
}

fn quadint_abs_upper(x: &QuadInt) -> f64 {
    sqrt_upper(x.norm())
}

pub fn compute_entry_constants(ctx: &GroupContext) -> BoundConstants {
    let c1 = ctx
        .generators()
        .iter()
        .flat_map(|g| g.entries())
        .map(|x| abs_upper(&x))
        .fold(1.0, f64::max);
    let c2 = quadint_abs_upper(&ctx.beta_prime()).max(1.0);
    BoundConstants { c1, c2, c3: None }
}

/// Outcome of checking `|σ(x)| <= 2^(w-1) C1^w` over an enumeration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryBoundReport {
    pub depth: usize,
    pub elements_checked: usize,
    pub c1: f64,
    /// Largest `|σ(x)| / (2^(w-1) C1^w)` seen.
    pub worst_ratio: f64,
    pub worst_word: Option<String>,
    pub passed: bool,
}

fn exact_bound_holds(x: &QuadRat, w: usize, c1: f64) -> bool {
    // |x|^2 = N(num) / den^2  versus  4^(w-1) C1^(2w)
    let lhs = BigRational::new(BigInt::from(x.num().norm()), BigInt::from(x.den_int()).pow(2));
    let c1 = BigRational::from_f64(c1).expect("finite constant");
    let rhs = BigRational::from_integer(BigInt::from(4)).pow(w as i32 - 1) * c1.pow(2 * w as i32);
    lhs <= rhs
}

/// Checks the entry bound for every element of word length `1..=depth`.
pub fn check_entry_bound(ctx: &GroupContext, depth: usize) -> Result<EntryBoundReport> {
    let e = enumerate_words(ctx, depth)?;
    check_entry_bound_on(&e, &compute_entry_constants(ctx))
}

pub fn check_entry_bound_on(e: &Enumeration, consts: &BoundConstants) -> Result<EntryBoundReport> {
    let c1 = consts.c1;
    // (ratio, index) of the worst element, plus the first violation if any
    let per_elem: Vec<(f64, usize, bool)> = (1..e.len())
        .into_par_iter()
        .map(|i| {
            let w = e.length(i);
            let bound = 2f64.powi(w as i32 - 1) * c1.powi(w as i32);
            let mut worst = 0.0f64;
            let mut ok = true;
            for x in e.elem(i).rep().entries() {
                let ratio = x.to_complex().norm() / bound;
                worst = worst.max(ratio);
                if ratio > 1.0 - 1e-9 && !exact_bound_holds(&x, w, c1) {
                    ok = false;
                }
            }
            (worst, i, ok)
        })
        .collect();
    if let Some(&(ratio, i, _)) = per_elem.iter().find(|r| !r.2) {
        return Err(Error::BoundViolation {
            check: "entry bound",
            witness: e.word(i).to_string(),
            detail: format!("entry ratio {ratio:.6} exceeds 1 at word length {}", e.length(i)),
        });
    }
    let worst = per_elem
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .copied();
    Ok(EntryBoundReport {
        depth: e.depth(),
        elements_checked: per_elem.len(),
        c1,
        worst_ratio: worst.map_or(0.0, |w| w.0),
        worst_word: worst.map(|w| e.word(w.1).to_string()),
        passed: true,
    })
}

/// Word whose entries are largest relative to the bound, if any were checked.
pub fn tightest_word(report: &EntryBoundReport) -> Option<Word> {
    report.worst_word.as_deref().and_then(|w| Word::parse(w).ok())
}
