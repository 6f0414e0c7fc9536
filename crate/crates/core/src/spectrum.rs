//! Loxodromic traces from word enumeration, the norm data used for prime
//! avoidance, prime counting and admissible-prime selection.

use std::collections::HashSet;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{CongruenceKind, CongruenceTester};
use crate::error::{Error, Result};
use crate::geometry::{classify_exact, translation_length, ComplexLength, IsometryClass};
use crate::matgroup::{enumerate_words, BoundConstants, GroupContext, PslElem};
use crate::quadfield::primes::{is_prime, next_prime, sieve};
use crate::quadfield::{
    splitting_type, FieldSpec, PrimeIdealData, QuadInt, SplittingType, SquareFreeIdeal,
};
use crate::tower::compute_c3;

/// A loxodromic element with trace `α/β` and the norms `|N(α ∓ 2β)|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicRecord {
    pub word: String,
    pub word_length: usize,
    #[serde(serialize_with = "display")]
    pub trace_num: QuadInt,
    #[serde(serialize_with = "display")]
    pub trace_den: QuadInt,
    pub complex_length: ComplexLength,
    pub norm_minus: u128,
    pub norm_plus: u128,
    #[serde(skip)]
    pub elem: PslElem,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn big_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl GeodesicRecord {
    /// True when `α = ±2β`, which would make a norm vanish.
    pub fn has_zero_factor(&self) -> bool {
        self.norm_minus == 0 || self.norm_plus == 0
    }
}

/// Distinct loxodromic traces of translation length `<= cutoff` among all
/// elements of word length `<= depth`.
///
/// The inventory is complete only relative to `depth`: a geodesic of length
/// `<= cutoff` whose shortest word is longer than `depth` is not seen.
#[derive(Clone, Debug, Serialize)]
pub struct TraceInventory {
    pub field: FieldSpec,
    pub depth: usize,
    pub cutoff: f64,
    pub records: Vec<GeodesicRecord>,
    #[serde(serialize_with = "big_string")]
    pub product_of_norms: BigUint,
    /// Records skipped in the product because a norm was zero.
    pub zero_factor_words: Vec<String>,
    pub elements_scanned: usize,
    /// `N(β')`; primes dividing it are never selected.
    pub beta_prime_norm: u128,
    pub shortest_length: Option<f64>,
}

impl TraceInventory {
    /// `r(l)`, the number of distinct traces.
    pub fn count(&self) -> usize {
        self.records.len()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Export(e.to_string());
        out.write_record([
            "word", "word_length", "trace_num", "trace_den", "length", "theta", "norm_minus", "norm_plus",
        ])
        .map_err(err)?;
        for r in &self.records {
            out.write_record([
                r.word.clone(),
                r.word_length.to_string(),
                r.trace_num.to_string(),
                r.trace_den.to_string(),
                format!("{:.12}", r.complex_length.length),
                format!("{:.12}", r.complex_length.rotation),
                r.norm_minus.to_string(),
                r.norm_plus.to_string(),
            ])
            .map_err(err)?;
        }
        out.flush().map_err(|e| Error::Export(e.to_string()))
    }
}

pub fn enumerate_geodesics(ctx: &GroupContext, depth: usize, cutoff: f64) -> Result<TraceInventory> {
    if !(cutoff > 0.0) {
        return Err(Error::OutOfRange(format!("cutoff length must be positive, got {cutoff}")));
    }
    let e = enumerate_words(ctx, depth)?;
    let field = ctx.field();
    let candidates: Vec<(usize, ComplexLength)> = (1..e.len())
        .into_par_iter()
        .filter_map(|i| {
            let g = e.elem(i);
            let tr = g.trace_pair();
            if classify_exact(&tr, Some(g.is_identity())) != IsometryClass::Loxodromic {
                return None;
            }
            let cl = translation_length(tr.to_complex()).ok()?;
            (cl.length <= cutoff).then_some((i, cl))
        })
        .collect();
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    let mut product = BigUint::from(1u32);
    let mut zero_factor_words = Vec::new();
    for (i, cl) in candidates {
        let g = e.elem(i);
        let tr = g.trace_pair();
        if !seen.insert(tr) {
            continue;
        }
        let alpha = tr.num();
        let beta = tr.den();
        let two_beta = beta.scale(2);
        let rec = GeodesicRecord {
            word: e.word(i).to_string(),
            word_length: e.length(i),
            trace_num: alpha,
            trace_den: beta,
            complex_length: cl,
            norm_minus: (alpha - two_beta).norm().unsigned_abs(),
            norm_plus: (alpha + two_beta).norm().unsigned_abs(),
            elem: *g,
        };
        if rec.has_zero_factor() {
            zero_factor_words.push(rec.word.clone());
        } else {
            product *= BigUint::from(rec.norm_minus) * BigUint::from(rec.norm_plus);
        }
        records.push(rec);
    }
    let shortest_length = records.iter().map(|r| r.complex_length.length).reduce(f64::min);
    Ok(TraceInventory {
        field,
        depth,
        cutoff,
        records,
        product_of_norms: product,
        zero_factor_words,
        elements_scanned: e.len(),
        beta_prime_norm: ctx.beta_prime().norm().unsigned_abs(),
        shortest_length,
    })
}

/// Natural logarithm of a big integer.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceNormReport {
    pub records_checked: usize,
    pub c_prime: f64,
    pub c3: f64,
    /// Largest `ln N(α ± 2β) - ln(2 (2 C1 C2)^(c' ℓ m))` over the records.
    pub worst_log_slack: f64,
    /// Largest `ln N(α ± 2β) - ℓ ln C3`.
    pub worst_log_slack_c3: f64,
    pub worst_word: Option<String>,
    pub passed: bool,
}

/// Checks `|N(α ± 2β)| <= 2 (2 C1 C2)^(c' ℓ m)` and `<= C3^ℓ` for every record,
/// using each record's own translation length `ℓ`.
pub fn check_trace_norm_bound(
    inv: &TraceInventory,
    consts: &BoundConstants,
    ctx: &GroupContext,
) -> Result<TraceNormReport> {
    let c3 = consts.c3.unwrap_or_else(|| compute_c3(consts, ctx).value);
    let m = ctx.field().degree() as f64;
    let cp = ctx.c_prime();
    let base = (2.0 * consts.c1 * consts.c2).ln();
    let mut worst = f64::NEG_INFINITY;
    let mut worst_c3 = f64::NEG_INFINITY;
    let mut worst_word = None;
    for r in &inv.records {
        let l = r.complex_length.length;
        if l < ctx.systole() {
            return Err(Error::BoundViolation {
                check: "systole estimate",
                witness: r.word.clone(),
                detail: format!("translation length {l} is below the systole estimate {}", ctx.systole()),
            });
        }
        let log_bound = std::f64::consts::LN_2 + cp * l * m * base;
        let log_bound_c3 = l * c3.ln();
        for n in [r.norm_minus, r.norm_plus] {
            if n == 0 {
                continue;
            }
            let ln = (n as f64).ln();
            // a float rounding of ln N could only matter within ~1e-15 relative
            if ln - log_bound > 1e-12 * log_bound.abs().max(1.0) {
                return Err(Error::BoundViolation {
                    check: "trace norm bound",
                    witness: r.word.clone(),
                    detail: format!("N = {n} exceeds 2(2 C1 C2)^(c' l m) = {:.6e}", log_bound.exp()),
                });
            }
            if ln - log_bound_c3 > 1e-12 * log_bound_c3.abs().max(1.0) {
                return Err(Error::BoundViolation {
                    check: "C3 bound",
                    witness: r.word.clone(),
                    detail: format!("N = {n} exceeds C3^l = {:.6e}", log_bound_c3.exp()),
                });
            }
            if ln - log_bound > worst {
                worst = ln - log_bound;
                worst_word = Some(r.word.clone());
            }
            worst_c3 = worst_c3.max(ln - log_bound_c3);
        }
    }
    Ok(TraceNormReport {
        records_checked: inv.records.len(),
        c_prime: cp,
        c3,
        worst_log_slack: worst,
        worst_log_slack_c3: worst_c3,
        worst_word,
        passed: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicCountReport {
    pub exponent: f64,
    /// `(ℓ, #{records with length <= ℓ})` at every distinct record length.
    pub samples: Vec<(f64, usize)>,
    /// Smallest `c` with `count <= c e^(exponent ℓ)` on the samples.
    pub fitted_constant: f64,
    pub supplied_constant: Option<f64>,
    pub supplied_constant_holds: Option<bool>,
}

/// Empirical check of `#(l) < c e^(exponent l)` on the enumerated traces.
pub fn geodesic_count_check(inv: &TraceInventory, c_prime_count: Option<f64>, exponent: f64) -> GeodesicCountReport {
    let mut lengths: Vec<f64> = inv.records.iter().map(|r| r.complex_length.length).collect();
    lengths.sort_by(f64::total_cmp);
    let mut samples: Vec<(f64, usize)> = Vec::new();
    for (i, &l) in lengths.iter().enumerate() {
        match samples.last_mut() {
            Some(last) if last.0 == l => last.1 = i + 1,
            _ => samples.push((l, i + 1)),
        }
    }
    let fitted = samples
        .iter()
        .map(|&(l, n)| n as f64 / (exponent * l).exp())
        .fold(0.0, f64::max);
    GeodesicCountReport {
        exponent,
        fitted_constant: fitted,
        supplied_constant: c_prime_count,
        supplied_constant_holds: c_prime_count.map(|c| {
            samples.iter().all(|&(l, n)| (n as f64) < c * (exponent * l).exp())
        }),
        samples,
    }
}

/// Prime counts up to `x`; `π` counts `p <= x`, `θ` sums `ln p` over `p < x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeCounting {
    pub x: u64,
    pub pi_x: u64,
    pub theta_x: f64,
    pub pi_split_x: u64,
    pub theta_split_x: f64,
}

/// `Σ ln p` in the given order.
pub fn theta_sum(primes: &[u64]) -> f64 {
    primes.iter().map(|&p| (p as f64).ln()).sum()
}

pub fn prime_counts(field: FieldSpec, x: u64) -> Result<PrimeCounting> {
    if x < 2 {
        return Err(Error::OutOfRange(format!("prime counts need x >= 2, got {x}")));
    }
    let primes = sieve(x);
    let split: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| splitting_type(field, p) == Ok(SplittingType::Split))
        .collect();
    let below = |v: &[u64]| -> Vec<u64> { v.iter().copied().filter(|&p| p < x).collect() };
    Ok(PrimeCounting {
        x,
        pi_x: primes.len() as u64,
        theta_x: theta_sum(&below(&primes)),
        pi_split_x: split.len() as u64,
        theta_split_x: theta_sum(&below(&split)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum SelectionStrategy {
    /// The smallest split prime not dividing the norm product.
    SmallestSplit,
    /// A prime `p1 ∈ (C3^l, 2 C3^l)`, then the first split prime after `p1`,
    /// expected below `3 p1`. Every norm is below `C3^l`, so none is divisible.
    DirectInterval { c3: f64, cutoff: f64 },
}

impl Default for SelectionStrategy {
    fn default() -> Self {
        SelectionStrategy::SmallestSplit
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeCertificate {
    pub strategy: SelectionStrategy,
    pub p: u64,
    pub prime: PrimeIdealData,
    #[serde(serialize_with = "big_string")]
    pub product_of_norms: BigUint,
    pub log_product: f64,
    /// `2 n ln(product)` with `n = 2`.
    pub log_bound: f64,
    pub below_log_bound: bool,
    /// Smaller split primes rejected because they divide the product or `N(β')`.
    pub rejected_split_primes: Vec<u64>,
    /// For the interval strategy: `(p1, interval_ok, split_below_3p1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(u64, bool, bool)>,
}

fn admissible(p: u64, product: &BigUint, beta_norm: u128) -> bool {
    !(product % p).is_zero() && beta_norm % p as u128 != 0
}

impl TraceInventory {
    /// `p` divides neither the norm product nor `N(β')`.
    pub fn admits(&self, p: u64) -> bool {
        admissible(p, &self.product_of_norms, self.beta_prime_norm)
    }
}

pub fn select_admissible_prime(inv: &TraceInventory, strategy: SelectionStrategy) -> Result<PrimeCertificate> {
    let field = inv.field;
    let product = &inv.product_of_norms;
    if *product < BigUint::from(2u32) {
        return Err(Error::NoObstruction(product.to_string()));
    }
    let n = field.galois_closure_degree() as f64;
    let log_product = big_ln(product);
    let log_bound = 2.0 * n * log_product;
    let mut rejected = Vec::new();
    let (p, interval) = match strategy {
        SelectionStrategy::SmallestSplit => {
            let mut p = 2u64;
            loop {
                if splitting_type(field, p)? == SplittingType::Split {
                    if admissible(p, product, inv.beta_prime_norm) {
                        break (p, None);
                    }
                    rejected.push(p);
                }
                p = next_prime(p + 1);
            }
        }
        SelectionStrategy::DirectInterval { c3, cutoff } => {
            let x = c3.powf(cutoff);
            if !(x.is_finite() && x < 4.0e18) {
                return Err(Error::NoAdmissiblePrime(format!("C3^l = {x:e} is out of range")));
            }
            let p1 = next_prime(x.floor() as u64 + 1);
            let interval_ok = (p1 as f64) < 2.0 * x;
            let mut p = next_prime(p1 + 1);
            loop {
                if splitting_type(field, p)? == SplittingType::Split {
                    if admissible(p, product, inv.beta_prime_norm) {
                        break;
                    }
                    rejected.push(p);
                }
                p = next_prime(p + 1);
            }
            (p, Some((p1, interval_ok, p < 3 * p1)))
        }
    };
    debug_assert!(is_prime(p));
    Ok(PrimeCertificate {
        strategy,
        p,
        prime: PrimeIdealData::find_split(field, p)?,
        product_of_norms: product.clone(),
        log_product,
        log_bound,
        below_log_bound: (p as f64) < log_bound,
        rejected_split_primes: rejected,
        interval,
    })
}

/// Re-checks directly that no inventoried element lies in `Γ1(P)`; returns the
/// words of any that do.
pub fn inventory_members(inv: &TraceInventory, prime: &PrimeIdealData) -> Result<Vec<String>> {
    let tester = CongruenceTester::new(CongruenceKind::Hecke1, &SquareFreeIdeal::prime(*prime));
    let mut hits = Vec::new();
    for r in &inv.records {
        if tester.contains(&r.elem)? {
            hits.push(r.word.clone());
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{compute_entry_constants, Mat2};

    fn figure_eight() -> GroupContext {
        let q = FieldSpec::eisenstein();
        GroupContext::new(
            q,
            vec![Mat2::parse(q, "[[1,1],[0,1]]").unwrap(), Mat2::parse(q, "[[1,0],[-w,1]]").unwrap()],
        )
        .unwrap()
    }

    fn inventory_with_product(field: FieldSpec, product: u32) -> TraceInventory {
        TraceInventory {
            field,
            depth: 0,
            cutoff: 1.0,
            records: vec![],
            product_of_norms: BigUint::from(product),
            zero_factor_words: vec![],
            elements_scanned: 0,
            beta_prime_norm: 1,
            shortest_length: None,
        }
    }

    #[test]
    fn figure_eight_record() {
        let inv = enumerate_geodesics(&figure_eight(), 2, 2.0).unwrap();
        let r = inv.records.iter().find(|r| r.word == "ab").unwrap();
        assert_eq!(r.trace_num.to_string(), "2-w");
        assert_eq!(r.trace_den.to_string(), "1");
        assert_eq!((r.norm_minus, r.norm_plus), (1, 13));
        let traces: HashSet<_> = inv.records.iter().map(|r| r.elem.trace_pair()).collect();
        assert_eq!(traces.len(), inv.records.len());
    }

    #[test]
    fn unipotent_generators_give_nothing() {
        let q = FieldSpec::gaussian();
        let ctx = GroupContext::new(
            q,
            vec![Mat2::from_ints(q, [[1, 1], [0, 1]]).unwrap(), Mat2::parse(q, "[[1,i],[0,1]]").unwrap()],
        )
        .unwrap();
        let inv = enumerate_geodesics(&ctx, 1, 10.0).unwrap();
        assert_eq!(inv.count(), 0);
        assert_eq!(inv.product_of_norms, BigUint::from(1u32));
        assert!(matches!(
            select_admissible_prime(&inv, SelectionStrategy::default()),
            Err(Error::NoObstruction(_))
        ));
    }

    #[test]
    fn selection_examples() {
        let c = select_admissible_prime(&inventory_with_product(FieldSpec::eisenstein(), 13), Default::default())
            .unwrap();
        assert_eq!(c.p, 7);
        assert!(c.below_log_bound);
        assert!((c.log_bound - 4.0 * 13f64.ln()).abs() < 1e-12);
        let g = select_admissible_prime(&inventory_with_product(FieldSpec::gaussian(), 5), Default::default())
            .unwrap();
        assert_eq!(g.p, 13);
        assert_eq!(g.rejected_split_primes, vec![5]);
    }

    #[test]
    fn norm_bound_on_figure_eight() {
        let ctx = figure_eight();
        let inv = enumerate_geodesics(&ctx, 4, 3.0).unwrap();
        let cp = inv.depth as f64 / inv.shortest_length.unwrap();
        let ctx = ctx.with_c_prime(cp).unwrap();
        let consts = compute_entry_constants(&ctx);
        let rep = check_trace_norm_bound(&inv, &consts, &ctx).unwrap();
        assert!(rep.worst_log_slack <= 0.0);
    }

    #[test]
    fn counts() {
        let pc = prime_counts(FieldSpec::gaussian(), 10).unwrap();
        assert_eq!((pc.pi_x, pc.pi_split_x), (4, 1));
        assert!((pc.theta_x - 210f64.ln()).abs() < 1e-12);
        let empty = geodesic_count_check(&inventory_with_product(FieldSpec::gaussian(), 1), None, 2.0);
        assert_eq!(empty.fitted_constant, 0.0);
    }

    #[test]
    fn csv_export() {
        let inv = enumerate_geodesics(&figure_eight(), 2, 2.0).unwrap();
        let mut buf = Vec::new();
        inv.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("word,word_length,trace_num,trace_den,length,theta,norm_minus,norm_plus"));
        assert_eq!(text.lines().count(), inv.count() + 1);
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((big_ln(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
    }
}
