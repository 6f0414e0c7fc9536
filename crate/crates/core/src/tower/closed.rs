use serde::Serialize;

use super::certificate::{certificate_from_norms, DepthSemantics, ExponentClaim, SurjectivityStatus};
use super::noncompact::{surjectivity_status, TowerLevel};
use crate::congruence::CongruenceKind;
use crate::error::{Error, Result};
use crate::matgroup::GroupContext;
use crate::quadfield::primes::next_prime;
use crate::quadfield::{splitting_type, PrimeIdealData, SplittingType, SquareFreeIdeal};
use crate::spectrum::{enumerate_geodesics, inventory_members, TraceInventory};

/// Exponents `(a, b)` in `genus >= (½N(P_new)²)^a > (½N(P_S)²)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedExponents {
    pub a: f64,
    pub b: f64,
    pub arithmetic: bool,
}

/// Generic pair `(1/8 - ε/2, 1/8 - ε)`; with a linear geodesic count the
/// improved pair `(1/4 - ε/2, 1/4 - ε)`.
pub fn closed_exponents(ctx: &GroupContext, epsilon: f64) -> Result<ClosedExponents> {
    let arithmetic = ctx.geodesic_count_exponent() <= 1.0;
    let base = if arithmetic { 0.25 } else { 0.125 };
    if !(epsilon > 0.0 && epsilon < base) {
        return Err(Error::OutOfRange(format!("eps must lie in (0, {base}), got {epsilon}")));
    }
    Ok(ClosedExponents { a: base - epsilon / 2.0, b: base - epsilon, arithmetic })
}

/// `(½N_new²)^a > (½(N_prev N_new)²)^b`, in logs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainingCheck {
    pub log_norm_prev: f64,
    pub log_norm_new: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// Smallest `ln N_new` for which the inequality holds given `N_prev`.
    pub required_log_norm: f64,
    pub holds: bool,
}

pub fn chaining_check(exps: ClosedExponents, log_norm_prev: f64, log_norm_new: f64) -> ChainingCheck {
    let ln2 = std::f64::consts::LN_2;
    let log_lhs = exps.a * (2.0 * log_norm_new - ln2);
    let log_rhs = exps.b * (2.0 * (log_norm_prev + log_norm_new) - ln2);
    ChainingCheck {
        log_norm_prev,
        log_norm_new,
        log_lhs,
        log_rhs,
        required_log_norm: exps.b * log_norm_prev / (exps.a - exps.b) + ln2 / 2.0,
        holds: log_lhs > log_rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedLevel {
    #[serde(flatten)]
    pub level: TowerLevel,
    pub depth: usize,
    pub cutoff: f64,
    pub inventory_size: usize,
    pub rejected_split_primes: Vec<u64>,
    /// Inventoried words found in `Γ1(P_new)` on re-check; empty when excluded.
    pub members_in_new_prime: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedTower {
    pub epsilon: f64,
    pub exponents: ClosedExponents,
    pub depth: usize,
    pub cutoff: f64,
    pub levels: Vec<ClosedLevel>,
    /// Exclusion and chaining hold at every level.
    pub pipeline_ok: bool,
    /// Every certificate's genus claim holds as well.
    pub passed: bool,
}

fn pick_prime(
    ctx: &GroupContext,
    inv: &TraceInventory,
    used: &[PrimeIdealData],
    exps: ClosedExponents,
    log_prev: f64,
) -> Result<(PrimeIdealData, SurjectivityStatus, Vec<u64>)> {
    let field = ctx.field();
    let required = chaining_check(exps, log_prev, 0.0).required_log_norm;
    let mut rejected = Vec::new();
    let mut p = 2u64;
    loop {
        if splitting_type(field, p)? == SplittingType::Split {
            let ok = inv.admits(p)
                && !used.iter().any(|q| q.p() == p)
                && (p as f64).ln() > required;
            if ok {
                let prime = PrimeIdealData::find_split(field, p)?;
                let surj = surjectivity_status(ctx, &prime)?;
                if surj != SurjectivityStatus::Failed {
                    return Ok((prime, surj, rejected));
                }
            }
            rejected.push(p);
        }
        p = next_prime(p + 1);
        if p > 1 << 40 {
            return Err(Error::NoAdmissiblePrime(format!("no split prime with ln N > {required}")));
        }
    }
}

/// Tower `Γ1(P_1) ⊃ Γ1(P_1 P_2) ⊃ ...` with level `j` excluding every
/// inventoried loxodromic of length `<= j·l` found among words of length `<= k`.
///
/// All systole and genus statements are relative to that enumeration: a short
/// geodesic with no word of length `<= k` is not excluded.
pub fn build_tower_closed(
    ctx: &GroupContext,
    epsilon: f64,
    depth: usize,
    cutoff: f64,
    levels: usize,
    base_covolume: f64,
) -> Result<ClosedTower> {
    let exps = closed_exponents(ctx, epsilon)?;
    if !(base_covolume > 0.0) {
        return Err(Error::OutOfRange("base covolume must be positive".into()));
    }
    let mut used: Vec<PrimeIdealData> = Vec::new();
    let mut out: Vec<ClosedLevel> = Vec::new();
    let mut log_prev = 0.0;
    for j in 1..=levels {
        let l = cutoff * j as f64;
        let inv = enumerate_geodesics(ctx, depth, l)?;
        if inv.product_of_norms < 2u32.into() {
            return Err(Error::NoObstruction(format!(
                "no loxodromic of length <= {l} within depth {depth}"
            )));
        }
        let (prime, surj, rejected) = pick_prime(ctx, &inv, &used, exps, log_prev)?;
        let members = inventory_members(&inv, &prime)?;
        used.push(prime);
        let ideal = SquareFreeIdeal::new(used.clone())?;
        let norms: Vec<u128> = used.iter().map(|q| q.norm()).collect();
        let log_new = (prime.norm() as f64).ln();
        let chain = chaining_check(exps, log_prev, log_new);

        let mut cert = certificate_from_norms(CongruenceKind::Hecke1, &norms, 1, base_covolume, epsilon)?;
        // systole > l relative to depth k, so the injectivity radius is at least l/2
        let (r, genus_from_radius, _, ball) = super::certificate::radius_chain(l.cosh());
        cert.ideal = Some(ideal.clone());
        cert.ideal_label = ideal.to_string();
        cert.cosh_bound = l.cosh();
        cert.inj_radius_lb = r;
        cert.inj_radius_log_form = None;
        cert.genus_from_radius = genus_from_radius;
        cert.genus_lb = (l / 2.0).exp() / 4.0;
        cert.ball_volume_lb = ball;
        cert.exponent_claim = ExponentClaim::compare(
            "e^(l/2)/4 >= (N(P_new)^2 / 2)^a",
            exps.a,
            cert.genus_lb.ln(),
            exps.a * (2.0 * log_new - std::f64::consts::LN_2),
        );
        cert.volume_claim = None;
        cert.depth_semantics = Some(DepthSemantics { depth, cutoff: l });
        cert.surjectivity = surj;
        cert.ceiling = super::certificate::CeilingCheck::new(cert.genus_lb, cert.log_covolume);
        cert.passed = cert.exponent_claim.holds && chain.holds && members.is_empty();
        cert.notes.push(format!("systole bound is relative to words of length <= {depth}"));

        out.push(ClosedLevel {
            level: TowerLevel {
                level_index: j,
                cumulative_ideal: ideal,
                new_prime: prime,
                certificate: cert,
                chaining: Some(chain),
            },
            depth,
            cutoff: l,
            inventory_size: inv.count(),
            rejected_split_primes: rejected,
            members_in_new_prime: members,
        });
        log_prev += log_new;
    }
    let pipeline_ok = out
        .iter()
        .all(|l| l.members_in_new_prime.is_empty() && l.level.chaining.as_ref().map_or(false, |c| c.holds));
    let passed = pipeline_ok && out.iter().all(|l| l.level.certificate.passed);
    Ok(ClosedTower { epsilon, exponents: exps, depth, cutoff, levels: out, pipeline_ok, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::Mat2;
    use crate::quadfield::FieldSpec;

    fn figure_eight() -> GroupContext {
        let q = FieldSpec::eisenstein();
        let gens = ["[[1,1],[0,1]]", "[[1,0],[-w,1]]"];
        GroupContext::new(q, gens.iter().map(|s| Mat2::parse(q, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn exponent_ranges() {
        let ctx = figure_eight();
        assert!(closed_exponents(&ctx, 0.1).is_ok());
        assert!(closed_exponents(&ctx, 0.125).is_err());
        assert!(closed_exponents(&ctx, 0.25).is_err());
        let arith = ctx.with_geodesic_count_exponent(1.0).unwrap();
        let e = closed_exponents(&arith, 0.2).unwrap();
        assert!(e.arithmetic && (e.a - 0.15).abs() < 1e-15);
    }

    #[test]
    fn chaining_threshold_is_sharp() {
        let e = ClosedExponents { a: 0.075, b: 0.025, arithmetic: false };
        let c = chaining_check(e, 10.0, 0.0);
        assert!(chaining_check(e, 10.0, c.required_log_norm + 1e-9).holds);
        assert!(!chaining_check(e, 10.0, c.required_log_norm - 1e-6).holds);
    }

    #[test]
    fn two_levels() {
        let t = build_tower_closed(&figure_eight(), 0.1, 5, 2.0, 2, 2.0298832).unwrap();
        assert_eq!(t.levels.len(), 2);
        assert!(t.pipeline_ok);
        let (a, b) = (&t.levels[0].level, &t.levels[1].level);
        assert!(b.certificate.index_upper_bound > a.certificate.index_upper_bound);
        assert!(b.certificate.inj_radius_lb > a.certificate.inj_radius_lb);
        assert_eq!(b.certificate.depth_semantics, Some(DepthSemantics { depth: 5, cutoff: 4.0 }));
    }
}
