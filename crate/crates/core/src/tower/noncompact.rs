use serde::Serialize;

use super::certificate::{genus_ball_certificate, BoundCertificate, SurjectivityStatus};
use crate::congruence::{psl2_order, surjectivity_check_capped, CongruenceKind, Surjectivity, DEFAULT_CLOSURE_CAP};
use crate::error::{Error, Result};
use crate::matgroup::GroupContext;
use crate::quadfield::primes::next_prime;
use crate::quadfield::{splitting_type, PrimeIdealData, SplittingType, SquareFreeIdeal};

/// One step of a congruence tower.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerLevel {
    pub level_index: usize,
    pub cumulative_ideal: SquareFreeIdeal,
    pub new_prime: PrimeIdealData,
    pub certificate: BoundCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chaining: Option<super::closed::ChainingCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoncompactTower {
    pub epsilon: f64,
    pub base_degree: u64,
    pub base_covolume: f64,
    /// Smallest real `N` with `N^(1/4)/4 >= (d (N+1))^(1/4-ε)`.
    pub threshold_norm: f64,
    pub levels: Vec<TowerLevel>,
    pub passed: bool,
}

/// `ln(N)/4 - ln 4 - (1/4 - ε)(ln d + ln(N+1))`, increasing in `N`.
pub fn single_prime_slack(norm: f64, epsilon: f64, base_degree: u64) -> f64 {
    0.25 * norm.ln() - 4f64.ln() - (0.25 - epsilon) * ((base_degree as f64).ln() + norm.ln_1p())
}

/// Root of [`single_prime_slack`] by bisection on `ln N`.
pub fn noncompact_threshold(epsilon: f64, base_degree: u64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let f = |x: f64| single_prime_slack(x.exp(), epsilon, base_degree);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::OutOfRange(format!("no threshold found for eps = {epsilon}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.exp())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::OutOfRange(format!("eps must lie in (0, 1/4), got {epsilon}")));
    }
    Ok(())
}

/// Surjectivity of the reduction onto `PSL_2(F_q)`, or `FormulaAssumed` past the closure cap.
pub(crate) fn surjectivity_status(ctx: &GroupContext, prime: &PrimeIdealData) -> Result<SurjectivityStatus> {
    if psl2_order(prime.norm()) > DEFAULT_CLOSURE_CAP as u128 {
        return Ok(SurjectivityStatus::FormulaAssumed);
    }
    Ok(match surjectivity_check_capped(ctx, prime, DEFAULT_CLOSURE_CAP)? {
        Surjectivity::Surjective { .. } => SurjectivityStatus::Verified,
        _ => SurjectivityStatus::Failed,
    })
}

/// Greedy tower `Γ'_0(P_1) ⊃ Γ'_0(P_1 P_2) ⊃ ...` over ascending split primes
/// above the genus threshold; each level certifies
/// `genus >= (d · index)^(1/4-ε)`.
pub fn build_tower_noncompact(
    ctx: &GroupContext,
    epsilon: f64,
    levels: usize,
    base_degree: u64,
    base_covolume: f64,
) -> Result<NoncompactTower> {
    check_epsilon(epsilon)?;
    if base_degree == 0 || !(base_covolume > 0.0) {
        return Err(Error::OutOfRange("base degree and covolume must be positive".into()));
    }
    let field = ctx.field();
    let threshold = noncompact_threshold(epsilon, base_degree)?;
    if threshold > 1.8e19 {
        return Err(Error::OutOfRange(format!("threshold {threshold:e} exceeds the u64 prime range")));
    }
    let beta_norm = ctx.beta_prime().norm() as u128;
    let mut factors: Vec<PrimeIdealData> = Vec::new();
    let mut out = Vec::new();
    let mut p = next_prime(threshold.ceil() as u64);
    while out.len() < levels {
        let admissible = splitting_type(field, p)? == SplittingType::Split
            && beta_norm % p as u128 != 0
            && single_prime_slack(p as f64, epsilon, base_degree) >= 0.0;
        if !admissible {
            p = next_prime(p + 1);
            continue;
        }
        let prime = PrimeIdealData::find_split(field, p)?;
        let surj = surjectivity_status(ctx, &prime)?;
        if surj == SurjectivityStatus::Failed {
            p = next_prime(p + 1);
            continue;
        }
        factors.push(prime);
        let ideal = SquareFreeIdeal::new(factors.clone())?;
        let mut cert = genus_ball_certificate(CongruenceKind::Hecke0, &ideal, base_degree, base_covolume, epsilon)?;
        cert.surjectivity = if out.iter().any(|l: &TowerLevel| l.certificate.surjectivity == SurjectivityStatus::FormulaAssumed) {
            SurjectivityStatus::FormulaAssumed
        } else {
            surj
        };
        out.push(TowerLevel {
            level_index: out.len() + 1,
            cumulative_ideal: ideal,
            new_prime: prime,
            certificate: cert,
            chaining: None,
        });
        p = next_prime(p + 1);
    }
    let passed = out.iter().all(|l| l.certificate.passed);
    Ok(NoncompactTower {
        epsilon,
        base_degree,
        base_covolume,
        threshold_norm: threshold,
        levels: out,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::Mat2;
    use crate::quadfield::FieldSpec;

    fn picard() -> GroupContext {
        let g = FieldSpec::gaussian();
        let gens = ["[[1,1],[0,1]]", "[[1,i],[0,1]]", "[[0,-1],[1,0]]"];
        GroupContext::new(g, gens.iter().map(|s| Mat2::parse(g, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn threshold_near_four_to_the_twenty() {
        let t = noncompact_threshold(0.05, 1).unwrap();
        assert!((t / 4f64.powi(20) - 1.0).abs() < 1e-3, "{t}");
        assert!(single_prime_slack(t * 1.0001, 0.05, 1) > 0.0);
        assert!(single_prime_slack(t * 0.9999, 0.05, 1) < 0.0);
    }

    #[test]
    fn threshold_decreases_in_eps() {
        let a = noncompact_threshold(0.05, 1).unwrap();
        let b = noncompact_threshold(0.24, 1).unwrap();
        assert!(b < 1e3 && b < a);
    }

    #[test]
    fn empty_and_bad_eps() {
        assert!(build_tower_noncompact(&picard(), 0.1, 0, 1, 0.3).unwrap().levels.is_empty());
        assert!(build_tower_noncompact(&picard(), 0.25, 1, 1, 0.3).is_err());
        assert!(build_tower_noncompact(&picard(), 0.0, 1, 1, 0.3).is_err());
    }

    #[test]
    fn small_tower() {
        let t = build_tower_noncompact(&picard(), 0.24, 2, 1, 0.3053).unwrap();
        assert_eq!(t.levels.len(), 2);
        assert!(t.passed);
        assert_eq!(t.levels[0].certificate.surjectivity, SurjectivityStatus::FormulaAssumed);
        assert!(t.levels[1].cumulative_ideal.factors().len() == 2);
        let p5 = PrimeIdealData::find_split(FieldSpec::gaussian(), 5).unwrap();
        assert_eq!(surjectivity_status(&picard(), &p5).unwrap(), SurjectivityStatus::Verified);
    }
}
