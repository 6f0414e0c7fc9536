use proptest::prelude::*;

use congruence_tower::congruence::CongruenceKind;
use congruence_tower::geometry::{ball_volume, genus_lower_bound};
use congruence_tower::matgroup::BoundConstants;
use congruence_tower::presets::Preset;
use congruence_tower::quadfield::primes::sieve;
use congruence_tower::quadfield::{splitting_type, FieldSpec, PrimeIdealData, SplittingType, SquareFreeIdeal};
use congruence_tower::tower::{
    build_tower_closed, certificate_from_norms, chaining_check, compute_c3, displacement_bound, single_prime_slack,
    verify_displacement, ClosedExponents,
};

fn kind() -> impl Strategy<Value = CongruenceKind> {
    prop::sample::select(CongruenceKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn certificates_are_self_consistent(
        kind in kind(),
        norms in prop::collection::vec(prop::sample::select(vec![5u128, 9, 13, 17, 29, 37, 41, 49, 53, 61, 73]), 1..4),
        d in 1u64..24,
        v0 in 0.1f64..10.0,
        eps in 0.01f64..0.24,
    ) {
        let c = certificate_from_norms(kind, &norms, d, v0, eps).unwrap();
        prop_assert!(c.consistency_error(1e-12).is_none(), "{:?}", c.consistency_error(1e-12));
        prop_assert!((c.genus_from_radius - genus_lower_bound(c.inj_radius_lb)).abs() <= 1e-12 * c.genus_from_radius);
        prop_assert!((c.ball_volume_lb - ball_volume(c.inj_radius_lb).unwrap()).abs() <= 1e-12 * c.ball_volume_lb.max(1.0));
        if c.passed {
            prop_assert!(c.exponent_claim.log_lhs >= c.exponent_claim.log_rhs || c.exponent_claim.constant.is_some());
        }
        // a volume-filling ball never exceeds the square-root ceiling
        prop_assert!(c.ceiling.within_ceiling);
    }

    #[test]
    fn c3_inequality_holds_beyond_systole(
        c1 in 1.0f64..50.0, c2 in 1.0f64..50.0, cp in 0.1f64..10.0, s in 0.05f64..3.0, k in 1.0f64..100.0,
    ) {
        let ctx = Preset::Figure8.context().unwrap().with_c_prime(cp).unwrap().with_systole(s).unwrap();
        let c3 = compute_c3(&BoundConstants { c1, c2, c3: None }, &ctx);
        prop_assert!(c3.log_margin(s * k) > 0.0);
    }

    #[test]
    fn noncompact_slack_is_increasing(n in 2.0f64..1e15, f in 1.01f64..10.0, eps in 0.01f64..0.24, d in 1u64..50) {
        prop_assert!(single_prime_slack(n * f, eps, d) > single_prime_slack(n, eps, d));
    }

    #[test]
    fn chaining_holds_above_required_norm(prev in 0.0f64..50.0, extra in 1e-6f64..10.0, eps in 0.001f64..0.124) {
        let e = ClosedExponents { a: 0.125 - eps / 2.0, b: 0.125 - eps, arithmetic: false };
        let req = chaining_check(e, prev, 0.0).required_log_norm;
        prop_assert!(chaining_check(e, prev, req + extra).holds);
    }
}

/// Every square-free ideal of odd norm at most 30 in `Z[i]`.
fn small_gaussian_ideals() -> Vec<SquareFreeIdeal> {
    let k = FieldSpec::gaussian();
    let mut primes = Vec::new();
    for p in sieve(30).into_iter().filter(|&p| p > 2) {
        match splitting_type(k, p).unwrap() {
            SplittingType::Split => {
                let q = PrimeIdealData::find_split(k, p).unwrap();
                primes.push(q);
                primes.push(q.conjugate());
            }
            _ if p * p <= 30 => primes.push(PrimeIdealData::above(k, p).unwrap()),
            _ => {}
        }
    }
    let mut out: Vec<SquareFreeIdeal> = primes.iter().map(|p| SquareFreeIdeal::prime(*p)).collect();
    for (i, p) in primes.iter().enumerate() {
        for q in &primes[i + 1..] {
            if p.norm() * q.norm() <= 30 {
                out.push(SquareFreeIdeal::new(vec![*p, *q]).unwrap());
            }
        }
    }
    out
}

/// Brute force against the analytic displacement bound for every kind and
/// every small ideal, at depth 8 on the Picard group.
#[test]
fn displacement_bound_on_small_ideals() {
    let ctx = Preset::Picard.context().unwrap();
    let mut failures = Vec::new();
    for ideal in small_gaussian_ideals() {
        for kind in CongruenceKind::ALL {
            let r = verify_displacement(&ctx, kind, &ideal, 8).unwrap();
            let bound = displacement_bound(kind, ideal.norm_f64()).cosh_bound;
            if let Some(w) = &r.min_all {
                if w.cosh_distance < bound - 1e-9 {
                    failures.push(format!("{kind} {ideal}: {} at {} < {bound}", w.cosh_distance, w.word));
                }
            }
        }
    }
    assert!(failures.is_empty(), "{} violations:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn closed_levels_are_nested_and_monotone() {
    let ctx = Preset::Figure8.context().unwrap();
    let t = build_tower_closed(&ctx, 0.1, 6, 1.5, 3, Preset::Figure8.covolume()).unwrap();
    for w in t.levels.windows(2) {
        let (a, b) = (&w[0].level, &w[1].level);
        assert!(b.cumulative_ideal.factors().starts_with(a.cumulative_ideal.factors()));
        assert!(b.certificate.index_upper_bound > a.certificate.index_upper_bound);
        assert!(b.certificate.inj_radius_lb >= a.certificate.inj_radius_lb);
    }
}
