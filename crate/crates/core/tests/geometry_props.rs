use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use congruence_tower::geometry::{
    arccosh_half, ball_volume, classify, cosh_distance, genus_lower_bound, mobius_action, orbit_cosh_distance,
    orbit_cosh_distance_general, translation_length, IsometryClass, UpperHalfPoint,
};

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

fn sl2() -> impl Strategy<Value = [Complex64; 4]> {
    (complex(3.0), complex(3.0), complex(3.0))
        .prop_filter("a away from 0", |(a, _, _)| a.norm() > 0.2)
        .prop_map(|(a, b, c)| [a, b, c, (Complex64::new(1.0, 0.0) + b * c) / a])
}

fn point() -> impl Strategy<Value = UpperHalfPoint> {
    (complex(2.0), 0.1f64..3.0).prop_map(|(z, t)| UpperHalfPoint::new(z, t).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #[test]
    fn distance_is_a_symmetric_invariant(m in sl2(), p in point(), q in point()) {
        let d = cosh_distance(&p, &q);
        prop_assert!(d >= 1.0 - 1e-12);
        prop_assert!(rel(d, cosh_distance(&q, &p)) < 1e-12);
        let (mp, mq) = (mobius_action(&m, &p), mobius_action(&m, &q));
        prop_assert!(rel(cosh_distance(&mp, &mq), d) < 1e-8);
    }

    #[test]
    fn axis_formula_matches_general(m in sl2(), t in 0.1f64..3.0) {
        let p = UpperHalfPoint::on_axis(t).unwrap();
        prop_assert!(rel(orbit_cosh_distance(&m, t), orbit_cosh_distance_general(&m, &p)) < 1e-12);
    }

    #[test]
    fn complex_length_roundtrip(l in 0.01f64..6.0, theta in (-PI + 1e-6)..PI) {
        let trace = 2.0 * (Complex64::new(l, theta) / 2.0).cosh();
        let cl = translation_length(trace).unwrap();
        prop_assert!((cl.length - l).abs() < 1e-9);
        prop_assert!((cl.rotation - theta).abs() < 1e-9);
        prop_assert!((cl.trace() - trace).norm() < 1e-9 * trace.norm().max(1.0));
        prop_assert_eq!(classify(trace, Some(false)), IsometryClass::Loxodromic);
    }

    #[test]
    fn ball_volume_is_increasing(r in 0.0f64..10.0, dr in 1e-3f64..1.0) {
        prop_assert!(ball_volume(r + dr).unwrap() > ball_volume(r).unwrap());
    }

    #[test]
    fn half_arccosh_inverts_cosh(r in 0.0f64..20.0) {
        let x = 2.0 * (2.0 * r).cosh();
        prop_assert!((arccosh_half(x).unwrap() / 2.0 - r).abs() < 1e-9 * r.max(1.0));
        prop_assert!(genus_lower_bound(r) >= 0.5);
    }
}

#[test]
fn small_ball_series_is_continuous() {
    let below = ball_volume(1e-3 - 1e-12).unwrap();
    let above = ball_volume(1e-3 + 1e-12).unwrap();
    assert!(rel(below, above) < 1e-6);
    // vol ~ 4/3 π r^3 for small r
    assert!(rel(ball_volume(1e-4).unwrap(), 4.0 / 3.0 * PI * 1e-12) < 1e-6);
}
