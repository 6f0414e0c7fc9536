use proptest::prelude::*;

use congruence_tower::matgroup::{enumerate_words, Letter, PslElem, Word};
use congruence_tower::presets::Preset;

fn word(generators: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..generators, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

fn preset() -> impl Strategy<Value = Preset> {
    prop::sample::select(Preset::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_axioms((p, x, y, z) in preset().prop_flat_map(|p| {
        let n = p.generator_strings().len();
        (Just(p), word(n, 8), word(n, 8), word(n, 8))
    })) {
        let ctx = p.context().unwrap();
        let [a, b, c]: [PslElem; 3] = [x, y, z].map(|w| w.evaluate(&ctx).unwrap());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
        prop_assert_eq!(a.mul(&PslElem::identity(ctx.field())), a.clone());
        // trace up to sign is a class function
        prop_assert_eq!(b.mul(&a).mul(&b.inv()).trace_pair(), a.trace_pair());
        prop_assert_eq!(PslElem::from(a.rep().neg()), a);
    }
}

#[test]
fn enumeration_is_monotone_in_depth() {
    for p in Preset::ALL {
        let ctx = p.context().unwrap();
        let small = enumerate_words(&ctx, 4).unwrap();
        let big = enumerate_words(&ctx, 5).unwrap();
        assert!(small.len() < big.len());
        for (i, g) in small.elements().enumerate() {
            let j = big.index_of(g).expect("depth 4 element missing at depth 5");
            assert_eq!(big.length(j), small.length(i));
        }
        // stored words evaluate to their elements and realise the recorded length
        for i in 0..big.len() {
            let w = big.word(i);
            assert_eq!(w.len(), big.length(i));
            assert_eq!(&w.evaluate(&ctx).unwrap(), big.elem(i));
        }
    }
}
