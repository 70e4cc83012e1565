use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use npi_core::braid::{braid_sign, BraidSign, BraidWord};
use npi_core::orders::{BraidTarget, LexTarget, OrderedTarget};

fn braid_word(strands: usize) -> impl Strategy<Value = BraidWord> {
    let gens = strands as i32 - 1;
    prop::collection::vec((1..=gens, any::<bool>()), 0..8)
        .prop_map(|v| BraidWord(v.into_iter().map(|(g, s)| if s { g } else { -g }).collect()))
}

fn lex(dim: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec((-5i64..=5).prop_map(BigInt::from), dim)
}

fn targets() -> impl Strategy<Value = BraidTarget> {
    (3usize..=5, any::<bool>()).prop_map(|(strands, opposite)| BraidTarget { strands, opposite })
}

fn order_laws<T: OrderedTarget>(t: &T, g: &T::Element, h: &T::Element, k: &T::Element) -> Result<(), TestCaseError> {
    let gh = t.compare(g, h).unwrap();
    prop_assert_eq!(t.compare(h, g).unwrap(), gh.reverse());
    prop_assert_eq!(t.compare(g, g).unwrap(), Ordering::Equal);
    prop_assert_eq!(t.compare(&t.multiply(k, g), &t.multiply(k, h)).unwrap(), gh);
    let hk = t.compare(h, k).unwrap();
    if gh == hk && gh != Ordering::Equal {
        prop_assert_eq!(t.compare(g, k).unwrap(), gh);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn braid_order_is_left_invariant_total_order((t, g, h, k) in targets().prop_flat_map(|t| {
        let s = t.strands;
        (Just(t), braid_word(s), braid_word(s), braid_word(s))
    })) {
        order_laws(&t, &g, &h, &k)?;
    }

    #[test]
    fn braid_order_ignores_representative((t, g, h, x) in targets().prop_flat_map(|t| {
        let s = t.strands;
        (Just(t), braid_word(s), braid_word(s), braid_word(s))
    })) {
        // g and g·x·x⁻¹ are the same braid
        let g2 = g.mul(&x).mul(&x.inverse());
        prop_assert_eq!(t.compare(&g2, &h).unwrap(), t.compare(&g, &h).unwrap());
        prop_assert!(t.equal(&g, &g2).unwrap());
    }

    #[test]
    fn sign_is_exclusive(w in braid_word(4)) {
        let s = braid_sign(&w, 4).unwrap();
        let inv = braid_sign(&w.inverse(), 4).unwrap();
        let expected = match s {
            BraidSign::Positive => BraidSign::Negative,
            BraidSign::Negative => BraidSign::Positive,
            BraidSign::Trivial => BraidSign::Trivial,
        };
        prop_assert_eq!(inv, expected);
    }

    #[test]
    fn lex_order_laws(g in lex(3), h in lex(3), k in lex(3)) {
        let t = LexTarget { dim: 3 };
        order_laws(&t, &g, &h, &k)?;
        prop_assert_eq!(t.compare(&g, &h).unwrap(), g.cmp(&h));
    }
}

#[test]
fn opposite_order_puts_generators_below_identity() {
    let t = BraidTarget { strands: 4, opposite: true };
    for i in 1..=3 {
        assert_eq!(t.compare(&BraidWord::sigma(i), &t.identity()).unwrap(), Ordering::Less);
    }
    let std = BraidTarget { strands: 4, opposite: false };
    assert_eq!(std.compare(&BraidWord::sigma(2), &std.identity()).unwrap(), Ordering::Greater);
}
