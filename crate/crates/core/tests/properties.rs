//! Property tests for the algebraic invariants: exact field axioms,
//! serialization round-trips, and transform symmetries on arbitrary
//! sparse functions.

use std::collections::BTreeSet;

use proptest::prelude::*;

use meshulam_core::cyclotomic::CycField;
use meshulam_core::function::{GroupFunction, WireFunction};
use meshulam_core::group::parse_group;

fn cyc_value(level: u64) -> impl Strategy<Value = (i64, i64)> {
    (0..level as i64, -2i64..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(
        a in cyc_value(12), b in cyc_value(12), c in cyc_value(12)
    ) {
        let f = CycField::new(12);
        let lift = |(e, q): (i64, i64)| f.add(&f.root_of_unity(e), &f.from_integer(q));
        let (x, y, z) = (lift(a), lift(b), lift(c));
        prop_assert_eq!(f.add(&f.add(&x, &y), &z), f.add(&x, &f.add(&y, &z)));
        prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
        prop_assert_eq!(
            f.mul(&x, &f.add(&y, &z)),
            f.add(&f.mul(&x, &y), &f.mul(&x, &z))
        );
        prop_assert_eq!(f.mul(&x, &y), f.mul(&y, &x));
        // conjugation is a ring automorphism
        prop_assert_eq!(
            f.conjugate(&f.mul(&x, &y)),
            f.mul(&f.conjugate(&x), &f.conjugate(&y))
        );
    }

    #[test]
    fn inverses_cancel(a in cyc_value(9)) {
        let f = CycField::new(9);
        let x = f.add(&f.root_of_unity(a.0), &f.from_integer(a.1));
        if !x.is_zero() {
            let inv = f.inv(&x).unwrap();
            prop_assert!(f.mul(&x, &inv).is_one());
        }
    }

    #[test]
    fn wire_round_trip(values in proptest::collection::vec((0u64..10, 0..10i64, -3i64..=3), 0..6)) {
        let g = parse_group("Z2xZ5").unwrap();
        let f10 = CycField::new(10);
        let pairs: Vec<_> = values
            .into_iter()
            .map(|(idx, e, q)| {
                (
                    g.element_at(idx),
                    f10.add(&f10.root_of_unity(e), &f10.from_integer(q)),
                )
            })
            .collect();
        let f = GroupFunction::from_pairs(g, pairs).unwrap();
        let json = serde_json::to_string(&f.to_wire()).unwrap();
        let parsed: WireFunction = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(GroupFunction::from_wire(&parsed).unwrap(), f);
    }

    #[test]
    fn translation_modulation_symmetries(
        values in proptest::collection::vec((0u64..9, 0..9i64), 1..6),
        shift in 0u64..9,
        character in 0u64..9,
    ) {
        let g = parse_group("Z9").unwrap();
        let f9 = CycField::new(9);
        let pairs: Vec<_> = values
            .into_iter()
            .map(|(idx, e)| (g.element_at(idx), f9.root_of_unity(e)))
            .collect();
        let f = GroupFunction::from_pairs(g.clone(), pairs).unwrap();
        if !f.is_zero() {
            let a = g.element_at(shift);
            let y = g.element_at(character);
            // translation shifts support, preserves spectrum set
            let t = f.translate(&a);
            let expected: BTreeSet<_> = f.support().iter().map(|x| g.add(x, &a)).collect();
            prop_assert_eq!(t.support(), expected);
            prop_assert_eq!(t.spectrum(), f.spectrum());
            // modulation shifts spectrum, preserves support
            let m = f.modulate(&y);
            prop_assert_eq!(m.support(), f.support());
            let expected_spec: BTreeSet<_> =
                f.spectrum().iter().map(|x| g.add(x, &y)).collect();
            prop_assert_eq!(m.spectrum(), expected_spec);
        }
    }
}
