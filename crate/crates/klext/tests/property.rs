//! Property tests over randomized inputs: classification round-trips,
//! polynomial arithmetic laws, and word/element correspondences.

use proptest::prelude::*;

use klext::alcove::{classify, dot_action, in_fundamental_closure};
use klext::coxeter::{CoxeterGroup, Word};
use klext::klpoly::IntPoly;
use klext::rootsys::{build_root_system, TypeLabel, Weight};

fn a2_group() -> CoxeterGroup {
    CoxeterGroup::affine(build_root_system(TypeLabel::A, 2).unwrap(), 3).unwrap()
}

proptest! {
    #[test]
    fn classify_round_trips(a in -20i64..=20, b in -20i64..=20) {
        let g = a2_group();
        let lam = Weight(vec![a, b]);
        let c = classify(&g, &lam).unwrap();
        prop_assert!(in_fundamental_closure(&g, &c.base));
        prop_assert_eq!(dot_action(&g, &c.rep, &c.base), lam);
        prop_assert!(g.is_min_coset_rep(&c.rep, &c.stabilizer));
        prop_assert_eq!(c.weight_length, g.length(&c.rep));
        prop_assert_eq!(c.word.len(), c.weight_length);
    }

    #[test]
    fn poly_evaluation_is_a_ring_map(
        a in proptest::collection::vec(-5i64..=5, 0..6),
        b in proptest::collection::vec(-5i64..=5, 0..6),
        x in -3i64..=3,
    ) {
        let p = IntPoly::from_coeffs(a);
        let q = IntPoly::from_coeffs(b);
        prop_assert_eq!(p.add(&q).eval(x), p.eval(x) + q.eval(x));
        prop_assert_eq!(p.sub(&q).eval(x), p.eval(x) - q.eval(x));
        prop_assert_eq!(p.mul(&q).eval(x), p.eval(x) * q.eval(x));
        prop_assert_eq!(p.shift(2).eval(x), p.eval(x) * x * x);
    }

    #[test]
    fn element_from_random_letters_round_trips(letters in proptest::collection::vec(0usize..=2, 0..10)) {
        let g = a2_group();
        let el = g.element_from_word(&Word(letters)).unwrap();
        let word = g.canonical_word(&el);
        // The canonical word is reduced and reproduces the element.
        prop_assert_eq!(word.len(), g.length(&el));
        prop_assert_eq!(g.element_from_word(&word).unwrap(), el);
        // Serialization round-trips.
        prop_assert_eq!(Word::parse(&word.serialize()).unwrap(), word);
    }

    #[test]
    fn lengths_are_subadditive(
        left in proptest::collection::vec(0usize..=2, 0..8),
        right in proptest::collection::vec(0usize..=2, 0..8),
    ) {
        let g = a2_group();
        let a = g.element_from_word(&Word(left)).unwrap();
        let b = g.element_from_word(&Word(right)).unwrap();
        let ab = g.multiply(&a, &b).unwrap();
        let (la, lb, lab) = (g.length(&a) as i64, g.length(&b) as i64, g.length(&ab) as i64);
        prop_assert!(lab <= la + lb);
        prop_assert!(lab >= (la - lb).abs());
    }
}
