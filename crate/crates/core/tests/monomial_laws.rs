use std::cmp::Ordering;
use std::sync::Arc;

use proptest::prelude::*;

use mixmult_core::monomial::{term_compare, Monomial, TermOrder};

fn mono() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..5, 3).prop_map(Monomial::new)
}

fn order() -> impl Strategy<Value = TermOrder> {
    prop_oneof![
        Just(TermOrder::GrevLex),
        Just(TermOrder::WeightedGrevLex(Arc::from(vec![1u32, 2, 3]))),
        (1usize..3).prop_map(|block| TermOrder::Elimination { block }),
    ]
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_associative(a in mono(), b in mono(), c in mono()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
    }

    #[test]
    fn product_is_divisible_with_quotient(a in mono(), b in mono()) {
        let ab = a.mul(&b);
        prop_assert!(a.divides(&ab));
        prop_assert_eq!(a.quotient_of(&ab), Some(b));
    }

    #[test]
    fn orders_are_total_multiplicative_and_start_at_one(o in order(), a in mono(), b in mono(), c in mono()) {
        let ab = term_compare(&a, &b, &o).unwrap();
        prop_assert_eq!(ab, term_compare(&b, &a, &o).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let bc = term_compare(&b, &c, &o).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(term_compare(&a, &c, &o).unwrap(), Ordering::Greater);
        }
        prop_assert_eq!(term_compare(&a.mul(&c), &b.mul(&c), &o).unwrap(), ab);
        prop_assert_ne!(term_compare(&Monomial::one(3), &a, &o).unwrap(), Ordering::Greater);
    }
}

#[test]
fn mismatched_lengths_are_rejected() {
    let a = Monomial::new([1, 0]);
    let b = Monomial::new([1, 0, 0]);
    assert!(a.multiply(&b).is_err());
    assert!(term_compare(&a, &b, &TermOrder::GrevLex).is_err());
}
