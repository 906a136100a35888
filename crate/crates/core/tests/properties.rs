//! Randomized invariants of the polynomial ring and the degree-truncation
//! map φ (exponents ≥ 3 are lowered to 2, termwise).

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use varchenko::poly::{Monomial, VariableId};
use varchenko::Poly;

fn arb_poly() -> impl Strategy<Value = Poly> {
    // Up to 6 terms over x1..x4, exponents 0..=3, coefficients -5..=5.
    prop::collection::vec(
        (
            prop::collection::vec(0u32..=3, 4),
            -5i64..=5,
        ),
        0..=6,
    )
    .prop_map(|terms| {
        let mut p = Poly::zero();
        for (exps, c) in terms {
            let m = Monomial::from_pairs(
                exps.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (VariableId(i as u32 + 1), e)),
            );
            p = p.add(&Poly::monomial(m, c.into()));
        }
        p
    })
}

fn arb_assignment() -> impl Strategy<Value = BTreeMap<VariableId, BigRational>> {
    prop::collection::vec((-9i64..=9, 1i64..=9), 4).prop_map(|vals| {
        vals.into_iter()
            .enumerate()
            .map(|(i, (num, den))| {
                (
                    VariableId(i as u32 + 1),
                    BigRational::new(num.into(), den.into()),
                )
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn addition_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn addition_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn multiplication_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn subtraction_inverts_addition(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn one_is_neutral(a in arb_poly()) {
        prop_assert_eq!(a.mul(&Poly::one()), a.clone());
        prop_assert_eq!(a.add(&Poly::zero()), a);
    }

    #[test]
    fn phi_is_idempotent(a in arb_poly()) {
        let once = a.phi();
        prop_assert_eq!(once.phi(), once);
    }

    #[test]
    fn phi_commutes_with_products(a in arb_poly(), b in arb_poly()) {
        // φ(pq) = φ(φ(p)·φ(q)): truncating early never changes the result.
        prop_assert_eq!(a.mul(&b).phi(), a.phi().mul(&b.phi()).phi());
    }

    #[test]
    fn phi_fixes_low_degrees(a in arb_poly()) {
        let low = a.phi();
        for (m, _) in low.terms() {
            for (_, e) in m.iter() {
                prop_assert!(e <= 2);
            }
        }
    }

    #[test]
    fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!b.is_zero());
        let q = a.mul(&b).try_exact_div(&b).expect("product must divide");
        prop_assert_eq!(q, a);
    }

    #[test]
    fn evaluation_is_a_ring_morphism(
        a in arb_poly(),
        b in arb_poly(),
        point in arb_assignment(),
    ) {
        let ea = a.evaluate(&point).unwrap();
        let eb = b.evaluate(&point).unwrap();
        prop_assert_eq!(a.add(&b).evaluate(&point).unwrap(), ea.clone() + eb.clone());
        prop_assert_eq!(a.mul(&b).evaluate(&point).unwrap(), ea * eb);
    }
}
