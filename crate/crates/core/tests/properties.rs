//! Property tests for the algebraic invariants: ring axioms in every
//! concrete ring, canonical print/parse round trips, multiply-back laws for
//! the exact divisions, and the category laws of polynomial map composition.

use proptest::prelude::*;

use diffcalc::parse::{parse_element, parse_ring};
use diffcalc::polymap::{Poly, PolyMap};
use diffcalc::rings::Ring;
use diffcalc::sampling::{random_element, random_poly, random_poly_map, random_point, Rng};

fn test_rings() -> Vec<Ring> {
    vec![
        Ring::rationals(),
        Ring::integers_mod(2).unwrap(),
        Ring::integers_mod(6).unwrap(),
        Ring::integers_mod(7).unwrap(),
        parse_ring("Q[t]").unwrap(),
        parse_ring("Z/4[a,b]").unwrap(),
    ]
}

proptest! {
    #[test]
    fn ring_axioms_hold(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        for ring in test_rings() {
            let a = random_element(&mut rng, &ring, 9);
            let b = random_element(&mut rng, &ring, 9);
            let c = random_element(&mut rng, &ring, 9);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&ring.one() * &a, a.clone());
            prop_assert_eq!(&a - &b, &a + &(-&b));
        }
    }

    #[test]
    fn inverses_multiply_to_one(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        for ring in test_rings() {
            let a = random_element(&mut rng, &ring, 9);
            if let Some(inv) = a.invert() {
                prop_assert!((&a * &inv).is_one());
            }
        }
    }

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        for ring in test_rings() {
            let a = random_element(&mut rng, &ring, 9);
            let printed = a.to_string();
            let reparsed = parse_element(&ring, &printed);
            prop_assert_eq!(reparsed.as_ref().ok(), Some(&a), "printed form {}", printed);
        }
    }

    #[test]
    fn exact_division_multiplies_back(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        for coeff in [Ring::rationals(), Ring::integers_mod(6).unwrap()] {
            let ring = Ring::polynomial(&coeff, &["u", "w", "z"]).unwrap();
            let p = random_poly(&mut rng, &ring, 4, 4);
            let u = Poly::var(&ring, "u").unwrap();
            // Force divisibility by multiplying in the variable.
            let multiple = p.mul(&u);
            let quotient = multiple.exact_divide("u").expect("constructed to divide");
            prop_assert_eq!(quotient.mul(&u), multiple);

            // Division by a difference of variables, via the same trick.
            let w = Poly::var(&ring, "w").unwrap();
            let diff = u.sub(&w);
            let multiple = p.mul(&diff);
            let quotient = multiple
                .exact_divide_diff("u", "w")
                .expect("constructed to divide");
            prop_assert_eq!(quotient.mul(&diff), multiple);
        }
    }

    #[test]
    fn division_verdict_matches_the_contract(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let ring = Ring::polynomial(&Ring::rationals(), &["u", "w"]).unwrap();
        let p = random_poly(&mut rng, &ring, 3, 3).add(&Poly::one(&ring).unwrap());
        let u = Poly::var(&ring, "u").unwrap();
        let w = Poly::var(&ring, "w").unwrap();
        // Division by a variable succeeds exactly when the polynomial
        // vanishes at u = 0, and then multiplies back.
        let mut at_zero = std::collections::BTreeMap::new();
        at_zero.insert("u".to_string(), Poly::zero(&ring).unwrap());
        match p.exact_divide("u") {
            Some(q) => {
                prop_assert_eq!(q.mul(&u), p.clone());
                prop_assert!(p.substitute(&at_zero).unwrap().is_zero());
            }
            None => prop_assert!(!p.substitute(&at_zero).unwrap().is_zero()),
        }
        // Division by u - w succeeds exactly when the polynomial vanishes on
        // the diagonal u = w.
        let mut diagonal = std::collections::BTreeMap::new();
        diagonal.insert("u".to_string(), w.clone());
        match p.exact_divide_diff("u", "w") {
            Some(q) => {
                prop_assert_eq!(q.mul(&u.sub(&w)), p.clone());
                prop_assert!(p.substitute(&diagonal).unwrap().is_zero());
            }
            None => prop_assert!(!p.substitute(&diagonal).unwrap().is_zero()),
        }
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let q = Ring::rationals();
        let m = rng.int_in(1, 3) as usize;
        let n = rng.int_in(1, 3) as usize;
        let p = rng.int_in(1, 2) as usize;
        let f = random_poly_map(&mut rng, &q, m, n, 3, 2);
        let g = random_poly_map(&mut rng, &q, n, p, 3, 2);
        let h = random_poly_map(&mut rng, &q, p, 2, 2, 2);
        let left = h.compose(&g.compose(&f).unwrap()).unwrap();
        let right = h.compose(&g).unwrap().compose(&f).unwrap();
        prop_assert_eq!(left, right);
        let id = PolyMap::identity(f.ring()).unwrap();
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
    }

    #[test]
    fn evaluation_commutes_with_composition(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        for ring in [Ring::rationals(), Ring::integers_mod(5).unwrap()] {
            let m = rng.int_in(1, 3) as usize;
            let n = rng.int_in(1, 2) as usize;
            let f = random_poly_map(&mut rng, &ring, m, n, 3, 2);
            let g = random_poly_map(&mut rng, &ring, n, 2, 3, 2);
            let gf = g.compose(&f).unwrap();
            for _ in 0..20 {
                let point = random_point(&mut rng, &ring, m, 6);
                let direct = gf.evaluate(&point).unwrap();
                let staged = g.evaluate(&f.evaluate(&point).unwrap()).unwrap();
                prop_assert_eq!(&direct, &staged);
            }
        }
    }
}
