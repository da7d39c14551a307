mod common;

use common::*;
use eqknot::ring::{coprime_split, in_lambda, normalize_alexander, LaurentPoly, RationalFn, TorsionClass};
use proptest::prelude::*;

fn nonconstant(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    laurent(max_len).prop_filter("nonconstant", |p| p.span().is_some_and(|s| s > 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conj_is_a_ring_involution(p in laurent(5), q in laurent(5)) {
        prop_assert_eq!((&p * &q).conj(), &p.conj() * &q.conj());
        prop_assert_eq!((&p + &q).conj(), &p.conj() + &q.conj());
        prop_assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn lambda_membership_matches_zero_class(a in laurent(5), d in laurent(4)) {
        prop_assume!(!d.is_zero());
        let f = RationalFn::new(a, d).unwrap();
        prop_assert_eq!(in_lambda(&f), TorsionClass::from_fn(&f).is_zero());
    }

    #[test]
    fn membership_splits_over_coprime_denominators(p in nonconstant(5), q in nonconstant(5), a in laurent(5), b in laurent(5)) {
        prop_assume!(p.is_coprime(&q));
        let x = RationalFn::new(a, p).unwrap();
        let y = RationalFn::new(b, q).unwrap();
        prop_assert_eq!(in_lambda(&(&x + &y)), in_lambda(&x) && in_lambda(&y));
    }

    #[test]
    fn coprime_split_resums(p in nonconstant(4), q in nonconstant(4), a in laurent(6)) {
        prop_assume!(p.is_coprime(&q));
        let x = TorsionClass::new(a, &p * &q).unwrap();
        let parts = coprime_split(&x, &[p.clone(), q.clone()]).unwrap();
        prop_assert_eq!(&parts[0] + &parts[1], x);
        prop_assert!(parts[0].mul_poly(&p).is_zero());
        prop_assert!(parts[1].mul_poly(&q).is_zero());
    }

    #[test]
    fn normalization_is_a_unit_multiple(p in laurent(5)) {
        prop_assume!(!p.is_zero());
        let n = normalize_alexander(&p);
        prop_assert!(n.div_exact(&p).is_some_and(|u| u.is_unit()));
    }
}
