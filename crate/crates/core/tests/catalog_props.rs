mod common;

use common::*;
use eqknot::catalog::{assemble, builtin, from_text, genus_one_slice, parse_expr, to_text, Spec};
use eqknot::linalg::{det, seifert_pencil};
use eqknot::ring::normalize_alexander;
use proptest::prelude::*;

fn genus_one() -> impl Strategy<Value = Spec> {
    (prop::sample::select(vec![-4i64, -3, -2, 1, 2, 3, 4]), prop::sample::select(vec![-5i64, -2, -1, 1, 2, 5]), small_rational())
        .prop_filter("c nonzero", |(_, _, c)| *c != rat(0))
        .prop_map(|(m, l, c)| Spec::Knot(genus_one_slice(m, l, &c).unwrap()))
}

fn any_spec() -> impl Strategy<Value = Spec> {
    prop_oneof![
        genus_one(),
        (1i64..=6).prop_map(|a| builtin("twist_Ka", &[rat(a)]).unwrap()),
        (1i64..=6).prop_map(|a| builtin("twist_Ka_cyclic", &[rat(a)]).unwrap()),
        (1i64..=3).prop_map(|k| builtin("pretzel", &[rat(2 * k + 1)]).unwrap()),
        (1i64..=3).prop_map(|k| builtin("twist_bb2", &[rat(2 * k)]).unwrap()),
        prop::sample::select(vec!["nine46", "figure_eight", "stevedore", "trefoil", "unknot", "swap_double(stevedore)"])
            .prop_map(|s| parse_expr(s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn builtins_validate(s in any_spec()) {
        let t = assemble(&s);
        prop_assert!(t.is_ok(), "{}: {:?}", s.name(), t.err());
    }

    #[test]
    fn module_order_is_the_alexander_polynomial(s in any_spec()) {
        let Spec::Knot(k) = &s else { return Ok(()) };
        let t = assemble(&s).unwrap();
        let delta = normalize_alexander(&det(&seifert_pencil(&k.seifert_matrix())).unwrap());
        prop_assert!(t.order().associate_of(&delta));
    }

    #[test]
    fn text_format_round_trips(a in any_spec(), b in any_spec()) {
        for s in [a.clone(), a.sum(&b).unwrap()] {
            let back = from_text(&to_text(&s)).unwrap();
            prop_assert_eq!(&back, &s);
        }
    }
}
