mod common;

use proptest::prelude::*;
use treecomp::dsl::{
    eval_value, eval_weight, parse_map, parse_spec, parse_weight, print, Scope, Value,
};
use treecomp::{Error, TreeSpec, Truncation, VertexId};

fn located(e: &Error) -> bool {
    matches!(
        e,
        Error::Eval { .. }
            | Error::NonPositiveWeight { .. }
            | Error::Address { .. }
            | Error::Budget { .. }
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn numeric_round_trip(e in common::typed_exprs().0) {
        prop_assert_eq!(parse_weight(&print(&e)).unwrap(), e);
    }

    #[test]
    fn vertex_round_trip(e in common::typed_exprs().1) {
        prop_assert_eq!(parse_map(&print(&e)).unwrap(), e);
    }

    #[test]
    fn types_are_checked_at_parse_time(n in common::typed_exprs().0, v in common::typed_exprs().1) {
        prop_assert!(parse_map(&print(&n)).is_err());
        prop_assert!(parse_weight(&print(&v)).is_err());
    }

    #[test]
    fn evaluation_is_deterministic_and_total(e in common::typed_exprs().0, m in common::typed_exprs().1) {
        let tree = TreeSpec::binary();
        let scope = Scope::new(&tree, 10_000);
        for v in Truncation::new(tree.clone(), 3).enumerate().unwrap() {
            let a = eval_weight(&e, &v, scope);
            let b = eval_weight(&e, &v, scope);
            match (&a, &b) {
                (Ok(x), Ok(y)) => {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                    prop_assert!(*x > 0.0 && x.is_finite());
                }
                (Err(x), Err(y)) => {
                    prop_assert_eq!(x.to_string(), y.to_string());
                    prop_assert!(located(x), "unlocated error {:?}", x);
                }
                _ => prop_assert!(false, "evaluations disagree at {}", v),
            }
            match eval_value(&m, &v, scope) {
                Ok(Value::Vertex(_)) => {}
                Ok(Value::Num(_)) => prop_assert!(false, "vertex expression produced a number"),
                Err(x) => prop_assert!(located(&x), "unlocated error {:?}", x),
            }
        }
    }
}

#[test]
fn malformed_inputs_are_located() {
    for m in &common::MALFORMED {
        let e = parse_spec(m.text).expect_err(m.text);
        assert_eq!((e.line, e.col), (m.line, m.col), "{:?}: {e}", m.text);
    }
}

#[test]
fn vertex_literals_are_checked_against_the_tree() {
    let tree = TreeSpec::binary();
    let ok = parse_map("\"1.0.1\"").unwrap();
    let bad = parse_map("\"1.2\"").unwrap();
    let at = VertexId::root();
    assert!(treecomp::dsl::eval_map(&ok, &at, &tree, 100).is_ok());
    assert!(matches!(
        treecomp::dsl::eval_map(&bad, &at, &tree, 100),
        Err(Error::Address { .. })
    ));
}
