mod common;

use proptest::prelude::*;

use conwon::formula::{parse_formula, render, render_pretty, translate_flat, Dialect, Formula};

const ATOMS: &[&str] = &["p", "q", "r"];

fn depth_oracle(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) | Formula::Falsum => 0,
        Formula::Not(a) => depth_oracle(a),
        Formula::And(a, b) => depth_oracle(a).max(depth_oracle(b)),
        Formula::Cond(a, b) | Formula::Corner(a, b) => 1 + depth_oracle(a).max(depth_oracle(b)),
    }
}

/// Closed formulas are conditionals closed under negation and conjunction;
/// `false` on its own is not one.
fn closed_oracle(f: &Formula) -> bool {
    let mut leaves = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Not(a) => stack.push(a),
            Formula::And(a, b) => stack.extend([&**a, &**b]),
            other => leaves.push(other),
        }
    }
    leaves.iter().all(|g| matches!(g, Formula::Cond(..) | Formula::Corner(..)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn conwon_round_trip(f in common::conwon(ATOMS, 4)) {
        for text in [render(&f), render_pretty(&f)] {
            prop_assert_eq!(parse_formula(&text, Dialect::ConWon).unwrap(), f.clone(), "{}", text);
        }
    }

    #[test]
    fn v_round_trip(f in common::v(ATOMS, 4)) {
        for text in [render(&f), render_pretty(&f)] {
            prop_assert_eq!(parse_formula(&text, Dialect::V).unwrap(), f.clone(), "{}", text);
        }
    }

    #[test]
    fn rendering_is_idempotent(f in common::conwon(ATOMS, 3)) {
        let once = render_pretty(&f);
        let twice = render_pretty(&parse_formula(&once, Dialect::ConWon).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn classification_matches_oracle(f in prop_oneof![common::conwon(ATOMS, 3), common::v(ATOMS, 3)]) {
        let c = f.classify();
        let core = render(&f);
        prop_assert_eq!(c.is_propositional, !core.contains('[') && !core.contains("|>"));
        prop_assert_eq!(c.modal_depth, depth_oracle(&f));
        prop_assert_eq!(c.is_flat, depth_oracle(&f) <= 1);
        prop_assert_eq!(c.is_closed, closed_oracle(&f));
    }

    #[test]
    fn translation_is_an_involution(f in common::flat_conwon(ATOMS)) {
        let v = translate_flat(&f, Dialect::V).unwrap();
        prop_assert!(v.is_in_dialect(Dialect::V));
        prop_assert_eq!(f.is_propositional(), v == f);
        prop_assert_eq!(translate_flat(&v, Dialect::ConWon).unwrap(), f);
    }

    #[test]
    fn nested_formulas_do_not_translate(f in common::conwon(ATOMS, 3)) {
        prop_assert_eq!(translate_flat(&f, Dialect::V).is_ok(), f.is_flat());
    }
}

#[test]
fn dialect_of_mixed_formula_is_an_error() {
    let f = conwon::formula::and(
        parse_formula("[p] q", Dialect::ConWon).unwrap(),
        parse_formula("p |> q", Dialect::V).unwrap(),
    );
    assert!(f.dialect().is_err());
    assert!(!f.is_in_dialect(Dialect::ConWon) && !f.is_in_dialect(Dialect::V));
}
