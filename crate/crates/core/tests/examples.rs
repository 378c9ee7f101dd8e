use std::collections::BTreeSet;

use conwon::context::Context;
use conwon::fixtures;
use conwon::formula::{parse_formula, Dialect};
use conwon::lewis_v::VModel;
use conwon::search::{find_countermodel, Bounds};
use conwon::semantics::{eval, eval_traced, extension};
use conwon::WorldSet;

fn set(m: &conwon::Model, names: &[&str]) -> WorldSet {
    m.world_set(names.iter().copied(), "test").unwrap()
}

#[test]
fn tiger() {
    let ex = fixtures::tiger();
    let w3 = ex.model.world_index("w3").unwrap();
    let a_g = parse_formula("a_g", Dialect::ConWon).unwrap();
    assert_eq!(extension(&ex.model, &a_g).unwrap(), set(&ex.model, &["w1", "w2", "w4", "w6"]));
    let (v, trace) = eval_traced(&ex.model, &ex.context, w3, &ex.formulas[0]).unwrap();
    assert!(v);
    let step = &trace.steps[0];
    let levels: Vec<BTreeSet<String>> = step.hierarchy.clone().unwrap().levels;
    let want: Vec<BTreeSet<String>> = vec![
        ["|a_g|".to_string()].into(),
        ["D2".to_string()].into(),
        ["D1".to_string(), "D3".to_string()].into(),
    ];
    assert_eq!(levels, want);
    assert_eq!(step.expected.expected, set(&ex.model, &["w1"]));
}

#[test]
fn reagan() {
    let ex = fixtures::reagan();
    let w1 = ex.model.world_index("w1").unwrap();
    let not_r = parse_formula("~r", Dialect::ConWon).unwrap();
    assert_eq!(extension(&ex.model, &not_r).unwrap(), set(&ex.model, &["w2", "w3", "w4"]));
    let (v, trace) = eval_traced(&ex.model, &ex.context, w1, &ex.formulas[0]).unwrap();
    assert!(!v);
    let expected: Vec<WorldSet> = trace.steps.iter().map(|s| s.expected.expected).collect();
    assert_eq!(expected, [set(&ex.model, &["w3"]), set(&ex.model, &["w2"])]);
}

#[test]
fn figure1_expected_states() {
    let ex = fixtures::figure1();
    assert_eq!(ex.context.expected(ex.model.universe()), set(&ex.model, &["w1", "w2"]));
}

#[test]
fn non_monotonicity() {
    let ex = fixtures::nonmono();
    assert!(eval(&ex.model, &ex.context, 0, &ex.formulas[0]).unwrap());
    assert!(!eval(&ex.model, &ex.context, 0, &ex.formulas[1]).unwrap());
}

#[test]
fn divergence_fact() {
    let m = VModel::Relational(fixtures::fact_relational());
    let f = parse_formula(fixtures::FACT_V_FORMULA, Dialect::V).unwrap();
    assert!(!m.eval(m.model().world_index("w1").unwrap(), &f).unwrap());
    let g = parse_formula(fixtures::FACT_CONWON_FORMULA, Dialect::ConWon).unwrap();
    assert!(find_countermodel(&g, &Bounds::new(3, 5)).unwrap().is_none());
}

#[test]
fn tiger_update_matches_listed_order() {
    let ex = fixtures::tiger();
    let a_g = set(&ex.model, &["w1", "w2", "w4", "w6"]);
    let Context::Ordered(c) = ex.context.update("|a_g|", a_g) else { panic!() };
    for lo in ["D1", "D2", "D3"] {
        assert!(c.is_above("|a_g|", lo));
    }
    assert!(c.is_above("D2", "D1") && c.is_above("D2", "D3"));
    assert_eq!(c.order().len(), 5);
}
