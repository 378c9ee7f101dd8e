#![allow(dead_code)]

use proptest::prelude::*;

use conwon::formula::{self, Formula};
use conwon::WorldSet;

pub fn atom(names: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    prop::sample::select(names).prop_map(formula::atom)
}

pub fn propositional(names: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![4 => atom(names), 1 => Just(formula::falsum()), 1 => Just(formula::top())];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| formula::implies(a, b)),
        ]
    })
    .boxed()
}

/// ConWON formulas with conditional nesting up to `depth`.
pub fn conwon(names: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let ante = propositional(names, 2);
    let leaf = propositional(names, 1);
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::or(a, b)),
            (ante.clone(), inner.clone()).prop_map(|(a, b)| formula::cond(a, b)),
            (ante.clone(), inner.clone()).prop_map(|(a, b)| formula::dual(a, b)),
            ante.clone().prop_map(formula::exists),
            ante.clone().prop_map(formula::forall),
        ]
    })
    .boxed()
}

/// V formulas; antecedents may themselves be conditional.
pub fn v(names: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    propositional(names, 1)
        .prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::corner(a, b)),
                inner.prop_map(formula::v_forall),
            ]
        })
        .boxed()
}

/// Flat ConWON formula: boolean combination of propositional formulas and
/// conditionals with propositional arguments.
pub fn flat_conwon(names: &'static [&'static str]) -> BoxedStrategy<Formula> {
    let pl = propositional(names, 2);
    let cond = (pl.clone(), pl.clone()).prop_map(|(a, b)| formula::cond(a, b));
    prop_oneof![2 => cond, 1 => pl]
        .prop_recursive(2, 8, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| formula::or(a, b)),
            ]
        })
        .boxed()
}

/// A world count, a valuation of `atoms` over it, and a nonempty sequence
/// context of length at most `max_len`.
pub fn small_model(atoms: usize, max_worlds: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<WorldSet>, Vec<WorldSet>)> {
    (1..=max_worlds).prop_flat_map(move |n| {
        let set = (0u64..1 << n).prop_map(WorldSet::from_bits);
        (Just(n), prop::collection::vec(set.clone(), atoms), prop::collection::vec(set, 1..=max_len))
    })
}

pub fn model_for(f: &Formula, n: usize, val: &[WorldSet]) -> conwon::Model {
    let map = f.atoms().into_iter().map(String::from).zip(val.iter().copied()).collect();
    conwon::Model::from_sets(n, map).expect("valid model")
}
