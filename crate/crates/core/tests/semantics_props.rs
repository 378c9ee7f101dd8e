mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use conwon::compiled::{CompiledFormula, OrderedStack, SeqStack};
use conwon::context::{Context, SequenceContext};
use conwon::formula::{self, Formula};
use conwon::search::{
    context_profile, find_countermodel, find_countermodel_ordered, ordered_context_to_named, ordered_contexts,
    sequence_contexts, valuation, Bounds,
};
use conwon::semantics::{eval, extension, truth_set};
use conwon::WorldSet;

const ATOMS: &[&str] = &["p", "q"];

fn seq(ctx: &[WorldSet]) -> Context {
    SequenceContext::new(ctx.to_vec()).unwrap().into()
}

/// Expected state of `d ; ctx`, straight from the definition.
fn expected_after(d: WorldSet, ctx: &[WorldSet]) -> WorldSet {
    if d.is_empty() {
        return WorldSet::EMPTY;
    }
    let mut acc = d;
    for &x in ctx {
        if (acc & x).is_empty() {
            break;
        }
        acc = acc & x;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compiled_matches_reference_on_sequences(
        f in common::conwon(ATOMS, 3),
        (n, val, ctx) in common::small_model(2, 3, 4),
    ) {
        let m = common::model_for(&f, n, &val);
        let reference = truth_set(&m, &seq(&ctx), &f).unwrap();
        let cf = CompiledFormula::new(&f).unwrap();
        let own: Vec<WorldSet> = cf.atoms().iter().map(|a| m.atom(a)).collect();
        let props = cf.prop_values(&own, m.universe());
        prop_assert_eq!(cf.truth_set(&props, m.universe(), &mut SeqStack::from_sequence(&ctx)), reference);
    }

    #[test]
    fn compiled_matches_reference_on_set_form(
        f in common::conwon(ATOMS, 3),
        n in 1usize..=3,
        pick in any::<prop::sample::Index>(),
        v in any::<u64>(),
    ) {
        let contexts = ordered_contexts(n, 3);
        let (ext, higher) = &contexts[pick.index(contexts.len())];
        let cf = CompiledFormula::new(&f).unwrap();
        let k = cf.atoms().len();
        let val = valuation(v % (1 << (n * k)), k, n);
        let m = common::model_for(&f, n, &val);
        let named: Context = ordered_context_to_named(ext, higher).into();
        let reference = truth_set(&m, &named, &f).unwrap();
        let props = cf.prop_values(&val, m.universe());
        let mut stack = OrderedStack::new(m.universe(), ext.clone(), higher.clone());
        prop_assert_eq!(cf.truth_set(&props, m.universe(), &mut stack), reference);
    }

    /// Conditionals and closed formulas do not depend on the world.
    #[test]
    fn globality(
        f in common::conwon(ATOMS, 2),
        a in common::propositional(ATOMS, 2),
        (n, val, ctx) in common::small_model(2, 3, 4),
    ) {
        let g = formula::cond(a, f.clone());
        for h in [&g, &f] {
            if h.is_closed() {
                let m = common::model_for(h, n, &val);
                let t = truth_set(&m, &seq(&ctx), h).unwrap();
                prop_assert!(t.is_empty() || t == m.universe(), "{:?}", t);
            }
        }
    }

    #[test]
    fn core_invariance(
        f in common::conwon(ATOMS, 3),
        (n, val, ctx) in common::small_model(2, 3, 6),
    ) {
        let m = common::model_for(&f, n, &val);
        let c = SequenceContext::new(ctx).unwrap();
        prop_assert_eq!(
            truth_set(&m, &Context::Sequence(c.clone()), &f).unwrap(),
            truth_set(&m, &Context::Sequence(c.core()), &f).unwrap()
        );
    }

    #[test]
    fn derived_clauses_match_direct_conditions(
        a in common::propositional(ATOMS, 2),
        phi in common::propositional(ATOMS, 2),
        (n, val, ctx) in common::small_model(2, 3, 4),
    ) {
        let probe = formula::and(formula::and(a.clone(), phi.clone()), formula::atom("p"));
        let m = common::model_for(&probe, n, &val);
        let c = seq(&ctx);
        let ea = extension(&m, &a).unwrap();
        let ephi = extension(&m, &phi).unwrap();
        let after_a = expected_after(ea, &ctx);
        let after_top = expected_after(m.universe(), &ctx);
        for w in 0..n {
            prop_assert_eq!(eval(&m, &c, w, &formula::cond(a.clone(), phi.clone())).unwrap(), after_a.is_subset(ephi));
            prop_assert_eq!(eval(&m, &c, w, &formula::dual(a.clone(), phi.clone())).unwrap(), after_a.intersects(ephi));
            prop_assert_eq!(eval(&m, &c, w, &formula::boxed(phi.clone())).unwrap(), after_top.is_subset(ephi));
            prop_assert_eq!(eval(&m, &c, w, &formula::diamond(phi.clone())).unwrap(), after_top.intersects(ephi));
            prop_assert_eq!(eval(&m, &c, w, &formula::exists(a.clone())).unwrap(), !ea.is_empty());
            prop_assert_eq!(eval(&m, &c, w, &formula::forall(a.clone())).unwrap(), ea == m.universe());
        }
    }
}

/// Every context gets the same truth set as the first context with its profile.
fn check_profile_classes(f: &Formula, n: usize, max_len: usize) {
    let cf = CompiledFormula::new(f).unwrap();
    let k = cf.atoms().len();
    let universe = WorldSet::full(n);
    let contexts = sequence_contexts(n, max_len);
    let mut first: HashMap<Vec<WorldSet>, usize> = HashMap::new();
    let reps: Vec<usize> = contexts.iter().enumerate().map(|(i, c)| *first.entry(context_profile(c, n)).or_insert(i)).collect();
    for v in 0..1u64 << (n * k) {
        let props = cf.prop_values(&valuation(v, k, n), universe);
        let truth: Vec<WorldSet> = contexts.iter().map(|c| cf.truth_set(&props, universe, &mut SeqStack::from_sequence(c))).collect();
        for (i, &r) in reps.iter().enumerate() {
            assert_eq!(truth[i], truth[r], "{} on {:?} vs {:?}", formula::render_pretty(f), contexts[i], contexts[r]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equal_profiles_give_equal_truth(f in common::conwon(ATOMS, 3)) {
        check_profile_classes(&f, 2, 4);
        check_profile_classes(&f, 3, 3);
    }

    #[test]
    fn dedupe_keeps_the_first_countermodel(f in common::conwon(ATOMS, 3)) {
        for (w, len) in [(2, 4), (3, 3)] {
            let full = Bounds { dedupe: false, ..Bounds::new(w, len) };
            let fast = Bounds::new(w, len);
            prop_assert_eq!(find_countermodel(&f, &full).unwrap(), find_countermodel(&f, &fast).unwrap());
        }
    }

    /// Bounded comparison of validity over sequence and set-form contexts.
    #[test]
    fn set_form_and_sequences_agree_on_validity(f in common::conwon(ATOMS, 2)) {
        let by_seq = find_countermodel(&f, &Bounds::new(2, 4)).unwrap().is_some();
        let by_set = find_countermodel_ordered(&f, 2, 3).unwrap().is_some();
        prop_assert_eq!(by_seq, by_set, "{}", formula::render_pretty(&f));
    }
}
