//! Truth of ConWON formulas at contextualized pointed models.
//!
//! This module is the reference evaluator: it follows the truth clauses
//! world by world and rebuilds the updated context at every conditional.
//! The enumeration code in [`crate::search`] uses the faster
//! [`crate::compiled`] evaluator, which is checked against this one.

use serde::Serialize;
use thiserror::Error;

use crate::context::{Context, ExpectedDetail, Hierarchy};
use crate::formula::{render_pretty, Dialect, Formula};
use crate::model::{Model, ModelError};
use crate::worlds::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("expected a propositional formula, got {0}")]
    NotPropositional(String),
    #[error("formula is not in the ConWON dialect: {0}")]
    WrongDialect(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `(M, C, w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualizedPointedModel {
    pub model: Model,
    pub context: Context,
    pub world: usize,
}

impl ContextualizedPointedModel {
    pub fn new(model: Model, context: Context, world: &str) -> Result<Self, SemanticsError> {
        context.validate(&model)?;
        let world = model
            .world_index(world)
            .ok_or_else(|| SemanticsError::UnknownWorld(world.to_string()))?;
        Ok(ContextualizedPointedModel { model, context, world })
    }

    pub fn eval(&self, f: &Formula) -> Result<bool, SemanticsError> {
        eval(&self.model, &self.context, self.world, f)
    }

    pub fn world_name(&self) -> &str {
        self.model.world_name(self.world)
    }
}

/// Extension of a propositional formula; no context or world involved.
pub(crate) fn prop_extension(model: &Model, f: &Formula) -> WorldSet {
    match f {
        Formula::Atom(p) => model.atom(p),
        Formula::Falsum => WorldSet::EMPTY,
        Formula::Not(g) => prop_extension(model, g).complement(model.universe()),
        Formula::And(a, b) => prop_extension(model, a) & prop_extension(model, b),
        Formula::Cond(..) | Formula::Corner(..) => unreachable!("modal formula in propositional position"),
    }
}

/// `|a|`, the default generated by `alpha`.
pub fn extension(model: &Model, alpha: &Formula) -> Result<WorldSet, SemanticsError> {
    if !alpha.is_propositional() {
        return Err(SemanticsError::NotPropositional(render_pretty(alpha)));
    }
    Ok(prop_extension(model, alpha))
}

/// Name given to `|alpha|` when it is added to a set-form context.
pub fn default_label(alpha: &Formula) -> String {
    format!("|{}|", render_pretty(alpha))
}

fn check(f: &Formula) -> Result<(), SemanticsError> {
    if f.is_in_dialect(Dialect::ConWon) {
        Ok(())
    } else {
        Err(SemanticsError::WrongDialect(render_pretty(f)))
    }
}

/// `M, C, w ⊩ f`.
pub fn eval(model: &Model, context: &Context, world: usize, f: &Formula) -> Result<bool, SemanticsError> {
    check(f)?;
    Ok(holds(model, context, world, f))
}

fn holds(model: &Model, context: &Context, world: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(p) => model.atom(p).contains(world),
        Formula::Falsum => false,
        Formula::Not(g) => !holds(model, context, world, g),
        Formula::And(a, b) => holds(model, context, world, a) && holds(model, context, world, b),
        Formula::Cond(alpha, body) => {
            let updated = context.update(&default_label(alpha), prop_extension(model, alpha));
            updated
                .expected(model.universe())
                .iter()
                .all(|u| holds(model, &updated, u, body))
        }
        Formula::Corner(..) => unreachable!("checked by eval"),
    }
}

/// Worlds of `model` where `f` holds under `context`.
pub fn truth_set(model: &Model, context: &Context, f: &Formula) -> Result<WorldSet, SemanticsError> {
    check(f)?;
    Ok((0..model.len()).filter(|&w| holds(model, context, w, f)).collect())
}

/// One visit to a conditional node during a traced evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondStep {
    /// Nesting level of the conditional (0 = outermost).
    pub depth: usize,
    pub formula: Formula,
    pub antecedent: Formula,
    /// `|antecedent|`.
    pub default: WorldSet,
    pub updated: Context,
    pub hierarchy: Option<Hierarchy>,
    pub expected: ExpectedDetail,
    /// Verdict of the consequent at each expected world, in order.
    pub verdicts: Vec<(usize, bool)>,
    pub result: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalTrace {
    pub steps: Vec<CondStep>,
}

/// Evaluate and record every conditional visited, outermost first.
pub fn eval_traced(
    model: &Model,
    context: &Context,
    world: usize,
    f: &Formula,
) -> Result<(bool, EvalTrace), SemanticsError> {
    check(f)?;
    let mut trace = EvalTrace::default();
    let v = holds_traced(model, context, world, f, 0, &mut trace);
    Ok((v, trace))
}

fn holds_traced(model: &Model, context: &Context, world: usize, f: &Formula, depth: usize, trace: &mut EvalTrace) -> bool {
    match f {
        Formula::Atom(_) | Formula::Falsum => holds(model, context, world, f),
        Formula::Not(g) => !holds_traced(model, context, world, g, depth, trace),
        Formula::And(a, b) => {
            holds_traced(model, context, world, a, depth, trace) && holds_traced(model, context, world, b, depth, trace)
        }
        Formula::Cond(alpha, body) => {
            let default = prop_extension(model, alpha);
            let updated = context.update(&default_label(alpha), default);
            let expected = updated.expected_detail(model.universe());
            let slot = trace.steps.len();
            trace.steps.push(CondStep {
                depth,
                formula: f.clone(),
                antecedent: (**alpha).clone(),
                default,
                hierarchy: updated.hierarchy(),
                updated: updated.clone(),
                expected: expected.clone(),
                verdicts: Vec::new(),
                result: false,
            });
            let mut verdicts = Vec::new();
            for u in expected.expected.iter() {
                verdicts.push((u, holds_traced(model, &updated, u, body, depth + 1, trace)));
            }
            let result = verdicts.iter().all(|&(_, v)| v);
            trace.steps[slot].verdicts = verdicts;
            trace.steps[slot].result = result;
            result
        }
        Formula::Corner(..) => unreachable!("checked by eval"),
    }
}

impl EvalTrace {
    /// Human-readable rendering, one block per conditional visit.
    pub fn render(&self, model: &Model) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let pad = "  ".repeat(step.depth);
            out.push_str(&format!("{pad}{}\n", render_pretty(&step.formula)));
            out.push_str(&format!(
                "{pad}  default |{}| = {}\n",
                render_pretty(&step.antecedent),
                model.show(step.default)
            ));
            match (&step.hierarchy, &step.updated) {
                (Some(h), Context::Ordered(_)) => {
                    let levels: Vec<String> = h
                        .levels
                        .iter()
                        .map(|l| format!("{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(", ")))
                        .collect();
                    out.push_str(&format!("{pad}  hierarchy ({})\n", levels.join(", ")));
                }
                (_, Context::Sequence(s)) => {
                    let items: Vec<String> = s.defaults().iter().map(|d| model.show(*d)).collect();
                    out.push_str(&format!("{pad}  context ({})\n", items.join(", ")));
                }
                _ => {}
            }
            let inter: Vec<String> = step.expected.level_intersections.iter().map(|d| model.show(*d)).collect();
            out.push_str(&format!("{pad}  level intersections ({})\n", inter.join(", ")));
            out.push_str(&format!(
                "{pad}  longest consistent prefix {} -> expected {}\n",
                step.expected.prefix_len,
                model.show(step.expected.expected)
            ));
            let verdicts: Vec<String> = step
                .verdicts
                .iter()
                .map(|&(u, v)| format!("{}: {}", model.world_name(u), v))
                .collect();
            out.push_str(&format!("{pad}  consequent [{}] => {}\n", verdicts.join(", "), step.result));
        }
        out
    }
}

/// Serializable summary of a trace step, for JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct CondStepSummary {
    pub depth: usize,
    pub formula: String,
    pub default: Vec<String>,
    pub hierarchy: Option<Vec<Vec<String>>>,
    pub level_intersections: Vec<Vec<String>>,
    pub prefix_len: usize,
    pub expected: Vec<String>,
    pub verdicts: Vec<(String, bool)>,
    pub result: bool,
}

impl EvalTrace {
    pub fn summaries(&self, model: &Model) -> Vec<CondStepSummary> {
        let names = |s: WorldSet| model.names(s).into_iter().map(String::from).collect::<Vec<_>>();
        self.steps
            .iter()
            .map(|s| CondStepSummary {
                depth: s.depth,
                formula: render_pretty(&s.formula),
                default: names(s.default),
                hierarchy: s
                    .hierarchy
                    .as_ref()
                    .map(|h| h.levels.iter().map(|l| l.iter().cloned().collect()).collect()),
                level_intersections: s.expected.level_intersections.iter().map(|&d| names(d)).collect(),
                prefix_len: s.expected.prefix_len,
                expected: names(s.expected.expected),
                verdicts: s.verdicts.iter().map(|&(u, v)| (model.world_name(u).to_string(), v)).collect(),
                result: s.result,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{OrderedDefaultSet, SequenceContext};
    use crate::formula::parse_formula;
    use std::collections::BTreeMap;

    fn nonmono() -> (Model, Context) {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), vec!["w1", "w2"]);
        val.insert("q".to_string(), vec!["w2"]);
        let m = Model::new(["w1", "w2"], val).unwrap();
        let c = OrderedDefaultSet::new([("D".to_string(), WorldSet::singleton(1))].into(), []).unwrap();
        (m, c.into())
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, Dialect::ConWon).unwrap()
    }

    #[test]
    fn non_monotonicity_fixture() {
        let (m, c) = nonmono();
        assert!(eval(&m, &c, 0, &f("[p] q")).unwrap());
        assert!(!eval(&m, &c, 0, &f("[p & ~q] q")).unwrap());
    }

    #[test]
    fn extension_rejects_modal() {
        let (m, _) = nonmono();
        assert_eq!(extension(&m, &falsum_f()).unwrap(), WorldSet::EMPTY);
        assert!(matches!(extension(&m, &f("[p] q")), Err(SemanticsError::NotPropositional(_))));
    }

    fn falsum_f() -> Formula {
        Formula::Falsum
    }

    #[test]
    fn wrong_dialect_is_rejected() {
        let (m, c) = nonmono();
        let v = parse_formula("p |> q", Dialect::V).unwrap();
        assert!(matches!(eval(&m, &c, 0, &v), Err(SemanticsError::WrongDialect(_))));
    }

    #[test]
    fn derived_clauses() {
        let (m, _) = nonmono();
        let c: Context = SequenceContext::new(vec![WorldSet::singleton(1)]).unwrap().into();
        // E a holds iff |a| is nonempty; A a iff |a| = W.
        assert!(eval(&m, &c, 0, &f("E (p & ~q)")).unwrap());
        assert!(!eval(&m, &c, 0, &f("E (~p)")).unwrap());
        assert!(eval(&m, &c, 0, &f("A p")).unwrap());
        assert!(!eval(&m, &c, 0, &f("A q")).unwrap());
        // box/dia quantify over e(C ∘ true) = e(W ; C) = {w2}.
        assert!(eval(&m, &c, 0, &f("box q")).unwrap());
        assert!(eval(&m, &c, 0, &f("dia q")).unwrap());
        assert!(!eval(&m, &c, 0, &f("dia ~q")).unwrap());
    }

    #[test]
    fn trace_records_each_conditional() {
        let (m, c) = nonmono();
        let (v, trace) = eval_traced(&m, &c, 0, &f("[p] [q] p")).unwrap();
        assert!(v);
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].expected.expected, WorldSet::singleton(1));
        assert_eq!(trace.steps[1].depth, 1);
        assert!(trace.render(&m).contains("expected {w2}"));
    }
}
