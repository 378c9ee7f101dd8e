//! Translation of arbitrary ConWON formulas into the flat fragment.
//!
//! Four validities drive the translation:
//!
//! 1. `[a](x & y) <-> [a]x & [a]y`
//! 2. `[a](x | c) <-> [a]x | [a]c` for closed `c`
//! 3. `[a][b]g <-> (E a -> ((E(a & b) & [a & b]g) | (~E(a & b) & A(b -> g))))`
//! 4. `[a]<b>g <-> (E a -> ((E(a & b) & <a & b>g) | (~E(a & b) & E(b & g))))`
//!
//! with `a`, `b`, `g` propositional.  [`sigma`] works bottom-up, so every
//! conditional it rewrites has a flat body.

use thiserror::Error;

use crate::formula::{and, and_all, cond, exists, forall, implies, not, or, or_all, render_pretty, Dialect, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no reduction rule applies to {0}")]
    NoRule(String),
    #[error("formula is not in the ConWON dialect: {0}")]
    WrongDialect(String),
}

/// `(b_1 | ... | b_k) | ([g_1]l_1 | ...) | (<h_1>t_1 | ...)`, all arguments propositional.
///
/// A dual `<h>t` is kept as `(h, body)` with `t` the negation of `body`, so
/// that `~[h]body` is its core form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionalClause {
    pub pl_disjuncts: Vec<Formula>,
    pub box_disjuncts: Vec<(Formula, Formula)>,
    pub dual_disjuncts: Vec<(Formula, Formula)>,
}

impl ConditionalClause {
    fn merge(&self, other: &ConditionalClause) -> ConditionalClause {
        let mut out = self.clone();
        out.pl_disjuncts.extend(other.pl_disjuncts.iter().cloned());
        out.box_disjuncts.extend(other.box_disjuncts.iter().cloned());
        out.dual_disjuncts.extend(other.dual_disjuncts.iter().cloned());
        out
    }

    /// The clause as a formula (left-folded disjunction).
    pub fn to_formula(&self) -> Formula {
        let items = self
            .pl_disjuncts
            .iter()
            .cloned()
            .chain(self.box_disjuncts.iter().map(|(g, l)| cond(g.clone(), l.clone())))
            .chain(self.dual_disjuncts.iter().map(|(h, b)| not(cond(h.clone(), b.clone()))));
        or_all(items).unwrap_or_else(crate::formula::falsum)
    }
}

enum Nnf {
    Lit(Formula),
    Box(Formula, Formula),
    Dual(Formula, Formula),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    if f.is_propositional() {
        return Nnf::Lit(if positive { f.clone() } else { negate(f) });
    }
    match f {
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(a, b) => {
            let (l, r) = (Box::new(nnf(a, positive)), Box::new(nnf(b, positive)));
            if positive {
                Nnf::And(l, r)
            } else {
                Nnf::Or(l, r)
            }
        }
        Formula::Cond(a, b) => {
            if positive {
                Nnf::Box((**a).clone(), (**b).clone())
            } else {
                Nnf::Dual((**a).clone(), (**b).clone())
            }
        }
        _ => unreachable!("flat ConWON body expected"),
    }
}

fn cnf(n: &Nnf) -> Vec<ConditionalClause> {
    match n {
        Nnf::Lit(f) => vec![ConditionalClause { pl_disjuncts: vec![f.clone()], ..Default::default() }],
        Nnf::Box(a, b) => vec![ConditionalClause { box_disjuncts: vec![(a.clone(), b.clone())], ..Default::default() }],
        Nnf::Dual(a, b) => vec![ConditionalClause { dual_disjuncts: vec![(a.clone(), b.clone())], ..Default::default() }],
        Nnf::And(a, b) => {
            let mut out = cnf(a);
            out.extend(cnf(b));
            out
        }
        Nnf::Or(a, b) => {
            let (l, r) = (cnf(a), cnf(b));
            l.iter().flat_map(|x| r.iter().map(move |y| x.merge(y))).collect()
        }
    }
}

/// Conjunctive normal form of a depth-one body, with negations pushed
/// through conditionals as duals.
pub fn clauses(body: &Formula) -> Vec<ConditionalClause> {
    cnf(&nnf(body, true))
}

fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => (**g).clone(),
        _ => not(f.clone()),
    }
}

/// Right-hand side of validity 3 for `[alpha][beta]gamma`.
pub fn item3(alpha: &Formula, beta: &Formula, gamma: &Formula) -> Formula {
    let ab = and(alpha.clone(), beta.clone());
    implies(
        exists(alpha.clone()),
        or(
            and(exists(ab.clone()), cond(ab.clone(), gamma.clone())),
            and(not(exists(ab)), forall(implies(beta.clone(), gamma.clone()))),
        ),
    )
}

/// Right-hand side of validity 4 for `[alpha]~[beta]body`, i.e. `[alpha]<beta>~body`.
pub fn item4(alpha: &Formula, beta: &Formula, body: &Formula) -> Formula {
    let ab = and(alpha.clone(), beta.clone());
    implies(
        exists(alpha.clone()),
        or(
            and(exists(ab.clone()), not(cond(ab.clone(), body.clone()))),
            and(not(exists(ab)), exists(and(beta.clone(), negate(body)))),
        ),
    )
}

/// Apply one of the four validities, left to right, at the root of `f`.
pub fn rewrite_step(f: &Formula) -> Result<Formula, ReductionError> {
    let no_rule = || ReductionError::NoRule(render_pretty(f));
    let Formula::Cond(alpha, psi) = f else {
        return Err(no_rule());
    };
    if !alpha.is_propositional() || psi.modal_depth() > 1 {
        return Err(no_rule());
    }
    if let Some((x, c)) = psi.as_or() {
        if c.is_closed() {
            return Ok(or(cond((**alpha).clone(), x.clone()), cond((**alpha).clone(), c.clone())));
        }
    }
    match &**psi {
        Formula::And(x, y) => Ok(and(cond((**alpha).clone(), (**x).clone()), cond((**alpha).clone(), (**y).clone()))),
        Formula::Cond(b, g) if b.is_propositional() && g.is_propositional() => Ok(item3(alpha, b, g)),
        Formula::Not(inner) => match &**inner {
            Formula::Cond(b, g) if b.is_propositional() && g.is_propositional() => Ok(item4(alpha, b, g)),
            _ => Err(no_rule()),
        },
        _ => Err(no_rule()),
    }
}

/// `[alpha]body` for a depth-one `body`, reduced to a flat formula.
fn reduce_cond(alpha: &Formula, body: &Formula) -> Formula {
    let parts = clauses(body).into_iter().map(|cl| {
        let pl = or_all(cl.pl_disjuncts.iter().cloned()).map(|b| cond(alpha.clone(), b));
        let boxes = cl.box_disjuncts.iter().map(|(b, g)| item3(alpha, b, g));
        let duals = cl.dual_disjuncts.iter().map(|(b, g)| item4(alpha, b, g));
        or_all(pl.into_iter().chain(boxes).chain(duals)).expect("clauses are nonempty")
    });
    and_all(parts).expect("at least one clause")
}

/// Flat formula equivalent to `f`.
pub fn sigma(f: &Formula) -> Result<Formula, ReductionError> {
    if !f.is_in_dialect(Dialect::ConWon) {
        return Err(ReductionError::WrongDialect(render_pretty(f)));
    }
    Ok(go(f))
}

fn go(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Falsum => f.clone(),
        Formula::Not(g) => not(go(g)),
        Formula::And(a, b) => and(go(a), go(b)),
        Formula::Cond(a, b) => {
            let body = go(b);
            if body.modal_depth() == 0 {
                cond((**a).clone(), body)
            } else {
                reduce_cond(a, &body)
            }
        }
        Formula::Corner(..) => unreachable!("dialect checked"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s, Dialect::ConWon).unwrap()
    }

    #[test]
    fn single_steps() {
        assert_eq!(rewrite_step(&f("[p](q & r)")).unwrap(), f("[p]q & [p]r"));
        assert_eq!(
            rewrite_step(&f("[p][q]r")).unwrap(),
            f("E p -> ((E(p & q) & [p & q]r) | (~E(p & q) & A(q -> r)))")
        );
        assert_eq!(
            rewrite_step(&f("[p]<q>r")).unwrap(),
            f("E p -> ((E(p & q) & <p & q>r) | (~E(p & q) & E(q & r)))")
        );
        assert_eq!(rewrite_step(&f("[p](q | [r]s)")).unwrap(), f("[p]q | [p][r]s"));
        assert!(rewrite_step(&f("[p]q")).is_err());
        assert!(rewrite_step(&f("[p][q][r]s")).is_err());
    }

    #[test]
    fn sigma_flattens() {
        assert_eq!(sigma(&f("[p]q & ~[q]p")).unwrap(), f("[p]q & ~[q]p"));
        assert_eq!(sigma(&f("[p][q]r")).unwrap(), rewrite_step(&f("[p][q]r")).unwrap());
        let deep = sigma(&f("[p][q][r]s")).unwrap();
        assert!(deep.is_flat());
        assert_eq!(sigma(&f("[p][q][r]s")).unwrap(), deep);
    }

    #[test]
    fn clause_shapes() {
        let cl = clauses(&f("p | ~([q]r & p)"));
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].pl_disjuncts, vec![f("p"), f("~p")]);
        assert_eq!(cl[0].dual_disjuncts, vec![(f("q"), f("r"))]);
        let cl = clauses(&f("(p & [q]r) | s"));
        assert_eq!(cl.len(), 2);
    }
}
