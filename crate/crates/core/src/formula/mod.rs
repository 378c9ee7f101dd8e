//! Formula syntax for the two dialects.
//!
//! Both dialects share the boolean core (atoms, `false`, `~`, `&`). The
//! ConWON dialect adds the conditional box `[a] f`, whose antecedent must be
//! propositional; the V dialect adds Lewis's conditional `f |> g`. Every other
//! connective is sugar and is expanded by the parser, so downstream code only
//! ever sees the variants of [`Formula`].

mod parser;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::parse_formula;
pub use render::{render, render_pretty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    #[serde(rename = "conwon")]
    ConWon,
    V,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dialect::ConWon => f.write_str("conwon"),
            Dialect::V => f.write_str("v"),
        }
    }
}

impl std::str::FromStr for Dialect {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "conwon" => Ok(Dialect::ConWon),
            "v" | "V" => Ok(Dialect::V),
            other => Err(format!("unknown dialect '{other}' (expected conwon or v)")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(String),
    Falsum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `[antecedent] consequent`
    Cond(Box<Formula>, Box<Formula>),
    /// `left |> right`
    Corner(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at column {column}: {message}")]
    Syntax {
        offset: usize,
        column: usize,
        message: String,
    },
    #[error("column {column}: conditional antecedent must be propositional")]
    NonPropositionalAntecedent { offset: usize, column: usize },
    #[error("column {column}: argument of '{operator}' must be propositional")]
    NonPropositionalArgument {
        offset: usize,
        column: usize,
        operator: String,
    },
    #[error("column {column}: '{token}' is not available in the {dialect} dialect")]
    DialectMismatch {
        offset: usize,
        column: usize,
        token: String,
        dialect: Dialect,
    },
    #[error("formula is not flat (nested conditionals): {0}")]
    NotFlat(String),
    #[error("formula mixes [a] and |> conditionals")]
    MixedDialect,
}

impl FormulaError {
    /// Byte offset into the source text, when the error came from parsing.
    pub fn offset(&self) -> Option<usize> {
        match self {
            FormulaError::Syntax { offset, .. }
            | FormulaError::NonPropositionalAntecedent { offset, .. }
            | FormulaError::NonPropositionalArgument { offset, .. }
            | FormulaError::DialectMismatch { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

/// Syntactic profile of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_propositional: bool,
    pub is_closed: bool,
    pub is_flat: bool,
    pub modal_depth: usize,
}

// Constructors. Sugar is expanded here and nowhere else.

pub fn atom(name: impl Into<String>) -> Formula {
    Formula::Atom(name.into())
}

pub fn falsum() -> Formula {
    Formula::Falsum
}

pub fn top() -> Formula {
    not(Formula::Falsum)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    not(and(not(a), not(b)))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    not(and(a, not(b)))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

/// `[antecedent] consequent`.
pub fn cond(antecedent: Formula, consequent: Formula) -> Formula {
    Formula::Cond(Box::new(antecedent), Box::new(consequent))
}

/// `<a> f`, i.e. `~[a]~f`.
pub fn dual(antecedent: Formula, consequent: Formula) -> Formula {
    not(cond(antecedent, not(consequent)))
}

/// `box f`, i.e. `[true] f`.
pub fn boxed(f: Formula) -> Formula {
    cond(top(), f)
}

/// `dia f`, i.e. `~box ~f`.
pub fn diamond(f: Formula) -> Formula {
    not(boxed(not(f)))
}

/// `E a`, i.e. `<a> true`.
pub fn exists(a: Formula) -> Formula {
    dual(a, top())
}

/// `A a`, i.e. `~E ~a`.
pub fn forall(a: Formula) -> Formula {
    not(exists(not(a)))
}

/// `left |> right`.
pub fn corner(left: Formula, right: Formula) -> Formula {
    Formula::Corner(Box::new(left), Box::new(right))
}

/// V-dialect necessity: `~f |> false`.
pub fn v_forall(f: Formula) -> Formula {
    corner(not(f), Formula::Falsum)
}

/// V-dialect possibility: `~A ~f`.
pub fn v_exists(f: Formula) -> Formula {
    not(v_forall(not(f)))
}

/// Left-nested disjunction of a nonempty list.
pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
    items.into_iter().reduce(or)
}

/// Left-nested conjunction of a nonempty list.
pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
    items.into_iter().reduce(and)
}

impl Formula {
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Falsum => true,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(a, b) => a.is_propositional() && b.is_propositional(),
            Formula::Cond(..) | Formula::Corner(..) => false,
        }
    }

    /// Maximal nesting of conditionals.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Falsum => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Cond(a, b) | Formula::Corner(a, b) => 1 + a.modal_depth().max(b.modal_depth()),
        }
    }

    /// Boolean combination of conditionals: `c ::= [a]f | ~c | c & c`.
    pub fn is_closed(&self) -> bool {
        match self {
            Formula::Cond(..) | Formula::Corner(..) => true,
            Formula::Not(f) => f.is_closed(),
            Formula::And(a, b) => a.is_closed() && b.is_closed(),
            Formula::Atom(_) | Formula::Falsum => false,
        }
    }

    pub fn is_flat(&self) -> bool {
        self.modal_depth() <= 1
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_propositional: self.is_propositional(),
            is_closed: self.is_closed(),
            is_flat: self.is_flat(),
            modal_depth: self.modal_depth(),
        }
    }

    /// The dialect the formula's conditionals belong to; `None` for
    /// propositional formulas, which belong to both.
    pub fn dialect(&self) -> Result<Option<Dialect>, FormulaError> {
        fn walk(f: &Formula, seen: &mut Option<Dialect>) -> Result<(), FormulaError> {
            let here = match f {
                Formula::Atom(_) | Formula::Falsum => return Ok(()),
                Formula::Not(g) => return walk(g, seen),
                Formula::And(a, b) => {
                    walk(a, seen)?;
                    return walk(b, seen);
                }
                Formula::Cond(..) => Dialect::ConWon,
                Formula::Corner(..) => Dialect::V,
            };
            match seen {
                Some(d) if *d != here => return Err(FormulaError::MixedDialect),
                _ => *seen = Some(here),
            }
            if let Formula::Cond(a, b) | Formula::Corner(a, b) = f {
                walk(a, seen)?;
                walk(b, seen)?;
            }
            Ok(())
        }
        let mut seen = None;
        walk(self, &mut seen)?;
        Ok(seen)
    }

    /// Whether the formula is well formed in `dialect`: only that dialect's
    /// conditional, and (for ConWON) propositional antecedents.
    pub fn is_in_dialect(&self, dialect: Dialect) -> bool {
        match self {
            Formula::Atom(_) | Formula::Falsum => true,
            Formula::Not(f) => f.is_in_dialect(dialect),
            Formula::And(a, b) => a.is_in_dialect(dialect) && b.is_in_dialect(dialect),
            Formula::Cond(a, b) => {
                dialect == Dialect::ConWon && a.is_propositional() && b.is_in_dialect(dialect)
            }
            Formula::Corner(a, b) => {
                dialect == Dialect::V && a.is_in_dialect(dialect) && b.is_in_dialect(dialect)
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.as_str());
            }
            Formula::Falsum => {}
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Cond(a, b) | Formula::Corner(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Falsum => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Cond(a, b) | Formula::Corner(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// If this is `~f`, return `f`.
    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(f) => Some(f),
            _ => None,
        }
    }

    /// Recognize `~(~a & ~b)` as the disjunction `a | b`.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self.as_not()? {
            Formula::And(a, b) => Some((a.as_not()?, b.as_not()?)),
            _ => None,
        }
    }

    /// Recognize `~(a & ~b)` as `a -> b`.
    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self.as_not()? {
            Formula::And(a, b) => Some((a, b.as_not()?)),
            _ => None,
        }
    }

    /// Recognize `(a -> b) & (b -> a)` as `a <-> b`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r) => {
                let (a, b) = l.as_implies()?;
                let (b2, a2) = r.as_implies()?;
                (a == a2 && b == b2).then_some((a, b))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// Swap `[a] b` and `a |> b` throughout a flat formula.
pub fn translate_flat(f: &Formula, target: Dialect) -> Result<Formula, FormulaError> {
    fn go(f: &Formula, target: Dialect) -> Formula {
        match f {
            Formula::Atom(_) | Formula::Falsum => f.clone(),
            Formula::Not(g) => not(go(g, target)),
            Formula::And(a, b) => and(go(a, target), go(b, target)),
            Formula::Cond(a, b) | Formula::Corner(a, b) => match target {
                Dialect::ConWon => cond((**a).clone(), (**b).clone()),
                Dialect::V => corner((**a).clone(), (**b).clone()),
            },
        }
    }
    if !f.is_flat() {
        return Err(FormulaError::NotFlat(render(f)));
    }
    f.dialect()?;
    Ok(go(f, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        atom("p")
    }
    fn q() -> Formula {
        atom("q")
    }
    fn r() -> Formula {
        atom("r")
    }

    #[test]
    fn classify_examples() {
        let nested = cond(p(), cond(q(), r()));
        assert_eq!(
            nested.classify(),
            Classification { is_propositional: false, is_closed: true, is_flat: false, modal_depth: 2 }
        );
        let mixed = and(p(), cond(q(), r()));
        let c = mixed.classify();
        assert!(!c.is_closed && c.is_flat && c.modal_depth == 1);
        let disj = not(and(cond(p(), q()), not(cond(r(), atom("s")))));
        assert!(disj.is_closed());
        assert!(!top().is_closed());
    }

    #[test]
    fn translate_examples() {
        assert_eq!(translate_flat(&cond(p(), q()), Dialect::V).unwrap(), corner(p(), q()));
        let f = or(not(cond(and(p(), q()), r())), atom("s"));
        let expected = or(not(corner(and(p(), q()), r())), atom("s"));
        assert_eq!(translate_flat(&f, Dialect::V).unwrap(), expected);
        assert!(matches!(
            translate_flat(&cond(p(), cond(q(), r())), Dialect::V),
            Err(FormulaError::NotFlat(_))
        ));
    }

    #[test]
    fn dialect_detection() {
        assert_eq!(p().dialect().unwrap(), None);
        assert_eq!(cond(p(), q()).dialect().unwrap(), Some(Dialect::ConWon));
        assert_eq!(
            and(cond(p(), q()), corner(p(), q())).dialect(),
            Err(FormulaError::MixedDialect)
        );
        assert!(!cond(cond(p(), q()), r()).is_in_dialect(Dialect::ConWon));
    }

    #[test]
    fn sugar_recognizers() {
        assert_eq!(or(p(), q()).as_or(), Some((&p(), &q())));
        assert_eq!(implies(p(), q()).as_implies(), Some((&p(), &q())));
        assert_eq!(iff(p(), q()).as_iff(), Some((&p(), &q())));
    }
}
