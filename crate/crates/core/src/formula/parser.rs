//! Recursive-descent parser for the concrete formula syntax.
//!
//! Precedence, tightest first: prefix operators (`~`, `[a]`, `<a>`, `box`,
//! `dia`, `E`, `A`), `&` (left), `|` (left), `|>` (right, V only), `->`
//! (right), `<->` (non-associative).

use super::*;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    True,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Corner,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Box,
    Dia,
    Exists,
    Forall,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::End => "end of input".to_string(),
            other => format!("'{}'", other.text()),
        }
    }

    fn text(&self) -> &str {
        match self {
            Tok::Ident(s) => s,
            Tok::False => "false",
            Tok::True => "true",
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Corner => "|>",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Box => "box",
            Tok::Dia => "dia",
            Tok::Exists => "E",
            Tok::Forall => "A",
            Tok::End => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    offset: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let next2 = chars.get(i + 2).map(|&(_, c)| c);
        let (tok, width) = match c {
            '~' | '¬' => (Tok::Not, 1),
            '&' | '∧' => (Tok::And, 1),
            '|' if next == Some('>') => (Tok::Corner, 2),
            '|' | '∨' => (Tok::Or, 1),
            '▷' => (Tok::Corner, 1),
            '-' if next == Some('>') => (Tok::Implies, 2),
            '→' => (Tok::Implies, 1),
            '<' if next == Some('-') && next2 == Some('>') => (Tok::Iff, 3),
            '↔' => (Tok::Iff, 1),
            '<' => (Tok::LAngle, 1),
            '>' => (Tok::RAngle, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '⊥' => (Tok::False, 1),
            '⊤' => (Tok::True, 1),
            'E' => (Tok::Exists, 1),
            'A' => (Tok::Forall, 1),
            c if c.is_ascii_lowercase() => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let tok = match word.as_str() {
                    "false" => Tok::False,
                    "true" => Tok::True,
                    "box" => Tok::Box,
                    "dia" => Tok::Dia,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => {
                return Err(FormulaError::Syntax {
                    offset,
                    column,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Spanned { tok, offset, column });
        i += width;
    }
    out.push(Spanned { tok: Tok::End, offset: text.len(), column: chars.len() + 1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> FormulaError {
        let t = self.peek();
        FormulaError::Syntax { offset: t.offset, column: t.column, message }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {} but found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn require(&self, t: &Spanned, dialect: Dialect) -> Result<(), FormulaError> {
        if self.dialect == dialect {
            Ok(())
        } else {
            Err(FormulaError::DialectMismatch {
                offset: t.offset,
                column: t.column,
                token: t.tok.text().to_string(),
                dialect: self.dialect,
            })
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let left = self.implication()?;
        if self.peek().tok == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            if self.peek().tok == Tok::Iff {
                return Err(self.error_here("'<->' is not associative; add parentheses".into()));
            }
            return Ok(iff(left, right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let left = self.corner()?;
        if self.peek().tok == Tok::Implies {
            self.bump();
            let right = self.implication()?;
            return Ok(implies(left, right));
        }
        Ok(left)
    }

    fn corner(&mut self) -> Result<Formula, FormulaError> {
        let left = self.disjunction()?;
        if self.peek().tok == Tok::Corner {
            let t = self.bump();
            self.require(&t, Dialect::V)?;
            let right = self.corner()?;
            return Ok(super::corner(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            let right = self.conjunction()?;
            left = or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.prefix()?;
        while self.peek().tok == Tok::And {
            self.bump();
            let right = self.prefix()?;
            left = and(left, right);
        }
        Ok(left)
    }

    /// Parse a bracketed antecedent, checking it is propositional.
    fn antecedent(&mut self, close: Tok) -> Result<Formula, FormulaError> {
        let start = self.peek().clone();
        let a = self.iff()?;
        if !a.is_propositional() {
            return Err(FormulaError::NonPropositionalAntecedent {
                offset: start.offset,
                column: start.column,
            });
        }
        self.expect(close)?;
        Ok(a)
    }

    fn prefix(&mut self) -> Result<Formula, FormulaError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Not => {
                self.bump();
                Ok(not(self.prefix()?))
            }
            Tok::LBracket => {
                self.bump();
                self.require(&t, Dialect::ConWon)?;
                let a = self.antecedent(Tok::RBracket)?;
                Ok(cond(a, self.prefix()?))
            }
            Tok::LAngle => {
                self.bump();
                self.require(&t, Dialect::ConWon)?;
                let a = self.antecedent(Tok::RAngle)?;
                Ok(dual(a, self.prefix()?))
            }
            Tok::Box | Tok::Dia => {
                self.bump();
                self.require(&t, Dialect::ConWon)?;
                let f = self.prefix()?;
                Ok(if t.tok == Tok::Box { boxed(f) } else { diamond(f) })
            }
            Tok::Exists | Tok::Forall => {
                self.bump();
                let arg_start = self.peek().clone();
                let f = self.prefix()?;
                let is_exists = t.tok == Tok::Exists;
                match self.dialect {
                    Dialect::ConWon => {
                        if !f.is_propositional() {
                            return Err(FormulaError::NonPropositionalArgument {
                                offset: arg_start.offset,
                                column: arg_start.column,
                                operator: t.tok.text().to_string(),
                            });
                        }
                        Ok(if is_exists { exists(f) } else { forall(f) })
                    }
                    Dialect::V => Ok(if is_exists { v_exists(f) } else { v_forall(f) }),
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::False => Ok(Formula::Falsum),
            Tok::True => Ok(top()),
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(FormulaError::Syntax {
                offset: t.offset,
                column: t.column,
                message: format!("expected a formula but found {}", other.describe()),
            }),
        }
    }
}

/// Parse `text` in `dialect`, expanding all sugar into the core connectives.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, dialect };
    let f = p.iff()?;
    if p.peek().tok != Tok::End {
        return Err(p.error_here(format!("unexpected {}", p.peek().tok.describe())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conwon(s: &str) -> Formula {
        parse_formula(s, Dialect::ConWon).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(conwon("[p & ~q] r"), cond(and(atom("p"), not(atom("q"))), atom("r")));
        assert_eq!(conwon("E p"), not(cond(atom("p"), not(not(falsum())))));
        assert!(matches!(
            parse_formula("[[p]q] r", Dialect::ConWon),
            Err(FormulaError::NonPropositionalAntecedent { column: 2, .. })
        ));
    }

    #[test]
    fn precedence() {
        assert_eq!(conwon("p & q | r"), or(and(atom("p"), atom("q")), atom("r")));
        assert_eq!(conwon("p -> q -> r"), implies(atom("p"), implies(atom("q"), atom("r"))));
        assert_eq!(conwon("[p] q & r"), and(cond(atom("p"), atom("q")), atom("r")));
        assert_eq!(conwon("~[p] q"), not(cond(atom("p"), atom("q"))));
        assert_eq!(conwon("p <-> q"), iff(atom("p"), atom("q")));
        assert_eq!(conwon("⊥"), falsum());
        assert_eq!(conwon("box p"), cond(top(), atom("p")));
        assert_eq!(conwon("<p> q"), not(cond(atom("p"), not(atom("q")))));
        assert_eq!(conwon("A p"), not(exists(not(atom("p")))));
        let v = parse_formula("p & q |> r | s", Dialect::V).unwrap();
        assert_eq!(v, corner(and(atom("p"), atom("q")), or(atom("r"), atom("s"))));
        let v = parse_formula("p |> q |> r", Dialect::V).unwrap();
        assert_eq!(v, corner(atom("p"), corner(atom("q"), atom("r"))));
        assert_eq!(parse_formula("A p", Dialect::V).unwrap(), corner(not(atom("p")), falsum()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p & ", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::Syntax { column: 5, .. }), "{e:?}");
        let e = parse_formula("p |> q", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::DialectMismatch { column: 3, .. }), "{e:?}");
        let e = parse_formula("[p] q", Dialect::V).unwrap_err();
        assert!(matches!(e, FormulaError::DialectMismatch { column: 1, .. }), "{e:?}");
        let e = parse_formula("p <-> q <-> r", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::Syntax { column: 9, .. }), "{e:?}");
        let e = parse_formula("E [p] q", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::NonPropositionalArgument { column: 3, .. }), "{e:?}");
        let e = parse_formula("(p", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::Syntax { column: 3, .. }), "{e:?}");
        let e = parse_formula("P", Dialect::ConWon).unwrap_err();
        assert!(matches!(e, FormulaError::Syntax { column: 1, .. }), "{e:?}");
        assert_eq!(e.offset(), Some(0));
    }
}
