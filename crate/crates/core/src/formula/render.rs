use super::Formula;

// Binding strength, loosest first. Mirrors the parser's grammar levels.
const IFF: u8 = 0;
const IMP: u8 = 1;
const CORNER: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;

/// Core syntax: only `false`, `~`, `&`, `[a]` and `|>` appear.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    Printer { sugar: false }.write(f, IFF, &mut out);
    out
}

/// Like [`render`] but folds recognizable sugar (`true`, `|`, `->`, `<->`,
/// `<a>`, `E`, `A`, `box`, `dia`) back into its surface form. The output
/// parses back to the same formula.
pub fn render_pretty(f: &Formula) -> String {
    let mut out = String::new();
    Printer { sugar: true }.write(f, IFF, &mut out);
    out
}

enum View<'a> {
    Atom(&'a str),
    False,
    True,
    Not(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Iff(&'a Formula, &'a Formula),
    Cond(&'a Formula, &'a Formula),
    Dual(&'a Formula, &'a Formula),
    Exists(&'a Formula),
    Forall(&'a Formula),
    Box(&'a Formula),
    Dia(&'a Formula),
    Corner(&'a Formula, &'a Formula),
}

impl View<'_> {
    fn level(&self) -> u8 {
        match self {
            View::Iff(..) => IFF,
            View::Implies(..) => IMP,
            View::Corner(..) => CORNER,
            View::Or(..) => OR,
            View::And(..) => AND,
            _ => PREFIX,
        }
    }
}

fn is_top(f: &Formula) -> bool {
    matches!(f, Formula::Not(g) if **g == Formula::Falsum)
}

/// `~[a] ~true`, the expansion of `E a`.
fn as_exists(f: &Formula) -> Option<&Formula> {
    match f.as_not()? {
        Formula::Cond(a, b) if b.as_not().is_some_and(is_top) => Some(a),
        _ => None,
    }
}

/// `~(~p |> false)`, the V-dialect expansion of `E p` (inner is `~~p`).
fn as_v_exists(f: &Formula) -> Option<&Formula> {
    as_v_forall(f.as_not()?)?.as_not()
}

/// `~p |> false`, the V-dialect expansion of `A p`.
fn as_v_forall(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Corner(a, b) if **b == Formula::Falsum => a.as_not(),
        _ => None,
    }
}

struct Printer {
    sugar: bool,
}

impl Printer {
    fn view<'a>(&self, f: &'a Formula) -> View<'a> {
        if self.sugar {
            if is_top(f) {
                return View::True;
            }
            if let Some(a) = as_exists(f) {
                return View::Exists(a);
            }
            if let Some(inner) = f.as_not() {
                if let Some(a) = as_exists(inner) {
                    if let Some(a) = a.as_not() {
                        return View::Forall(a);
                    }
                }
            }
            if let Some(a) = as_v_exists(f) {
                return View::Exists(a);
            }
            if let Some(a) = as_v_forall(f) {
                return View::Forall(a);
            }
            if let Some((a, b)) = f.as_iff() {
                return View::Iff(a, b);
            }
            // `~(x & ~y)` reads as both `x -> y` and, when x is a negation, as a
            // disjunction; only use `|` if x would print as a plain `~`.
            if let Some((a, b)) = f.as_implies() {
                if !matches!(self.view(a), View::Not(_)) {
                    return View::Implies(a, b);
                }
            }
            if let Some((a, b)) = f.as_or() {
                return View::Or(a, b);
            }
            if let Some((a, b)) = f.as_implies() {
                return View::Implies(a, b);
            }
            if let Some(Formula::Cond(a, b)) = f.as_not() {
                if let Some(body) = b.as_not() {
                    return if is_top(a) { View::Dia(body) } else { View::Dual(a, body) };
                }
            }
            if let Formula::Cond(a, b) = f {
                if is_top(a) {
                    return View::Box(b);
                }
            }
        }
        match f {
            Formula::Atom(p) => View::Atom(p),
            Formula::Falsum => View::False,
            Formula::Not(g) => View::Not(g),
            Formula::And(a, b) => View::And(a, b),
            Formula::Cond(a, b) => View::Cond(a, b),
            Formula::Corner(a, b) => View::Corner(a, b),
        }
    }

    fn write(&self, f: &Formula, min_level: u8, out: &mut String) {
        let v = self.view(f);
        let paren = v.level() < min_level;
        if paren {
            out.push('(');
        }
        match v {
            View::Atom(p) => out.push_str(p),
            View::False => out.push_str("false"),
            View::True => out.push_str("true"),
            View::Not(g) => {
                out.push('~');
                self.write(g, PREFIX, out);
            }
            View::And(a, b) => self.binary(a, " & ", b, AND, PREFIX, out),
            View::Or(a, b) => self.binary(a, " | ", b, OR, AND, out),
            View::Implies(a, b) => self.binary(a, " -> ", b, CORNER, IMP, out),
            View::Iff(a, b) => self.binary(a, " <-> ", b, IMP, IMP, out),
            View::Corner(a, b) => self.binary(a, " |> ", b, OR, CORNER, out),
            View::Cond(a, b) => self.modal("[", a, "] ", b, out),
            View::Dual(a, b) => self.modal("<", a, "> ", b, out),
            View::Exists(a) => self.unary("E ", a, out),
            View::Forall(a) => self.unary("A ", a, out),
            View::Box(a) => self.unary("box ", a, out),
            View::Dia(a) => self.unary("dia ", a, out),
        }
        if paren {
            out.push(')');
        }
    }

    fn binary(&self, a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
        self.write(a, left, out);
        out.push_str(op);
        self.write(b, right, out);
    }

    fn modal(&self, open: &str, a: &Formula, close: &str, body: &Formula, out: &mut String) {
        out.push_str(open);
        self.write(a, IFF, out);
        out.push_str(close);
        self.write(body, PREFIX, out);
    }

    fn unary(&self, op: &str, a: &Formula, out: &mut String) {
        out.push_str(op);
        self.write(a, PREFIX, out);
    }
}
