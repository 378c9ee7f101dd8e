//! Formulas compiled to an arena and evaluated as truth sets.
//!
//! Conditionals are global (their truth does not depend on the world), so a
//! formula's truth set under a context can be computed bottom-up with a single
//! pass per conditional.  Contexts are kept as mutable stacks: a conditional
//! pushes its default, evaluates its body, and pops.

use std::collections::HashMap;

use crate::formula::{Dialect, Formula};
use crate::semantics::SemanticsError;
use crate::worlds::WorldSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum PNode {
    Atom(u16),
    False,
    Not(u32),
    And(u32, u32),
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Prop(u32),
    Not(u32),
    And(u32, u32),
    Cond(u32, u32),
}

#[derive(Debug, Clone)]
pub struct CompiledFormula {
    atoms: Vec<String>,
    pnodes: Vec<PNode>,
    nodes: Vec<Node>,
    root: u32,
}

struct Builder<'a> {
    atoms: &'a [String],
    pnodes: Vec<PNode>,
    pcache: HashMap<PNode, u32>,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn pnode(&mut self, n: PNode) -> u32 {
        if let Some(&i) = self.pcache.get(&n) {
            return i;
        }
        let i = self.pnodes.len() as u32;
        self.pnodes.push(n);
        self.pcache.insert(n, i);
        i
    }

    fn prop(&mut self, f: &Formula) -> u32 {
        let n = match f {
            Formula::Atom(p) => PNode::Atom(self.atoms.binary_search(p).expect("atom collected") as u16),
            Formula::Falsum => PNode::False,
            Formula::Not(g) => PNode::Not(self.prop(g)),
            Formula::And(a, b) => PNode::And(self.prop(a), self.prop(b)),
            _ => unreachable!("propositional subformula expected"),
        };
        self.pnode(n)
    }

    fn node(&mut self, f: &Formula) -> u32 {
        let n = if f.is_propositional() {
            Node::Prop(self.prop(f))
        } else {
            match f {
                Formula::Not(g) => Node::Not(self.node(g)),
                Formula::And(a, b) => Node::And(self.node(a), self.node(b)),
                Formula::Cond(a, b) => Node::Cond(self.prop(a), self.node(b)),
                _ => unreachable!("dialect checked"),
            }
        };
        self.nodes.push(n);
        (self.nodes.len() - 1) as u32
    }
}

/// A context that can be updated in place and restored.
pub trait StackContext {
    fn push(&mut self, d: WorldSet);
    fn pop(&mut self);
    fn expected(&self) -> WorldSet;
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> Result<Self, SemanticsError> {
        if !f.is_in_dialect(Dialect::ConWon) {
            return Err(SemanticsError::WrongDialect(crate::formula::render_pretty(f)));
        }
        let atoms: Vec<String> = f.atoms().into_iter().map(String::from).collect();
        if atoms.len() > u16::MAX as usize {
            return Err(SemanticsError::NotPropositional("too many atoms".into()));
        }
        let mut b = Builder { atoms: &atoms, pnodes: Vec::new(), pcache: HashMap::new(), nodes: Vec::new() };
        let root = b.node(f);
        let (pnodes, nodes) = (b.pnodes, b.nodes);
        Ok(CompiledFormula { atoms, pnodes, nodes, root })
    }

    /// Atoms in sorted order; valuations are indexed the same way.
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Extensions of every propositional node under `valuation`.
    pub fn prop_values(&self, valuation: &[WorldSet], universe: WorldSet) -> Vec<WorldSet> {
        let mut out = Vec::with_capacity(self.pnodes.len());
        for n in &self.pnodes {
            let v = match *n {
                PNode::Atom(i) => valuation[i as usize],
                PNode::False => WorldSet::EMPTY,
                PNode::Not(a) => universe - out[a as usize],
                PNode::And(a, b) => out[a as usize] & out[b as usize],
            };
            out.push(v);
        }
        out
    }

    /// Truth set of the whole formula.
    pub fn truth_set<C: StackContext>(&self, props: &[WorldSet], universe: WorldSet, ctx: &mut C) -> WorldSet {
        self.eval(self.root, props, universe, ctx)
    }

    fn eval<C: StackContext>(&self, n: u32, props: &[WorldSet], universe: WorldSet, ctx: &mut C) -> WorldSet {
        match self.nodes[n as usize] {
            Node::Prop(p) => props[p as usize],
            Node::Not(a) => universe - self.eval(a, props, universe, ctx),
            Node::And(a, b) => {
                let l = self.eval(a, props, universe, ctx);
                if l.is_empty() {
                    l
                } else {
                    l & self.eval(b, props, universe, ctx)
                }
            }
            Node::Cond(a, body) => {
                ctx.push(props[a as usize]);
                let e = ctx.expected();
                let ok = e.is_empty() || e.is_subset(self.eval(body, props, universe, ctx));
                ctx.pop();
                if ok {
                    universe
                } else {
                    WorldSet::EMPTY
                }
            }
        }
    }
}

/// Sequence context stored lowest priority first, so updates push onto the end.
#[derive(Debug, Clone, Default)]
pub struct SeqStack {
    rev: Vec<WorldSet>,
}

impl SeqStack {
    /// From a sequence given highest priority first.
    pub fn from_sequence(seq: &[WorldSet]) -> Self {
        let mut s = SeqStack::default();
        s.reset(seq);
        s
    }

    pub fn reset(&mut self, seq: &[WorldSet]) {
        self.rev.clear();
        self.rev.extend(seq.iter().rev());
    }
}

impl StackContext for SeqStack {
    fn push(&mut self, d: WorldSet) {
        self.rev.push(d);
    }

    fn pop(&mut self) {
        self.rev.pop();
    }

    fn expected(&self) -> WorldSet {
        let mut it = self.rev.iter().rev();
        let Some(&first) = it.next() else {
            return WorldSet::EMPTY;
        };
        let mut acc = first;
        if acc.is_empty() {
            return acc;
        }
        for &d in it {
            let next = acc & d;
            if next.is_empty() {
                break;
            }
            acc = next;
        }
        acc
    }
}

/// Set-form context over anonymous defaults, with the priority order as
/// bitmasks. `above_of[i]` holds the defaults strictly above `i`.
#[derive(Debug, Clone)]
pub struct OrderedStack {
    universe: WorldSet,
    extents: Vec<WorldSet>,
    above_of: Vec<u64>,
    alive: u64,
    history: Vec<u64>,
}

impl OrderedStack {
    /// `higher[i]` is the set of indices ranked strictly above default `i`;
    /// it must already be transitive.
    pub fn new(universe: WorldSet, extents: Vec<WorldSet>, higher: Vec<u64>) -> Self {
        assert_eq!(extents.len(), higher.len());
        assert!(extents.len() < 64);
        let alive = if extents.is_empty() { 0 } else { u64::MAX >> (64 - extents.len()) };
        OrderedStack { universe, extents, above_of: higher, alive, history: Vec::new() }
    }
}

impl StackContext for OrderedStack {
    fn push(&mut self, d: WorldSet) {
        self.history.push(self.alive);
        let t = self.extents.len();
        assert!(t < 64, "too many nested updates");
        let mut alive = self.alive;
        for i in 0..t {
            if alive >> i & 1 == 1 && self.extents[i] == d {
                alive &= !(1 << i);
            }
        }
        for i in 0..t {
            if alive >> i & 1 == 1 {
                self.above_of[i] |= 1 << t;
            }
        }
        self.extents.push(d);
        self.above_of.push(0);
        self.alive = alive | 1 << t;
    }

    fn pop(&mut self) {
        let t = self.extents.len() - 1;
        self.extents.pop();
        self.above_of.pop();
        for m in &mut self.above_of {
            *m &= !(1 << t);
        }
        self.alive = self.history.pop().expect("pop without push");
    }

    fn expected(&self) -> WorldSet {
        let mut rem = self.alive;
        if rem == 0 {
            return self.universe;
        }
        let mut acc = self.universe;
        let mut first = true;
        while rem != 0 {
            let mut level = 0u64;
            let mut inter = self.universe;
            let mut bits = rem;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.above_of[i] & rem == 0 {
                    level |= 1 << i;
                    inter &= self.extents[i];
                }
            }
            rem &= !level;
            let next = acc & inter;
            if next.is_empty() {
                return if first { WorldSet::EMPTY } else { acc };
            }
            acc = next;
            first = false;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{Context, SequenceContext};
    use crate::formula::parse_formula;
    use crate::model::Model;
    use crate::semantics::truth_set;
    use std::collections::BTreeMap;

    #[test]
    fn matches_reference_on_a_small_case() {
        let f = parse_formula("[p] q & ~[p & ~q] q | [q] [~p] p", Dialect::ConWon).unwrap();
        let c = CompiledFormula::new(&f).unwrap();
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), WorldSet::from_bits(0b011));
        val.insert("q".to_string(), WorldSet::from_bits(0b010));
        let m = Model::from_sets(3, val).unwrap();
        let seq = vec![WorldSet::from_bits(0b010), WorldSet::from_bits(0b101)];
        let ctx: Context = SequenceContext::new(seq.clone()).unwrap().into();
        let valuation: Vec<WorldSet> = c.atoms().iter().map(|a| m.atom(a)).collect();
        let props = c.prop_values(&valuation, m.universe());
        let mut stack = SeqStack::from_sequence(&seq);
        assert_eq!(c.truth_set(&props, m.universe(), &mut stack), truth_set(&m, &ctx, &f).unwrap());
    }

    #[test]
    fn ordered_stack_update() {
        let u = WorldSet::full(3);
        // D0 above D1; D0 = {w1, w2}, D1 = {w3}
        let mut s = OrderedStack::new(u, vec![WorldSet::from_bits(0b011), WorldSet::from_bits(0b100)], vec![0, 0b01]);
        assert_eq!(s.expected(), WorldSet::from_bits(0b011));
        s.push(WorldSet::from_bits(0b100));
        // D1 moved to the top, D0 now below it.
        assert_eq!(s.expected(), WorldSet::from_bits(0b100));
        s.pop();
        assert_eq!(s.expected(), WorldSet::from_bits(0b011));
        let empty = OrderedStack::new(u, vec![], vec![]);
        assert_eq!(empty.expected(), u);
    }
}
