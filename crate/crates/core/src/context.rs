//! Contexts: prioritized systems of defaults.
//!
//! Two representations are supported. An [`OrderedDefaultSet`] is a finite
//! set of named defaults with a strict partial order (the priority relation);
//! its [`Hierarchy`] stratifies the defaults into levels of maximal elements.
//! A [`SequenceContext`] lists defaults from highest to lowest priority.
//! Both determine a set of expected worlds, and both are updated by putting a
//! new default on top.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Model, ModelError};
use crate::worlds::WorldSet;

/// Priority levels `(D_0, .., D_n)`, highest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    pub levels: Vec<BTreeSet<String>>,
}

/// How the expected set was obtained: one intersection per level (or per
/// sequence member) and the length of the longest consistent prefix used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedDetail {
    pub level_intersections: Vec<WorldSet>,
    pub prefix_len: usize,
    pub expected: WorldSet,
}

/// Longest-consistent-prefix rule shared by both representations: empty if
/// the first item is empty, otherwise the intersection of the longest
/// initial segment whose running intersection is nonempty.
fn longest_prefix(items: &[WorldSet]) -> ExpectedDetail {
    let mut detail = ExpectedDetail {
        level_intersections: items.to_vec(),
        prefix_len: 0,
        expected: WorldSet::EMPTY,
    };
    let Some((&first, rest)) = items.split_first() else {
        return detail;
    };
    detail.prefix_len = 1;
    detail.expected = first;
    if first.is_empty() {
        return detail;
    }
    for &d in rest {
        let next = detail.expected & d;
        if next.is_empty() {
            break;
        }
        detail.expected = next;
        detail.prefix_len += 1;
    }
    detail
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDefaultSet {
    defaults: BTreeMap<String, WorldSet>,
    /// `(higher, lower)` pairs; transitively closed and irreflexive.
    order: BTreeSet<(String, String)>,
}

impl OrderedDefaultSet {
    pub fn empty() -> Self {
        OrderedDefaultSet { defaults: BTreeMap::new(), order: BTreeSet::new() }
    }

    /// Build from any finite priority relation. The relation is closed
    /// transitively and rejected if the closure relates a default to itself.
    pub fn new<I>(defaults: BTreeMap<String, WorldSet>, order: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut pairs = BTreeSet::new();
        for (hi, lo) in order {
            for name in [&hi, &lo] {
                if !defaults.contains_key(name) {
                    return Err(ModelError::UnknownDefault(name.clone()));
                }
            }
            pairs.insert((hi, lo));
        }
        let closed = transitive_closure(&pairs);
        if let Some((a, _)) = closed.iter().find(|(a, b)| a == b) {
            return Err(ModelError::PriorityCycle(a.clone()));
        }
        let mut seen: BTreeMap<WorldSet, &String> = BTreeMap::new();
        for (name, &ext) in &defaults {
            if let Some(prev) = seen.insert(ext, name) {
                return Err(ModelError::DuplicateExtent(prev.clone(), name.clone()));
            }
        }
        Ok(OrderedDefaultSet { defaults, order: closed })
    }

    pub fn defaults(&self) -> &BTreeMap<String, WorldSet> {
        &self.defaults
    }

    pub fn order(&self) -> &BTreeSet<(String, String)> {
        &self.order
    }

    pub fn is_above(&self, hi: &str, lo: &str) -> bool {
        self.order.contains(&(hi.to_string(), lo.to_string()))
    }

    pub fn validate(&self, model: &Model) -> Result<(), ModelError> {
        let universe = model.universe();
        match self.defaults.iter().find(|(_, s)| !s.is_subset(universe)) {
            Some((name, _)) => Err(ModelError::OutOfRange(format!("default '{name}'"))),
            None => Ok(()),
        }
    }

    /// Repeatedly peel off the maximal elements of what remains.
    pub fn hierarchy(&self) -> Hierarchy {
        let mut remaining: BTreeSet<&String> = self.defaults.keys().collect();
        let mut levels = Vec::new();
        loop {
            let maximal: BTreeSet<String> = remaining
                .iter()
                .filter(|d| !remaining.iter().any(|e| self.order.contains(&((*e).clone(), (**d).clone()))))
                .map(|d| (*d).clone())
                .collect();
            for d in &maximal {
                remaining.remove(d);
            }
            let done = remaining.is_empty();
            levels.push(maximal);
            if done {
                break;
            }
        }
        Hierarchy { levels }
    }

    /// Intersection of each hierarchy level; an empty level contributes `W`.
    pub fn level_intersections(&self, universe: WorldSet) -> Vec<WorldSet> {
        self.hierarchy()
            .levels
            .iter()
            .map(|level| level.iter().fold(universe, |acc, d| acc & self.defaults[d]))
            .collect()
    }

    pub fn expected_detail(&self, universe: WorldSet) -> ExpectedDetail {
        longest_prefix(&self.level_intersections(universe))
    }

    pub fn expected(&self, universe: WorldSet) -> WorldSet {
        self.expected_detail(universe).expected
    }

    /// Add `extent` as the unique highest default. Defaults are identified
    /// extensionally: if one with the same extent exists it keeps its name
    /// but loses all its old priority pairs. Otherwise the new default is
    /// called `name` (primed until unique).
    pub fn update(&self, name: &str, extent: WorldSet) -> Self {
        let existing = self.defaults.iter().find(|(_, &e)| e == extent).map(|(n, _)| n.clone());
        let name = existing.unwrap_or_else(|| {
            let mut candidate = name.to_string();
            while self.defaults.contains_key(&candidate) {
                candidate.push('\'');
            }
            candidate
        });
        let mut defaults = self.defaults.clone();
        defaults.insert(name.clone(), extent);
        let mut order: BTreeSet<(String, String)> = self
            .order
            .iter()
            .filter(|(a, b)| *a != name && *b != name)
            .cloned()
            .collect();
        for other in defaults.keys() {
            if *other != name {
                order.insert((name.clone(), other.clone()));
            }
        }
        OrderedDefaultSet { defaults, order }
    }

    /// Name of the default with this extent, if any.
    pub fn name_of(&self, extent: WorldSet) -> Option<&str> {
        self.defaults.iter().find(|(_, &e)| e == extent).map(|(n, _)| n.as_str())
    }
}

fn transitive_closure(pairs: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut closed = pairs.clone();
    loop {
        let mut added = Vec::new();
        for (a, b) in &closed {
            for (c, d) in closed.range((b.clone(), String::new())..) {
                if c != b {
                    break;
                }
                if !closed.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return closed;
        }
        closed.extend(added);
    }
}

/// `(D_0, .., D_n)`, highest priority first. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceContext(Vec<WorldSet>);

impl SequenceContext {
    pub fn new(defaults: Vec<WorldSet>) -> Result<Self, ModelError> {
        if defaults.is_empty() {
            return Err(ModelError::EmptySequence);
        }
        Ok(SequenceContext(defaults))
    }

    /// The distinguished one-element context `(W)`.
    pub fn theta(universe: WorldSet) -> Self {
        SequenceContext(vec![universe])
    }

    pub fn defaults(&self) -> &[WorldSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn validate(&self, model: &Model) -> Result<(), ModelError> {
        let universe = model.universe();
        match self.0.iter().position(|s| !s.is_subset(universe)) {
            Some(i) => Err(ModelError::OutOfRange(format!("sequence member {i}"))),
            None => Ok(()),
        }
    }

    pub fn expected_detail(&self) -> ExpectedDetail {
        longest_prefix(&self.0)
    }

    pub fn expected(&self) -> WorldSet {
        self.expected_detail().expected
    }

    /// `D ; C`.
    pub fn update(&self, d: WorldSet) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(d);
        v.extend_from_slice(&self.0);
        SequenceContext(v)
    }

    /// `C1 ; C2`.
    pub fn concat(&self, other: &SequenceContext) -> Self {
        SequenceContext(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Keep only the first occurrence of each default.
    pub fn core(&self) -> Self {
        let mut seen = BTreeSet::new();
        SequenceContext(self.0.iter().copied().filter(|d| seen.insert(*d)).collect())
    }

    pub fn is_duplicate_free(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.0.iter().all(|d| seen.insert(*d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Context {
    Ordered(OrderedDefaultSet),
    Sequence(SequenceContext),
}

impl Context {
    pub fn validate(&self, model: &Model) -> Result<(), ModelError> {
        match self {
            Context::Ordered(c) => c.validate(model),
            Context::Sequence(c) => c.validate(model),
        }
    }

    pub fn expected(&self, universe: WorldSet) -> WorldSet {
        self.expected_detail(universe).expected
    }

    pub fn expected_detail(&self, universe: WorldSet) -> ExpectedDetail {
        match self {
            Context::Ordered(c) => c.expected_detail(universe),
            Context::Sequence(c) => c.expected_detail(),
        }
    }

    /// Put `extent` on top; `label` names it in the set representation.
    pub fn update(&self, label: &str, extent: WorldSet) -> Self {
        match self {
            Context::Ordered(c) => Context::Ordered(c.update(label, extent)),
            Context::Sequence(c) => Context::Sequence(c.update(extent)),
        }
    }

    pub fn hierarchy(&self) -> Option<Hierarchy> {
        match self {
            Context::Ordered(c) => Some(c.hierarchy()),
            Context::Sequence(_) => None,
        }
    }
}

impl From<OrderedDefaultSet> for Context {
    fn from(c: OrderedDefaultSet) -> Self {
        Context::Ordered(c)
    }
}

impl From<SequenceContext> for Context {
    fn from(c: SequenceContext) -> Self {
        Context::Sequence(c)
    }
}
