//! Bounded countermodel search over small models.
//!
//! The search walks model sizes `1..=max_worlds`, then valuations of the
//! formula's atoms, then contexts, then worlds, and returns the first
//! falsifying triple in that order.
//!
//! Sequence contexts are duplicate-free sequences of subsets of `W`, ordered
//! by length and then lexicographically by bitmask.  Two contexts with the
//! same *profile* (for every nonempty `P`, the intersection of the longest
//! consistent prefix of `P ; C`) make exactly the same formulas true, since
//! every conditional evaluates `e(D_m ; ... ; D_1 ; C)` with `m >= 1`.  By
//! default only the first context of each profile class is visited, which
//! leaves the first countermodel unchanged.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compiled::{CompiledFormula, OrderedStack, SeqStack, StackContext};
use crate::context::{OrderedDefaultSet, SequenceContext};
use crate::formula::Formula;
use crate::model::Model;
use crate::semantics::SemanticsError;
use crate::worlds::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("search space has about {estimate} candidates, above the cap of {cap}; lower the bounds or raise the cap")]
    BoundOverflow { estimate: u128, cap: u128 },
    #[error("bounds must allow at least one world")]
    ZeroWorlds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_worlds: usize,
    pub max_context_len: usize,
    /// Upper limit on (valuation, context) pairs before any pruning.
    pub max_candidates: u128,
    /// Visit only one context per profile class.
    pub dedupe: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_worlds: 3, max_context_len: 5, max_candidates: 2_000_000_000, dedupe: true }
    }
}

impl Bounds {
    pub fn new(max_worlds: usize, max_context_len: usize) -> Self {
        Bounds { max_worlds, max_context_len, ..Bounds::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub context: SequenceContext,
    pub world: usize,
}

/// Duplicate-free sequences of subsets of `W` (`|W| = n`) with length
/// `1..=max_len`, in canonical order.
pub fn sequence_contexts(n: usize, max_len: usize) -> Vec<Vec<WorldSet>> {
    let subsets: Vec<WorldSet> = WorldSet::all_subsets(n).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    for len in 1..=max_len.min(subsets.len()) {
        extend_sequences(&subsets, len, &mut current, &mut out);
    }
    out
}

fn extend_sequences(subsets: &[WorldSet], len: usize, current: &mut Vec<WorldSet>, out: &mut Vec<Vec<WorldSet>>) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for &s in subsets {
        if !current.contains(&s) {
            current.push(s);
            extend_sequences(subsets, len, current, out);
            current.pop();
        }
    }
}

/// For each nonempty `P ⊆ W` in ascending order, the expected state of `P ; C`.
pub fn context_profile(seq: &[WorldSet], n: usize) -> Vec<WorldSet> {
    let mut stack = SeqStack::from_sequence(seq);
    WorldSet::all_subsets(n)
        .filter(|p| !p.is_empty())
        .map(|p| {
            stack.push(p);
            let e = stack.expected();
            stack.pop();
            e
        })
        .collect()
}

/// First context of each profile class, in canonical order.
pub fn context_representatives(n: usize, max_len: usize) -> Vec<Vec<WorldSet>> {
    let mut seen = HashSet::new();
    sequence_contexts(n, max_len)
        .into_iter()
        .filter(|seq| seen.insert(context_profile(seq, n)))
        .collect()
}

fn count_sequences(subsets: u128, max_len: usize) -> u128 {
    let mut total = 0u128;
    let mut perms = 1u128;
    for k in 0..max_len.min(subsets as usize) {
        perms = perms.saturating_mul(subsets - k as u128);
        total = total.saturating_add(perms);
    }
    total
}

fn estimate(atoms: usize, bounds: &Bounds) -> u128 {
    let mut total = 0u128;
    for n in 1..=bounds.max_worlds {
        let bits = (n * atoms) as u32;
        let vals = if bits >= 127 { u128::MAX } else { 1u128 << bits };
        let subsets = if n >= 127 { u128::MAX } else { 1u128 << n };
        total = total.saturating_add(vals.saturating_mul(count_sequences(subsets, bounds.max_context_len)));
    }
    total
}

/// Valuation number `v` for `atoms` atoms over `n` worlds: atom `i` gets bits
/// `i*n .. (i+1)*n` of `v`.
pub fn valuation(v: u64, atoms: usize, n: usize) -> Vec<WorldSet> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..atoms).map(|i| WorldSet::from_bits((v >> (i * n)) & mask)).collect()
}

fn build_model(atoms: &[String], val: &[WorldSet], n: usize) -> Model {
    let map: BTreeMap<String, WorldSet> = atoms.iter().cloned().zip(val.iter().copied()).collect();
    Model::from_sets(n, map).expect("valuation within range")
}

fn check_bounds(f: &CompiledFormula, bounds: &Bounds) -> Result<(), SearchError> {
    if bounds.max_worlds == 0 {
        return Err(SearchError::ZeroWorlds);
    }
    let est = estimate(f.atoms().len(), bounds);
    if est > bounds.max_candidates || bounds.max_worlds * f.atoms().len() >= 64 || bounds.max_worlds > 16 {
        return Err(SearchError::BoundOverflow { estimate: est, cap: bounds.max_candidates });
    }
    Ok(())
}

/// First countermodel to `f` within `bounds`, if any.
pub fn find_countermodel(f: &Formula, bounds: &Bounds) -> Result<Option<Countermodel>, SearchError> {
    let compiled = CompiledFormula::new(f)?;
    check_bounds(&compiled, bounds)?;
    let k = compiled.atoms().len();
    for n in 1..=bounds.max_worlds {
        let contexts = if bounds.dedupe {
            context_representatives(n, bounds.max_context_len)
        } else {
            sequence_contexts(n, bounds.max_context_len)
        };
        let universe = WorldSet::full(n);
        let total: u64 = 1u64 << (n * k);
        let found = (0..total).into_par_iter().find_map_first(|v| {
            let val = valuation(v, k, n);
            let props = compiled.prop_values(&val, universe);
            let mut stack = SeqStack::default();
            contexts.iter().find_map(|seq| {
                stack.reset(seq);
                let t = compiled.truth_set(&props, universe, &mut stack);
                let bad = universe - t;
                bad.iter().next().map(|w| (val.clone(), seq.clone(), w))
            })
        });
        if let Some((val, seq, w)) = found {
            return Ok(Some(Countermodel {
                model: build_model(compiled.atoms(), &val, n),
                context: SequenceContext::new(seq).expect("nonempty"),
                world: w,
            }));
        }
    }
    Ok(None)
}

/// `true` iff no countermodel exists within `bounds`.
pub fn valid_within(f: &Formula, bounds: &Bounds) -> Result<bool, SearchError> {
    Ok(find_countermodel(f, bounds)?.is_none())
}

/// First model, context and world satisfying `f`.
pub fn find_satisfying(f: &Formula, bounds: &Bounds) -> Result<Option<Countermodel>, SearchError> {
    find_countermodel(&crate::formula::not(f.clone()), bounds)
}

/// Strict partial orders on `k` elements, as `higher[i]` masks.
pub fn strict_partial_orders(k: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        // higher[j] has bit i when i is above j
        let mut higher = vec![0u64; k];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                higher[j] |= 1 << i;
            }
        }
        let asymmetric = (0..k).all(|j| (0..k).all(|i| !(higher[j] >> i & 1 == 1 && higher[i] >> j & 1 == 1)));
        let transitive = (0..k).all(|c| {
            (0..k).filter(|&b| higher[c] >> b & 1 == 1).all(|b| higher[b] & !higher[c] == 0)
        });
        if asymmetric && transitive {
            out.push(higher);
        }
    }
    out
}

/// Set-form contexts over `n` worlds with at most `max_defaults` defaults
/// of pairwise distinct extent, each with every strict partial order.
pub fn ordered_contexts(n: usize, max_defaults: usize) -> Vec<(Vec<WorldSet>, Vec<u64>)> {
    let subsets: Vec<WorldSet> = WorldSet::all_subsets(n).collect();
    let mut out = Vec::new();
    for k in 0..=max_defaults.min(subsets.len()) {
        let orders = strict_partial_orders(k);
        let mut combo = Vec::new();
        combinations(&subsets, k, 0, &mut combo, &mut |ext| {
            for o in &orders {
                out.push((ext.to_vec(), o.clone()));
            }
        });
    }
    out
}

fn combinations(items: &[WorldSet], k: usize, start: usize, cur: &mut Vec<WorldSet>, f: &mut impl FnMut(&[WorldSet])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        combinations(items, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Convert an enumerated set-form context into named defaults `D1, D2, ...`.
pub fn ordered_context_to_named(extents: &[WorldSet], higher: &[u64]) -> OrderedDefaultSet {
    let name = |i: usize| format!("D{}", i + 1);
    let defaults = extents.iter().enumerate().map(|(i, &e)| (name(i), e)).collect();
    let mut order = Vec::new();
    for (j, &h) in higher.iter().enumerate() {
        for i in WorldSet::from_bits(h).iter() {
            order.push((name(i), name(j)));
        }
    }
    OrderedDefaultSet::new(defaults, order).expect("enumerated contexts are valid")
}

/// First countermodel over set-form contexts with at most `max_defaults` defaults.
pub fn find_countermodel_ordered(
    f: &Formula,
    max_worlds: usize,
    max_defaults: usize,
) -> Result<Option<(Model, OrderedDefaultSet, usize)>, SearchError> {
    let compiled = CompiledFormula::new(f)?;
    let k = compiled.atoms().len();
    if max_worlds == 0 {
        return Err(SearchError::ZeroWorlds);
    }
    if max_worlds * k >= 40 {
        return Err(SearchError::BoundOverflow { estimate: 1u128 << (max_worlds * k).min(127), cap: 1u128 << 40 });
    }
    for n in 1..=max_worlds {
        let contexts = ordered_contexts(n, max_defaults);
        let universe = WorldSet::full(n);
        let found = (0..1u64 << (n * k)).into_par_iter().find_map_first(|v| {
            let val = valuation(v, k, n);
            let props = compiled.prop_values(&val, universe);
            contexts.iter().find_map(|(ext, higher)| {
                let mut stack = OrderedStack::new(universe, ext.clone(), higher.clone());
                let t = compiled.truth_set(&props, universe, &mut stack);
                (universe - t).iter().next().map(|w| (val.clone(), ext.clone(), higher.clone(), w))
            })
        });
        if let Some((val, ext, higher, w)) = found {
            return Ok(Some((build_model(compiled.atoms(), &val, n), ordered_context_to_named(&ext, &higher), w)));
        }
    }
    Ok(None)
}
