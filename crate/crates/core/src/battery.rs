//! Deterministic generation of formula batteries for bulk checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{self, Dialect, Formula};

#[derive(Debug, Clone)]
pub struct BatteryConfig {
    pub atoms: Vec<String>,
    pub dialect: Dialect,
    /// Upper bound on modal depth; formulas are spread over depths `1..=max_depth`.
    pub max_depth: usize,
    /// Upper bound on [`Formula::size`] of the generated core formula.
    pub max_size: usize,
}

impl BatteryConfig {
    pub fn new(atoms: &[&str], dialect: Dialect, max_depth: usize, max_size: usize) -> Self {
        BatteryConfig { atoms: atoms.iter().map(|a| a.to_string()).collect(), dialect, max_depth, max_size }
    }
}

fn propositional(rng: &mut ChaCha8Rng, atoms: &[String], size: usize) -> Formula {
    if size <= 1 {
        return if rng.random_ratio(1, 8) { formula::falsum() } else { formula::atom(atoms[rng.random_range(0..atoms.len())].clone()) };
    }
    match rng.random_range(0..4) {
        0 => formula::not(propositional(rng, atoms, size - 1)),
        1 | 2 => {
            let left = rng.random_range(1..size);
            formula::and(propositional(rng, atoms, left), propositional(rng, atoms, size - left))
        }
        _ => {
            let left = rng.random_range(1..size);
            formula::or(propositional(rng, atoms, left), propositional(rng, atoms, size - left))
        }
    }
}

/// A formula of modal depth exactly `depth` with roughly `size` connectives.
fn with_depth(rng: &mut ChaCha8Rng, cfg: &BatteryConfig, depth: usize, size: usize) -> Formula {
    if depth == 0 {
        return propositional(rng, &cfg.atoms, size.clamp(1, 3));
    }
    let conditional = |rng: &mut ChaCha8Rng, size: usize| {
        let ante_size = rng.random_range(1..=2);
        let body = with_depth(rng, cfg, depth - 1, size.saturating_sub(ante_size + 1).max(1));
        match cfg.dialect {
            Dialect::ConWon => {
                let a = propositional(rng, &cfg.atoms, ante_size);
                if rng.random_ratio(1, 4) {
                    formula::dual(a, body)
                } else {
                    formula::cond(a, body)
                }
            }
            Dialect::V => {
                let a = if depth > 1 && rng.random_ratio(1, 3) {
                    let d = rng.random_range(0..depth);
                    with_depth(rng, cfg, d, 2)
                } else {
                    propositional(rng, &cfg.atoms, ante_size)
                };
                formula::corner(a, body)
            }
        }
    };
    if size <= 3 {
        return conditional(rng, size);
    }
    let kind = rng.random_range(0..6);
    if kind == 0 {
        return formula::not(with_depth(rng, cfg, depth, size - 1));
    }
    if kind > 3 {
        return conditional(rng, size);
    }
    // One side carries the required depth, the other may be shallower.
    let left = rng.random_range(1..size - 1);
    let shallow_depth = rng.random_range(0..=depth);
    let shallow = with_depth(rng, cfg, shallow_depth, left);
    let deep = with_depth(rng, cfg, depth, size - left - 1);
    match kind {
        1 => formula::and(deep, shallow),
        2 => formula::or(shallow, deep),
        _ => formula::implies(shallow, deep),
    }
}

/// `count` distinct formulas, reproducible from `seed`.
pub fn battery(seed: u64, count: usize, cfg: &BatteryConfig) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 1000 {
        attempts += 1;
        let depth = 1 + out.len() % cfg.max_depth.max(1);
        let size = rng.random_range(depth * 2..=cfg.max_size.max(depth * 2));
        let f = with_depth(&mut rng, cfg, depth, size);
        if f.size() <= cfg.max_size * 3 && f.modal_depth() <= cfg.max_depth && seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

/// Flat formulas (modal depth exactly one) in the chosen dialect.
pub fn flat_battery(seed: u64, count: usize, atoms: &[&str], dialect: Dialect, max_size: usize) -> Vec<Formula> {
    battery(seed, count, &BatteryConfig::new(atoms, dialect, 1, max_size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let cfg = BatteryConfig::new(&["p", "q"], Dialect::ConWon, 3, 12);
        let a = battery(7, 50, &cfg);
        assert_eq!(a, battery(7, 50, &cfg));
        assert_eq!(a.len(), 50);
        assert!(a.iter().all(|f| (1..=3).contains(&f.modal_depth()) && f.is_in_dialect(Dialect::ConWon)));
        assert!(a.iter().any(|f| f.modal_depth() == 3));
        let flat = flat_battery(1, 30, &["p", "q"], Dialect::V, 8);
        assert!(flat.iter().all(|f| f.is_flat() && f.modal_depth() == 1 && f.is_in_dialect(Dialect::V)));
    }
}
