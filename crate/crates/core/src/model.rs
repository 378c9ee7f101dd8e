//! Finite models: a world set and a valuation of atoms.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::worlds::{WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("world '{0}' is listed more than once")]
    DuplicateWorld(String),
    #[error("model has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("{location} mentions unknown world '{world}'")]
    UnknownWorld { world: String, location: String },
    #[error("sequence context must contain at least one default")]
    EmptySequence,
    #[error("priority pair mentions unknown default '{0}'")]
    UnknownDefault(String),
    #[error("priority relation is not irreflexive: '{0}' is above itself after transitive closure")]
    PriorityCycle(String),
    #[error("defaults '{0}' and '{1}' have the same extent")]
    DuplicateExtent(String, String),
    #[error("{0} is not a subset of the model's worlds")]
    OutOfRange(String),
    #[error("{0}")]
    Invalid(String),
}

/// `M = (W, V)`. Worlds are kept in lexicographic order; world `i` in a
/// [`WorldSet`] is `worlds()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    worlds: Vec<String>,
    valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    pub fn new<W, S>(worlds: W, valuation: BTreeMap<String, Vec<S>>) -> Result<Self, ModelError>
    where
        W: IntoIterator,
        W::Item: Into<String>,
        S: AsRef<str>,
    {
        let mut worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        worlds.sort();
        if let Some(w) = worlds.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateWorld(w[0].clone()));
        }
        if worlds.len() > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(worlds.len()));
        }
        let mut model = Model { worlds, valuation: BTreeMap::new() };
        for (atom, members) in valuation {
            let set = model.world_set(members.iter().map(AsRef::as_ref), &format!("valuation of '{atom}'"))?;
            model.valuation.insert(atom, set);
        }
        Ok(model)
    }

    /// Model over `w1..wn` with valuation given directly as world sets.
    pub fn from_sets(n: usize, valuation: BTreeMap<String, WorldSet>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoWorlds);
        }
        if n > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(n));
        }
        let mut worlds: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
        worlds.sort();
        let universe = WorldSet::full(n);
        if let Some((atom, _)) = valuation.iter().find(|(_, s)| !s.is_subset(universe)) {
            return Err(ModelError::OutOfRange(format!("valuation of '{atom}'")));
        }
        let mut model = Model { worlds, valuation };
        // `from_sets` indexes by numeric position; remap if lexicographic order differs (n >= 10).
        if n >= 10 {
            let numeric: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
            let remap: Vec<usize> = numeric.iter().map(|w| model.world_index(w).unwrap()).collect();
            for set in model.valuation.values_mut() {
                *set = set.iter().map(|i| remap[i]).collect();
            }
        }
        Ok(model)
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// `V(p)`; atoms without an entry are false everywhere.
    pub fn atom(&self, name: &str) -> WorldSet {
        self.valuation.get(name).copied().unwrap_or_default()
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.binary_search_by(|w| w.as_str().cmp(name)).ok()
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    /// Resolve world names to a set; `location` names the offending field in errors.
    pub fn world_set<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
        location: &str,
    ) -> Result<WorldSet, ModelError> {
        names
            .into_iter()
            .map(|n| {
                self.world_index(n).ok_or_else(|| ModelError::UnknownWorld {
                    world: n.to_string(),
                    location: location.to_string(),
                })
            })
            .collect()
    }

    pub fn names(&self, set: WorldSet) -> Vec<&str> {
        set.iter().map(|i| self.worlds[i].as_str()).collect()
    }

    /// `{w1, w2}` style rendering of a world set.
    pub fn show(&self, set: WorldSet) -> String {
        format!("{{{}}}", self.names(set).join(", "))
    }
}
