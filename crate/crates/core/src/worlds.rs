//! Bitset over world indices.
//!
//! Worlds of a [`Model`](crate::Model) are numbered by their position in the
//! model's canonical (lexicographic) ordering, so a set of worlds fits in a
//! single machine word. Models are limited to [`MAX_WORLDS`] worlds.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest number of worlds a model may have.
pub const MAX_WORLDS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_WORLDS);
        WorldSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_WORLDS && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement relative to `universe`.
    pub fn complement(self, universe: WorldSet) -> WorldSet {
        WorldSet(universe.0 & !self.0)
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Every subset of `{0, .., n-1}`, in increasing bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = WorldSet> {
        assert!(n < 64, "subset enumeration over {n} worlds");
        (0..1u64 << n).map(WorldSet)
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for WorldSet {
    fn bitand_assign(&mut self, rhs: WorldSet) {
        self.0 &= rhs.0;
    }
}

impl BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for WorldSet {
    fn bitor_assign(&mut self, rhs: WorldSet) {
        self.0 |= rhs.0;
    }
}

impl Sub for WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: WorldSet = [0, 2].into_iter().collect();
        let b: WorldSet = [2, 3].into_iter().collect();
        assert_eq!((a & b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!((a | b).len(), 3);
        assert_eq!((a - b).iter().collect::<Vec<_>>(), vec![0]);
        assert!(WorldSet::singleton(2).is_subset(a));
        assert_eq!(a.complement(WorldSet::full(4)), [1, 3].into_iter().collect());
        assert_eq!(WorldSet::full(64).len(), 64);
        assert_eq!(WorldSet::all_subsets(3).count(), 8);
    }
}
