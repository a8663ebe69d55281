//! Bitmask item sets.

use std::fmt;

/// Hard ceiling on the number of items any instance may carry.
pub const MAX_ITEMS: usize = 64;

/// A set of items drawn from `0..m`, stored as a bitmask (bit `g` is item `g`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ItemSet(u64);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ItemSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_ITEMS, "at most {MAX_ITEMS} items supported");
        if m == MAX_ITEMS {
            ItemSet(u64::MAX)
        } else {
            ItemSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(g: usize) -> Self {
        ItemSet(1u64 << g)
    }

    pub fn contains(self, g: usize) -> bool {
        g < MAX_ITEMS && self.0 >> g & 1 == 1
    }

    pub fn insert(&mut self, g: usize) {
        self.0 |= 1u64 << g;
    }

    pub fn remove(&mut self, g: usize) {
        self.0 &= !(1u64 << g);
    }

    pub fn with(self, g: usize) -> Self {
        ItemSet(self.0 | 1u64 << g)
    }

    pub fn without(self, g: usize) -> Self {
        ItemSet(self.0 & !(1u64 << g))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ItemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ItemSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ItemSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Items in increasing order.
    pub fn iter(self) -> Items {
        Items(self.0)
    }

    /// Lowest item, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl FromIterator<usize> for ItemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ItemSet::EMPTY;
        for g in iter {
            assert!(g < MAX_ITEMS, "item index {g} out of range");
            s.insert(g);
        }
        s
    }
}

impl IntoIterator for ItemSet {
    type Item = usize;
    type IntoIter = Items;
    fn into_iter(self) -> Items {
        self.iter()
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the members of an [`ItemSet`].
#[derive(Clone)]
pub struct Items(u64);

impl Iterator for Items {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let g = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Items {}
