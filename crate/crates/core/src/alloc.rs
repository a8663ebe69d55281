//! Allocations, allocation vectors and the picking-sequence procedure.

use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::scalar::Scalar;
use crate::valuation::Valuation;

/// An ordered partition of the items `0..m` into one bundle per agent.
/// Empty bundles are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    num_items: usize,
    bundles: Vec<ItemSet>,
}

impl Allocation {
    pub fn new(num_items: usize, bundles: Vec<ItemSet>) -> Result<Self> {
        if bundles.is_empty() {
            return Err(Error::InvalidAllocation("no bundles".into()));
        }
        let full = ItemSet::full(num_items);
        let mut seen = ItemSet::EMPTY;
        for (i, &b) in bundles.iter().enumerate() {
            if !b.is_subset(full) {
                return Err(Error::InvalidAllocation(format!(
                    "bundle {i} contains items outside 0..{num_items}"
                )));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidAllocation(format!(
                    "bundle {i} shares items {:?} with an earlier bundle",
                    b.intersection(seen)
                )));
            }
            seen = seen.union(b);
        }
        if seen != full {
            return Err(Error::InvalidAllocation(format!(
                "items {:?} are unallocated",
                full.difference(seen)
            )));
        }
        Ok(Allocation { num_items, bundles })
    }

    /// Builds an allocation from item lists, one per agent.
    pub fn from_lists(num_items: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut bundles = Vec::with_capacity(lists.len());
        for (i, list) in lists.iter().enumerate() {
            let mut b = ItemSet::EMPTY;
            for &g in list {
                if g >= num_items {
                    return Err(Error::InvalidAllocation(format!(
                        "bundle {i} names item {g} but there are {num_items} items"
                    )));
                }
                if b.contains(g) {
                    return Err(Error::InvalidAllocation(format!("bundle {i} repeats item {g}")));
                }
                b.insert(g);
            }
            bundles.push(b);
        }
        Self::new(num_items, bundles)
    }

    /// Every item to a single agent.
    pub fn all_to(num_agents: usize, num_items: usize, agent: usize) -> Self {
        let mut bundles = vec![ItemSet::EMPTY; num_agents];
        bundles[agent] = ItemSet::full(num_items);
        Allocation { num_items, bundles }
    }

    pub(crate) fn from_parts_unchecked(num_items: usize, bundles: Vec<ItemSet>) -> Self {
        debug_assert!(Self::new(num_items, bundles.clone()).is_ok());
        Allocation { num_items, bundles }
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn bundle(&self, agent: usize) -> ItemSet {
        self.bundles[agent]
    }

    pub fn bundles(&self) -> &[ItemSet] {
        &self.bundles
    }

    /// Items not held by `agent`.
    pub fn others(&self, agent: usize) -> ItemSet {
        ItemSet::full(self.num_items).difference(self.bundles[agent])
    }

    /// Bundles as sorted item lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.bundles.iter().map(|b| b.iter().collect()).collect()
    }

    /// Item `g` goes to `owners[g]`.
    pub fn vector(&self) -> AllocationVector {
        let mut owners = vec![0; self.num_items];
        for (i, b) in self.bundles.iter().enumerate() {
            for g in b.iter() {
                owners[g] = i;
            }
        }
        AllocationVector {
            num_agents: self.bundles.len(),
            owners,
        }
    }
}

/// The per-item owner list `[a_1, .., a_m]` of an allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AllocationVector {
    num_agents: usize,
    owners: Vec<usize>,
}

impl AllocationVector {
    pub fn new(num_agents: usize, owners: Vec<usize>) -> Result<Self> {
        if num_agents == 0 {
            return Err(Error::InvalidAllocation("no agents".into()));
        }
        if let Some(t) = owners.iter().position(|&a| a >= num_agents) {
            return Err(Error::InvalidAllocation(format!(
                "round {t} names agent {} but there are {num_agents} agents",
                owners[t]
            )));
        }
        Ok(AllocationVector { num_agents, owners })
    }

    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    /// The allocation this vector describes.
    pub fn allocation(&self) -> Allocation {
        let mut bundles = vec![ItemSet::EMPTY; self.num_agents];
        for (g, &a) in self.owners.iter().enumerate() {
            bundles[a].insert(g);
        }
        Allocation {
            num_items: self.owners.len(),
            bundles,
        }
    }

    /// Rounds in which `agent` picks, and the rounds in which others pick,
    /// both increasing.
    pub fn rounds_of(&self, agent: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.owners.len()).partition(|&t| self.owners[t] == agent)
    }
}

/// Runs the picking sequence: in round `t`, agent `a_t` takes their most
/// valuable remaining item (highest singleton value, smallest index on ties).
///
/// Chores use the same rule, so the picker takes the item of least
/// disutility. Works for arbitrary valuations, including non-monotone ones.
pub fn pick_by_list<T: Scalar>(sequence: &AllocationVector, valuations: &[Valuation<T>]) -> Result<Allocation> {
    let m = sequence.len();
    if valuations.len() != sequence.num_agents() {
        return Err(Error::InvalidAllocation(format!(
            "sequence has {} agents but {} valuations were given",
            sequence.num_agents(),
            valuations.len()
        )));
    }
    if let Some(v) = valuations.iter().find(|v| v.num_items() != m) {
        return Err(Error::InvalidAllocation(format!(
            "sequence has {m} rounds but a valuation covers {} items",
            v.num_items()
        )));
    }
    let mut remaining = ItemSet::full(m);
    let mut bundles = vec![ItemSet::EMPTY; sequence.num_agents()];
    for &agent in sequence.owners() {
        let g = valuations[agent]
            .favorite(remaining)
            .expect("one item remains per round");
        remaining.remove(g);
        bundles[agent].insert(g);
    }
    Ok(Allocation {
        num_items: m,
        bundles,
    })
}
