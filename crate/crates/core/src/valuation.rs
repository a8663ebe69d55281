//! Valuation functions and the operations every solver builds on: ordering,
//! the one-less function, cancelability and dominance.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::items::{ItemSet, MAX_ITEMS};
use crate::scalar::{max_of, Scalar};

/// Default cap on the number of items of an explicit subset table.
pub const DEFAULT_TABLE_LIMIT: usize = 16;

/// `v(S) = sum of v({g})` over `g` in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveValuation<T> {
    items: Vec<T>,
}

impl<T: Scalar> AdditiveValuation<T> {
    pub fn new(items: Vec<T>) -> Result<Self> {
        if items.len() > MAX_ITEMS {
            return Err(Error::InvalidInstance(format!(
                "{} items exceeds the supported maximum of {MAX_ITEMS}",
                items.len()
            )));
        }
        if let Some(g) = items.iter().position(|x| !x.is_finite_value()) {
            return Err(Error::InvalidInstance(format!("item {g} has a non-finite value")));
        }
        Ok(AdditiveValuation { items })
    }

    pub fn item_values(&self) -> &[T] {
        &self.items
    }
}

/// An explicit valuation storing one value per subset, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct TableValuation<T> {
    num_items: usize,
    values: Vec<T>,
}

impl<T: Scalar> TableValuation<T> {
    /// Builds a table over `num_items` items with the default size limit.
    pub fn new(num_items: usize, values: Vec<T>) -> Result<Self> {
        Self::with_limit(num_items, values, DEFAULT_TABLE_LIMIT)
    }

    pub fn with_limit(num_items: usize, values: Vec<T>, limit: usize) -> Result<Self> {
        if num_items > limit.min(MAX_ITEMS) {
            return Err(Error::TableTooLarge {
                items: num_items,
                limit,
            });
        }
        if values.len() != 1usize << num_items {
            return Err(Error::InvalidInstance(format!(
                "table over {num_items} items needs {} entries, got {}",
                1usize << num_items,
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidInstance("v(empty set) must be 0".into()));
        }
        if let Some(s) = values.iter().position(|x| !x.is_finite_value()) {
            return Err(Error::InvalidInstance(format!("subset {s:#b} has a non-finite value")));
        }
        Ok(TableValuation { num_items, values })
    }

    /// Like [`TableValuation::new`], additionally validating `S ⊆ T ⟹ v(S) ≤ v(T)`.
    pub fn new_monotone(num_items: usize, values: Vec<T>) -> Result<Self> {
        let table = Self::new(num_items, values)?;
        if let Some((s, g)) = table.monotonicity_violation(false) {
            return Err(Error::InvalidInstance(format!(
                "table is not monotone: adding item {g} to {s:?} lowers its value"
            )));
        }
        Ok(table)
    }

    /// Looks for `S`, `g ∉ S` with `v(S + g) < v(S)` (or `<=` when `strict`).
    /// Checking single-item extensions suffices since chains compose.
    pub(crate) fn monotonicity_violation(&self, strict: bool) -> Option<(ItemSet, usize)> {
        for s in 0..self.values.len() {
            let set = ItemSet::from_bits(s as u64);
            for g in 0..self.num_items {
                if set.contains(g) {
                    continue;
                }
                let ord = self.values[s | 1 << g].cmp_value(&self.values[s]);
                if ord == Ordering::Less || (strict && ord == Ordering::Equal) {
                    return Some((set, g));
                }
            }
        }
        None
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// A valuation function over `m` items.
#[derive(Debug, Clone, PartialEq)]
pub enum Valuation<T> {
    Additive(AdditiveValuation<T>),
    Table(TableValuation<T>),
}

impl<T: Scalar> Valuation<T> {
    pub fn additive(items: Vec<T>) -> Result<Self> {
        AdditiveValuation::new(items).map(Valuation::Additive)
    }

    pub fn table(num_items: usize, values: Vec<T>) -> Result<Self> {
        TableValuation::new(num_items, values).map(Valuation::Table)
    }

    pub fn num_items(&self) -> usize {
        match self {
            Valuation::Additive(a) => a.items.len(),
            Valuation::Table(t) => t.num_items,
        }
    }

    pub fn value(&self, set: ItemSet) -> T {
        match self {
            Valuation::Additive(a) => set
                .iter()
                .fold(T::zero(), |acc, g| acc + a.items[g].clone()),
            Valuation::Table(t) => t.values[set.bits() as usize].clone(),
        }
    }

    /// `v({g})`.
    pub fn item_value(&self, g: usize) -> T {
        match self {
            Valuation::Additive(a) => a.items[g].clone(),
            Valuation::Table(t) => t.values[1 << g].clone(),
        }
    }

    /// Compares two items by singleton value, higher first; the smaller index
    /// comes first among equal values.
    pub fn preference(&self, a: usize, b: usize) -> Ordering {
        self.item_value(b)
            .cmp_value(&self.item_value(a))
            .then(a.cmp(&b))
    }

    /// The given items, most valuable first.
    pub fn sorted_items(&self, set: ItemSet) -> Vec<usize> {
        let mut items: Vec<usize> = set.iter().collect();
        items.sort_by(|&a, &b| self.preference(a, b));
        items
    }

    /// The most valuable item in `set` (smallest index on ties).
    pub fn favorite(&self, set: ItemSet) -> Option<usize> {
        set.iter()
            .min_by(|&a, &b| self.preference(a, b))
    }

    /// `-v`.
    pub fn negated(&self) -> Self {
        match self {
            Valuation::Additive(a) => Valuation::Additive(AdditiveValuation {
                items: a.items.iter().map(|x| -x.clone()).collect(),
            }),
            Valuation::Table(t) => Valuation::Table(TableValuation {
                num_items: t.num_items,
                values: t.values.iter().map(|x| -x.clone()).collect(),
            }),
        }
    }

    /// Value of every subset, indexed by bitmask. Additive valuations are
    /// expanded when `m <= limit`.
    pub fn subset_values(&self, limit: usize) -> Result<Vec<T>> {
        match self {
            Valuation::Table(t) => Ok(t.values.clone()),
            Valuation::Additive(a) => {
                let m = a.items.len();
                if m > limit {
                    return Err(Error::TableTooLarge { items: m, limit });
                }
                let mut out = Vec::with_capacity(1 << m);
                out.push(T::zero());
                for s in 1usize..1 << m {
                    let low = s.trailing_zeros() as usize;
                    let rest = out[s & (s - 1)].clone();
                    out.push(rest + a.items[low].clone());
                }
                Ok(out)
            }
        }
    }

    /// Tabulates the valuation over all subsets.
    pub fn to_table(&self, limit: usize) -> Result<TableValuation<T>> {
        Ok(TableValuation {
            num_items: self.num_items(),
            values: self.subset_values(limit)?,
        })
    }

    /// Whether every subset has value `>= 0` (`nonneg`) or `<= 0` (otherwise).
    /// Returns the first offending subset.
    pub(crate) fn sign_violation(&self, nonneg: bool) -> Option<ItemSet> {
        let bad = |x: &T| {
            if nonneg {
                x.cmp_value(&T::zero()) == Ordering::Less
            } else {
                x.cmp_value(&T::zero()) == Ordering::Greater
            }
        };
        match self {
            Valuation::Additive(a) => a.items.iter().position(bad).map(ItemSet::singleton),
            Valuation::Table(t) => t
                .values
                .iter()
                .position(bad)
                .map(|s| ItemSet::from_bits(s as u64)),
        }
    }

    /// First item whose singleton value exceeds its predecessor's.
    pub(crate) fn order_violation(&self) -> Option<usize> {
        (1..self.num_items()).find(|&g| {
            self.item_value(g).cmp_value(&self.item_value(g - 1)) == Ordering::Greater
        })
    }

    /// Strong monotonicity: `Y ⊊ Z ⟹ v(Y) < v(Z)`.
    pub fn is_strongly_monotone(&self) -> bool {
        match self {
            Valuation::Additive(a) => a.items.iter().all(|x| x.cmp_value(&T::zero()) == Ordering::Greater),
            Valuation::Table(t) => t.monotonicity_violation(true).is_none(),
        }
    }
}

/// A relabeling of items that sorts a valuation's singletons.
///
/// `position_to_item[k]` is the item at rank `k` (most valuable first);
/// `item_to_position` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingPermutation {
    position_to_item: Vec<usize>,
    item_to_position: Vec<usize>,
}

impl OrderingPermutation {
    pub fn identity(m: usize) -> Self {
        OrderingPermutation {
            position_to_item: (0..m).collect(),
            item_to_position: (0..m).collect(),
        }
    }

    fn from_order(position_to_item: Vec<usize>) -> Self {
        let mut item_to_position = vec![0; position_to_item.len()];
        for (k, &g) in position_to_item.iter().enumerate() {
            item_to_position[g] = k;
        }
        OrderingPermutation {
            position_to_item,
            item_to_position,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.position_to_item.iter().enumerate().all(|(k, &g)| k == g)
    }

    pub fn item_at(&self, position: usize) -> usize {
        self.position_to_item[position]
    }

    pub fn position_of(&self, item: usize) -> usize {
        self.item_to_position[item]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.position_to_item
    }

    /// `{π_k : k ∈ positions}`.
    pub fn to_items(&self, positions: ItemSet) -> ItemSet {
        positions.iter().map(|k| self.position_to_item[k]).collect()
    }

    pub fn to_positions(&self, items: ItemSet) -> ItemSet {
        items.iter().map(|g| self.item_to_position[g]).collect()
    }
}

/// The ordered valuation `v'(S) = v({π_k : k ∈ S})`, where `π` lists items by
/// non-increasing singleton value with ties broken towards the smaller index.
pub fn ordered_valuation<T: Scalar>(v: &Valuation<T>) -> (Valuation<T>, OrderingPermutation) {
    let m = v.num_items();
    let perm = OrderingPermutation::from_order(v.sorted_items(ItemSet::full(m)));
    let ordered = match v {
        Valuation::Additive(a) => Valuation::Additive(AdditiveValuation {
            items: perm.position_to_item.iter().map(|&g| a.items[g].clone()).collect(),
        }),
        Valuation::Table(t) => Valuation::Table(TableValuation {
            num_items: m,
            values: (0..t.values.len())
                .map(|s| t.values[perm.to_items(ItemSet::from_bits(s as u64)).bits() as usize].clone())
                .collect(),
        }),
    };
    (ordered, perm)
}

/// The one-less function: `max_{g ∈ S} v(S \ {g})`, and `0` for the empty set.
pub fn one_less<T: Scalar>(v: &Valuation<T>, set: ItemSet) -> T {
    max_of(set.iter().map(|g| v.value(set.without(g)))).unwrap_or_else(T::zero)
}

/// `min_{g ∈ S} v(S \ {g})`, and `0` for the empty set.
pub(crate) fn min_less<T: Scalar>(v: &Valuation<T>, set: ItemSet) -> T {
    crate::scalar::min_of(set.iter().map(|g| v.value(set.without(g)))).unwrap_or_else(T::zero)
}

/// A triple witnessing that a valuation is not cancelable:
/// `v(S ∪ {g}) > v(T ∪ {g})` while `v(S) <= v(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CancelViolation {
    pub s: ItemSet,
    pub t: ItemSet,
    pub g: usize,
}

/// Checks `v(S ∪ {g}) > v(T ∪ {g}) ⟹ v(S) > v(T)` for all `S, T` and
/// `g ∉ S ∪ T`.
///
/// On failure the witness is the first one in `(S, T, g)` scan order with sets
/// compared as bitmasks. Runs in `O(m 2^m log 2^m)` rather than scanning all
/// `4^m` pairs.
pub fn is_cancelable<T: Scalar>(v: &TableValuation<T>) -> std::result::Result<(), CancelViolation> {
    let m = v.num_items;
    let vals = &v.values;

    // Per item g: sets T without g sorted by v(T), with suffix minima of v(T+g).
    struct Index<'a, T> {
        keys: Vec<&'a T>,
        suffix_min: Vec<&'a T>,
    }
    let indexes: Vec<Index<'_, T>> = (0..m)
        .map(|g| {
            let mut sets: Vec<usize> = (0..vals.len()).filter(|s| s >> g & 1 == 0).collect();
            sets.sort_by(|&a, &b| vals[a].cmp_value(&vals[b]));
            let keys: Vec<&T> = sets.iter().map(|&s| &vals[s]).collect();
            let mut suffix_min: Vec<&T> = sets.iter().map(|&s| &vals[s | 1 << g]).collect();
            for k in (0..suffix_min.len().saturating_sub(1)).rev() {
                if suffix_min[k + 1].cmp_value(suffix_min[k]) == Ordering::Less {
                    suffix_min[k] = suffix_min[k + 1];
                }
            }
            Index { keys, suffix_min }
        })
        .collect();

    let violates = |s: usize, t: usize, g: usize| {
        vals[s | 1 << g].cmp_value(&vals[t | 1 << g]) == Ordering::Greater
            && vals[s].cmp_value(&vals[t]) != Ordering::Greater
    };

    for s in 0..vals.len() {
        let hit = (0..m).filter(|g| s >> g & 1 == 0).any(|g| {
            let idx = &indexes[g];
            let start = idx
                .keys
                .partition_point(|k| k.cmp_value(&vals[s]) == Ordering::Less);
            start < idx.keys.len()
                && idx.suffix_min[start].cmp_value(&vals[s | 1 << g]) == Ordering::Less
        });
        if !hit {
            continue;
        }
        for t in 0..vals.len() {
            for g in 0..m {
                if (s | t) >> g & 1 == 0 && violates(s, t, g) {
                    return Err(CancelViolation {
                        s: ItemSet::from_bits(s as u64),
                        t: ItemSet::from_bits(t as u64),
                        g,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Scaled dominance `B ⪰_v α·C`: with both sets sorted by singleton value
/// (highest first, smaller index on ties), the `j`-th value of `B` is at least
/// `α` times the `j`-th value of `C` for every `j`.
pub fn dominates<T: Scalar>(v: &Valuation<T>, b: ItemSet, c: ItemSet, alpha: &T) -> Result<bool> {
    if b.len() != c.len() {
        return Err(Error::SizeMismatch {
            left: b.len(),
            right: c.len(),
        });
    }
    let bs = v.sorted_items(b);
    let cs = v.sorted_items(c);
    Ok(bs.iter().zip(&cs).all(|(&x, &y)| {
        v.item_value(x).cmp_value(&(alpha.clone() * v.item_value(y))) != Ordering::Less
    }))
}
