#![allow(dead_code)]

use fairdiv::{Instance, ItemSet, Kind, Value};
use proptest::prelude::*;

pub fn q(x: i64) -> Value {
    Value::from_integer(x.into())
}

pub fn rows(r: &[Vec<i64>]) -> Vec<Vec<Value>> {
    r.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect()
}

pub fn instance(kind: Kind, r: &[Vec<i64>]) -> Instance<Value> {
    Instance::additive(kind, rows(r)).unwrap()
}

/// `n x m` integer matrices with entries in `lo..=hi`.
pub fn matrix(
    agents: std::ops::RangeInclusive<usize>,
    items: std::ops::RangeInclusive<usize>,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (agents, items).prop_flat_map(move |(n, m)| prop::collection::vec(prop::collection::vec(lo..=hi, m), n))
}

pub fn goods(
    agents: std::ops::RangeInclusive<usize>,
    items: std::ops::RangeInclusive<usize>,
    hi: i64,
) -> impl Strategy<Value = Instance<Value>> {
    matrix(agents, items, 0, hi).prop_map(|r| instance(Kind::Goods, &r))
}

pub fn chores(
    agents: std::ops::RangeInclusive<usize>,
    items: std::ops::RangeInclusive<usize>,
    hi: i64,
) -> impl Strategy<Value = Instance<Value>> {
    matrix(agents, items, -hi, 0).prop_map(|r| instance(Kind::Chores, &r))
}

/// An owner per item, as drawn from `0..n`.
pub fn owners(n: usize, m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, m)
}

pub fn bundles_from_owners(n: usize, owners: &[usize]) -> Vec<ItemSet> {
    let mut b = vec![ItemSet::EMPTY; n];
    for (g, &a) in owners.iter().enumerate() {
        b[a].insert(g);
    }
    b
}
