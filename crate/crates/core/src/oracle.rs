//! Exhaustive ground truth for small instances.
//!
//! Everything here enumerates allocations or partitions outright and is meant
//! as an independent check on the polynomial-time machinery elsewhere in the
//! crate. Searches refuse instances beyond a [`SearchBudget`].

use std::cmp::Ordering;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::fairness::{is_efx, mms_value, MmsGuard};
use crate::instance::{Instance, Kind};
use crate::items::ItemSet;
use crate::scalar::Scalar;
use crate::valuation::{min_less, one_less, Valuation};

/// Limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_agents: usize,
    pub max_items: usize,
    /// Upper bound on `n^m`, the number of labeled allocations.
    pub max_assignments: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_agents: 16,
            max_items: 24,
            max_assignments: 10_000_000,
            time_limit: None,
        }
    }
}

impl SearchBudget {
    pub fn check(&self, n: usize, m: usize) -> Result<()> {
        if n > self.max_agents {
            return Err(Error::Budget(format!("{n} agents exceed the limit of {}", self.max_agents)));
        }
        if m > self.max_items {
            return Err(Error::Budget(format!("{m} items exceed the limit of {}", self.max_items)));
        }
        let count = (n as u64).checked_pow(m as u32);
        if count.is_none_or(|c| c > self.max_assignments) {
            return Err(Error::Budget(format!(
                "{n}^{m} allocations exceed the limit of {}",
                self.max_assignments
            )));
        }
        Ok(())
    }

    fn clock(&self) -> Clock {
        Clock {
            deadline: self.time_limit.map(|d| Instant::now() + d),
            ticks: 0,
        }
    }
}

/// Parses `key=value` pairs separated by commas, e.g.
/// `max_assignments=1000000,time_limit_ms=500`. Keys not given keep their
/// defaults.
impl FromStr for SearchBudget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut budget = SearchBudget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Budget(format!("expected key=value, got {part:?}")))?;
            let parsed: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Budget(format!("{key}: {value:?} is not a non-negative integer")))?;
            match key.trim() {
                "max_agents" => budget.max_agents = parsed as usize,
                "max_items" => budget.max_items = parsed as usize,
                "max_assignments" => budget.max_assignments = parsed,
                "time_limit_ms" => budget.time_limit = Some(Duration::from_millis(parsed)),
                other => return Err(Error::Budget(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(budget)
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Clock {
    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Error::Budget("time limit reached".into()));
                }
            }
        }
        Ok(())
    }
}

/// Every assignment of `m` items to `n` agents, exactly once, in odometer
/// order with item 0 varying fastest.
pub struct Allocations {
    n: usize,
    owners: Vec<usize>,
    done: bool,
}

impl Iterator for Allocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let mut bundles = vec![ItemSet::EMPTY; self.n];
        for (g, &a) in self.owners.iter().enumerate() {
            bundles[a].insert(g);
        }
        let out = Allocation::from_parts_unchecked(self.owners.len(), bundles);
        self.done = true;
        for a in self.owners.iter_mut() {
            *a += 1;
            if *a < self.n {
                self.done = false;
                break;
            }
            *a = 0;
        }
        Some(out)
    }
}

pub fn enumerate_allocations(n: usize, m: usize, budget: &SearchBudget) -> Result<Allocations> {
    if n == 0 {
        return Err(Error::InvalidAllocation("no agents".into()));
    }
    budget.check(n, m)?;
    Ok(Allocations {
        n,
        owners: vec![0; m],
        done: false,
    })
}

/// The per-agent fairness condition a rival bundle has to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Condition {
    Efx,
    Ef1,
}

/// Value lookups for one agent, tabulated when the item count is small.
struct Lookup<'a, T> {
    v: &'a Valuation<T>,
    table: Option<Vec<T>>,
}

const TABULATE_LIMIT: usize = 16;

impl<'a, T: Scalar> Lookup<'a, T> {
    fn new(v: &'a Valuation<T>) -> Self {
        Lookup {
            v,
            table: v.subset_values(TABULATE_LIMIT).ok(),
        }
    }

    fn value(&self, s: ItemSet) -> T {
        match &self.table {
            Some(t) => t[s.bits() as usize].clone(),
            None => self.v.value(s),
        }
    }

    fn one_less(&self, s: ItemSet) -> T {
        match &self.table {
            Some(t) => s
                .iter()
                .map(|g| &t[s.without(g).bits() as usize])
                .max_by(|a, b| a.cmp_value(b))
                .cloned()
                .unwrap_or_else(T::zero),
            None => one_less(self.v, s),
        }
    }

    fn min_less(&self, s: ItemSet) -> T {
        match &self.table {
            Some(t) => s
                .iter()
                .map(|g| &t[s.without(g).bits() as usize])
                .min_by(|a, b| a.cmp_value(b))
                .cloned()
                .unwrap_or_else(T::zero),
            None => min_less(self.v, s),
        }
    }
}

/// Whether agent `i`, holding `own`, accepts `rival` as another agent's bundle.
fn rival_ok<T: Scalar>(lookup: &Lookup<'_, T>, kind: Kind, cond: Condition, own: ItemSet, rival: ItemSet, alpha: &T) -> bool {
    let ge = |a: T, b: T| a.cmp_value(&b) != Ordering::Less;
    match (kind, cond) {
        (Kind::Goods, Condition::Efx) => ge(lookup.value(own), alpha.clone() * lookup.one_less(rival)),
        (Kind::Goods, Condition::Ef1) => rival.is_empty() || ge(lookup.value(own), lookup.min_less(rival)),
        (Kind::Chores, Condition::Efx) => ge(lookup.min_less(own), alpha.clone() * lookup.value(rival)),
        (Kind::Chores, Condition::Ef1) => own.is_empty() || ge(lookup.one_less(own), lookup.value(rival)),
    }
}

fn check_allocation<T: Scalar>(inst: &Instance<T>, x: &Allocation, agent: usize) -> Result<()> {
    if x.num_agents() != inst.num_agents() || x.num_items() != inst.num_items() {
        return Err(Error::InvalidAllocation("allocation does not match the instance".into()));
    }
    if agent >= x.num_agents() {
        return Err(Error::InvalidAllocation(format!("no agent {agent}")));
    }
    Ok(())
}

/// Searches for a redistribution of the items outside `X_agent` among the
/// other agents that satisfies `agent`.
///
/// The condition only looks at the multiset of rival bundles, so set
/// partitions of the remaining items into at most `n - 1` blocks are
/// enumerated as restricted-growth strings instead of labeled assignments.
fn epistemic_search<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    agent: usize,
    cond: Condition,
    alpha: &T,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    check_allocation(inst, x, agent)?;
    budget.check(inst.num_agents(), inst.num_items())?;
    let n = inst.num_agents();
    let own = x.bundle(agent);
    let rest: Vec<usize> = x.others(agent).iter().collect();
    let lookup = Lookup::new(inst.valuation(agent));
    let ok = |b: ItemSet| rival_ok(&lookup, inst.kind(), cond, own, b, alpha);

    if n == 1 {
        return Ok(Some(x.clone()));
    }
    let slots = n - 1;

    // Memoize the block test over subsets of the remaining items.
    let memo: Option<Vec<bool>> = (rest.len() <= TABULATE_LIMIT).then(|| {
        (0..1usize << rest.len())
            .map(|local| {
                let set: ItemSet = (0..rest.len()).filter(|b| local >> b & 1 == 1).map(|b| rest[b]).collect();
                ok(set)
            })
            .collect()
    });
    let block_ok = |local: usize| match &memo {
        Some(m) => m[local],
        None => ok((0..rest.len()).filter(|b| local >> b & 1 == 1).map(|b| rest[b]).collect()),
    };

    let mut blocks = vec![0usize; slots];
    let mut clock = budget.clock();

    fn walk(
        idx: usize,
        used: usize,
        len: usize,
        blocks: &mut [usize],
        block_ok: &dyn Fn(usize) -> bool,
        clock: &mut Clock,
    ) -> Result<bool> {
        if idx == len {
            clock.tick()?;
            // Unused slots hold empty bundles, which must be acceptable too.
            return Ok(blocks.iter().all(|&b| block_ok(b)));
        }
        let open = if used < blocks.len() { used + 1 } else { used };
        for k in 0..open {
            blocks[k] |= 1 << idx;
            if walk(idx + 1, used.max(k + 1), len, blocks, block_ok, clock)? {
                return Ok(true);
            }
            blocks[k] &= !(1 << idx);
        }
        Ok(false)
    }

    if !walk(0, 0, rest.len(), &mut blocks, &block_ok, &mut clock)? {
        return Ok(None);
    }
    let mut bundles = vec![ItemSet::EMPTY; n];
    bundles[agent] = own;
    let others = (0..n).filter(|&j| j != agent);
    for (j, local) in others.zip(blocks) {
        bundles[j] = (0..rest.len()).filter(|b| local >> b & 1 == 1).map(|b| rest[b]).collect();
    }
    Ok(Some(Allocation::from_parts_unchecked(inst.num_items(), bundles)))
}

/// Decides whether `agent` is EEFX-satisfied by `x`, returning a witness
/// allocation when they are.
pub fn is_eefx_satisfied_bruteforce<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    agent: usize,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    epistemic_search(inst, x, agent, Condition::Efx, &T::one(), budget)
}

/// The `α`-scaled variant of [`is_eefx_satisfied_bruteforce`].
pub fn is_alpha_eefx_satisfied_bruteforce<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    agent: usize,
    alpha: &T,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    epistemic_search(inst, x, agent, Condition::Efx, alpha, budget)
}

pub fn is_eefx_bruteforce<T: Scalar>(inst: &Instance<T>, x: &Allocation, budget: &SearchBudget) -> Result<bool> {
    for i in 0..inst.num_agents() {
        if is_eefx_satisfied_bruteforce(inst, x, i, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_eef1_satisfied_bruteforce<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    agent: usize,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    epistemic_search(inst, x, agent, Condition::Ef1, &T::one(), budget)
}

pub fn is_eef1_bruteforce<T: Scalar>(inst: &Instance<T>, x: &Allocation, budget: &SearchBudget) -> Result<bool> {
    for i in 0..inst.num_agents() {
        if is_eef1_satisfied_bruteforce(inst, x, i, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// EEFX decision by scanning every labeled assignment of the remaining items
/// to the other agents. Exponentially slower than
/// [`is_eefx_satisfied_bruteforce`]; kept as a cross-check.
pub fn is_eefx_satisfied_labeled<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    agent: usize,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    check_allocation(inst, x, agent)?;
    budget.check(inst.num_agents(), inst.num_items())?;
    let own = x.bundle(agent);
    let n = inst.num_agents();
    let m = inst.num_items();
    let mut clock = budget.clock();
    for y in enumerate_allocations(n, m, budget)? {
        clock.tick()?;
        if y.bundle(agent) == own && crate::fairness::is_efx_satisfied(inst, &y, agent) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// First allocation, in enumeration order, that is EFX.
pub fn find_efx_allocation<T: Scalar>(inst: &Instance<T>, budget: &SearchBudget) -> Result<Option<Allocation>> {
    find_allocation(inst, budget, |x| is_efx(inst, x))
}

/// First allocation, in enumeration order, satisfying `pred`.
pub fn find_allocation<T: Scalar>(
    inst: &Instance<T>,
    budget: &SearchBudget,
    mut pred: impl FnMut(&Allocation) -> bool,
) -> Result<Option<Allocation>> {
    let mut clock = budget.clock();
    for x in enumerate_allocations(inst.num_agents(), inst.num_items(), budget)? {
        clock.tick()?;
        if pred(&x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// First allocation giving every agent at least their maximin share.
pub fn find_mms_allocation<T: Scalar>(
    inst: &Instance<T>,
    guard: &MmsGuard,
    budget: &SearchBudget,
) -> Result<Option<Allocation>> {
    let shares = (0..inst.num_agents())
        .map(|i| mms_value(inst, i, guard).map(|m| m.value))
        .collect::<Result<Vec<T>>>()?;
    find_allocation(inst, budget, |x| {
        shares
            .iter()
            .enumerate()
            .all(|(i, s)| inst.value(i, x.bundle(i)).cmp_value(s) != Ordering::Less)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn q(n: i64) -> Value {
        Value::from_integer(n.into())
    }

    fn goods(rows: &[&[i64]]) -> Instance<Value> {
        Instance::additive(Kind::Goods, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn allocation_counts() {
        let b = SearchBudget::default();
        assert_eq!(enumerate_allocations(2, 2, &b).unwrap().count(), 4);
        assert_eq!(enumerate_allocations(3, 9, &b).unwrap().count(), 19683);
        assert_eq!(enumerate_allocations(1, 5, &b).unwrap().count(), 1);
        assert_eq!(enumerate_allocations(4, 0, &b).unwrap().count(), 1);
    }

    #[test]
    fn allocations_are_distinct() {
        let all: std::collections::HashSet<_> = enumerate_allocations(3, 4, &SearchBudget::default())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 81);
    }

    #[test]
    fn budget_is_enforced() {
        let b = SearchBudget::default();
        assert!(matches!(enumerate_allocations(10, 8, &b), Err(Error::Budget(_))));
        let tight: SearchBudget = "max_assignments=3".parse().unwrap();
        assert!(enumerate_allocations(2, 2, &tight).is_err());
        assert!("bogus=1".parse::<SearchBudget>().is_err());
        assert!("max_items".parse::<SearchBudget>().is_err());
        let parsed: SearchBudget = "max_agents=3, time_limit_ms=50".parse().unwrap();
        assert_eq!(parsed.max_agents, 3);
        assert_eq!(parsed.time_limit, Some(Duration::from_millis(50)));
    }

    #[test]
    fn two_good_counterexample_is_not_eefx() {
        let inst = goods(&[&[0, 1], &[0, 1]]);
        let x = Allocation::from_lists(2, &[vec![], vec![0, 1]]).unwrap();
        let b = SearchBudget::default();
        assert_eq!(is_eefx_satisfied_bruteforce(&inst, &x, 0, &b).unwrap(), None);
        assert!(!is_eefx_bruteforce(&inst, &x, &b).unwrap());
        assert_eq!(is_eefx_satisfied_labeled(&inst, &x, 0, &b).unwrap(), None);
    }

    #[test]
    fn single_agent_is_trivially_satisfied() {
        let inst = goods(&[&[1, 2]]);
        let x = Allocation::all_to(1, 2, 0);
        assert!(is_eefx_bruteforce(&inst, &x, &SearchBudget::default()).unwrap());
        assert!(is_eef1_bruteforce(&inst, &x, &SearchBudget::default()).unwrap());
    }

    #[test]
    fn eef1_with_two_agents_is_ef1() {
        let row: &[i64] = &[1, 1, 1, 2, 2, 2];
        let inst = goods(&[row, row]);
        let x = Allocation::from_lists(6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let b = SearchBudget::default();
        assert_eq!(is_eef1_satisfied_bruteforce(&inst, &x, 0, &b).unwrap(), None);
        assert!(is_eef1_satisfied_bruteforce(&inst, &x, 1, &b).unwrap().is_some());
    }

    #[test]
    fn witness_keeps_agent_bundle() {
        let inst = goods(&[&[5, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]]);
        let x = Allocation::from_lists(4, &[vec![0], vec![1, 2, 3], vec![]]).unwrap();
        let w = is_eefx_satisfied_bruteforce(&inst, &x, 0, &SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.bundle(0), x.bundle(0));
        assert!(crate::fairness::is_efx_satisfied(&inst, &w, 0));
    }

    #[test]
    fn finds_efx_for_single_valuable_good() {
        let inst = goods(&[&[7], &[7]]);
        let x = find_efx_allocation(&inst, &SearchBudget::default()).unwrap().unwrap();
        assert!(is_efx(&inst, &x));
    }
}
