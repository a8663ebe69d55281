//! EFX allocations for ordered instances, where every agent ranks the items
//! `0, 1, .., m-1` from most to least valuable.
//!
//! Goods use envy-cycle elimination: items are handed out in order to an
//! agent nobody envies, rotating bundles along an envy cycle whenever every
//! agent is envied. Chores use the top-trading variant: chores are handed out
//! from the most to the least burdensome to an agent who envies nobody, and
//! when everyone envies someone, agents swap along a cycle of favourite
//! bundles.

use std::cmp::Ordering;

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::fairness::efx_rival;
use crate::instance::{Instance, Kind};
use crate::items::ItemSet;
use crate::scalar::Scalar;
use crate::valuation::DEFAULT_TABLE_LIMIT;

/// Envy relation over the agents for a partial allocation.
///
/// `envies[i][j]` holds when `v_i(X_i) < v_i(X_j)`, which for chores is the
/// same as `d_i(X_i) > d_i(X_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyGraph {
    envies: Vec<Vec<bool>>,
}

impl EnvyGraph {
    pub fn new<T: Scalar>(inst: &Instance<T>, bundles: &[ItemSet]) -> Self {
        let n = bundles.len();
        let envies = (0..n)
            .map(|i| {
                let own = inst.value(i, bundles[i]);
                (0..n)
                    .map(|j| j != i && own.cmp_value(&inst.value(i, bundles[j])) == Ordering::Less)
                    .collect()
            })
            .collect();
        EnvyGraph { envies }
    }

    pub fn envies(&self, i: usize, j: usize) -> bool {
        self.envies[i][j]
    }

    /// Agents nobody envies, increasing.
    pub fn unenvied(&self) -> Vec<usize> {
        let n = self.envies.len();
        (0..n).filter(|&j| (0..n).all(|i| !self.envies[i][j])).collect()
    }

    /// Agents who envy nobody, increasing.
    pub fn envy_free(&self) -> Vec<usize> {
        (0..self.envies.len())
            .filter(|&i| !self.envies[i].iter().any(|&e| e))
            .collect()
    }

    /// Finds a cycle given a successor rule that is total on every agent.
    /// Returns agents `c_0, .., c_k` with `next(c_t) = c_{t+1}` and
    /// `next(c_k) = c_0`.
    fn cycle_from(n: usize, mut next: impl FnMut(usize) -> usize) -> Vec<usize> {
        let mut seen = vec![usize::MAX; n];
        let mut path = Vec::new();
        let mut cur = 0;
        while seen[cur] == usize::MAX {
            seen[cur] = path.len();
            path.push(cur);
            cur = next(cur);
        }
        path.split_off(seen[cur])
    }
}

fn check_input<T: Scalar>(inst: &Instance<T>, kind: Kind) -> Result<()> {
    if inst.kind() != kind {
        return Err(Error::WrongKind(kind.name()));
    }
    inst.check_ordered()?;
    if !inst.check_cancelable(DEFAULT_TABLE_LIMIT)? {
        log::warn!(
            "skipping cancelability check: {} items exceed the table limit of {DEFAULT_TABLE_LIMIT}",
            inst.num_items()
        );
    }
    Ok(())
}

fn verified<T: Scalar>(inst: &Instance<T>, bundles: Vec<ItemSet>) -> Result<Allocation> {
    let x = Allocation::new(inst.num_items(), bundles)?;
    for i in 0..inst.num_agents() {
        if let Some(j) = efx_rival(inst, &x, i) {
            return Err(Error::Internal(format!(
                "ordered {} solver produced an allocation where agent {i} is not EFX-satisfied against agent {j}",
                inst.kind().name()
            )));
        }
    }
    Ok(x)
}

/// EFX allocation of an ordered goods instance by envy-cycle elimination.
///
/// Each item goes to the smallest-index agent nobody envies. When every agent
/// is envied, the cycle reached by repeatedly stepping from agent 0 to its
/// smallest-index envier is rotated: everyone on it takes the bundle they
/// envy.
pub fn efx_ordered_goods<T: Scalar>(inst: &Instance<T>) -> Result<Allocation> {
    check_input(inst, Kind::Goods)?;
    let n = inst.num_agents();
    let mut bundles = vec![ItemSet::EMPTY; n];
    for g in 0..inst.num_items() {
        let recipient = loop {
            let graph = EnvyGraph::new(inst, &bundles);
            if let Some(&source) = graph.unenvied().first() {
                break source;
            }
            let cycle = EnvyGraph::cycle_from(n, |j| {
                (0..n).find(|&i| graph.envies(i, j)).expect("every agent is envied")
            });
            // c_{t+1} envies c_t, so c_{t+1} takes X_{c_t}.
            let before: Vec<ItemSet> = cycle.iter().map(|&c| bundles[c]).collect();
            for (t, &bundle) in before.iter().enumerate() {
                let envier = cycle[(t + 1) % cycle.len()];
                debug_assert!(
                    inst.value(envier, bundle).cmp_value(&inst.value(envier, bundles[envier]))
                        == Ordering::Greater
                );
                bundles[envier] = bundle;
            }
        };
        bundles[recipient].insert(g);
    }
    verified(inst, bundles)
}

/// EFX allocation of an ordered chores instance by top-trading envy-cycle
/// elimination.
///
/// Chores are processed from `m-1` down to `0`, i.e. by non-increasing
/// disutility. Each goes to the smallest-index agent who envies nobody. When
/// no such agent exists, every agent points at their favourite bundle
/// (smallest index on ties), which is never their own, and the cycle reached
/// from agent 0 is rotated so each agent on it receives their favourite.
pub fn efx_ordered_chores<T: Scalar>(inst: &Instance<T>) -> Result<Allocation> {
    check_input(inst, Kind::Chores)?;
    let n = inst.num_agents();
    let mut bundles = vec![ItemSet::EMPTY; n];
    for g in (0..inst.num_items()).rev() {
        let recipient = loop {
            let graph = EnvyGraph::new(inst, &bundles);
            if let Some(&sink) = graph.envy_free().first() {
                break sink;
            }
            let before = bundles.clone();
            let cycle = EnvyGraph::cycle_from(n, |i| favourite_in(inst, &before, i));
            for &c in &cycle {
                let target = favourite_in(inst, &before, c);
                debug_assert!(
                    inst.value(c, before[target]).cmp_value(&inst.value(c, before[c])) == Ordering::Greater
                );
                bundles[c] = before[target];
            }
        };
        bundles[recipient].insert(g);
    }
    verified(inst, bundles)
}

/// The bundle agent `i` values most, smallest index on ties.
fn favourite_in<T: Scalar>(inst: &Instance<T>, bundles: &[ItemSet], i: usize) -> usize {
    (0..bundles.len())
        .max_by(|&a, &b| {
            inst.value(i, bundles[a])
                .cmp_value(&inst.value(i, bundles[b]))
                .then(b.cmp(&a))
        })
        .expect("at least one agent")
}
