//! Exact maximin shares by exhaustive partition search.

use std::cmp::Ordering;

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::instance::{Instance, Kind};
use crate::items::ItemSet;
use crate::scalar::Scalar;

/// Size limits for exhaustive maximin-share search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmsGuard {
    pub max_items: usize,
    pub max_agents: usize,
}

impl Default for MmsGuard {
    fn default() -> Self {
        MmsGuard {
            max_items: 12,
            max_agents: 4,
        }
    }
}

impl MmsGuard {
    pub fn admits<T: Scalar>(&self, inst: &Instance<T>) -> bool {
        inst.num_items() <= self.max_items && inst.num_agents() <= self.max_agents
    }

    fn check<T: Scalar>(&self, inst: &Instance<T>) -> Result<()> {
        if self.admits(inst) {
            Ok(())
        } else {
            Err(Error::Budget(format!(
                "maximin share search limited to {} items and {} agents (instance has {} and {})",
                self.max_items,
                self.max_agents,
                inst.num_items(),
                inst.num_agents()
            )))
        }
    }
}

/// A maximin share together with a partition attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximinShare<T> {
    pub value: T,
    pub partition: Vec<ItemSet>,
}

/// `max` over partitions of the items into `n` bundles (empty bundles
/// allowed) of the least valuable bundle under `v_agent`.
///
/// Bundles are unlabeled, so only restricted-growth labelings are visited:
/// item `g` may join an open bundle or open the next one.
pub fn mms_value<T: Scalar>(inst: &Instance<T>, agent: usize, guard: &MmsGuard) -> Result<MaximinShare<T>> {
    if inst.kind() != Kind::Goods {
        return Err(Error::WrongKind("goods"));
    }
    guard.check(inst)?;
    let values = inst.valuation(agent).subset_values(guard.max_items)?;
    let n = inst.num_agents();
    let m = inst.num_items();

    struct Search<'a, T> {
        values: &'a [T],
        n: usize,
        m: usize,
        blocks: Vec<usize>,
        best: Option<(T, Vec<usize>)>,
    }

    impl<T: Scalar> Search<'_, T> {
        fn run(&mut self, g: usize, used: usize) {
            if g == self.m {
                let worst = self.blocks[..self.n]
                    .iter()
                    .map(|&b| &self.values[b])
                    .min_by(|a, b| a.cmp_value(b))
                    .expect("at least one bundle");
                let better = self
                    .best
                    .as_ref()
                    .is_none_or(|(v, _)| worst.cmp_value(v) == Ordering::Greater);
                if better {
                    self.best = Some((worst.clone(), self.blocks.clone()));
                }
                return;
            }
            let open = if used < self.n { used + 1 } else { used };
            for k in 0..open {
                self.blocks[k] |= 1 << g;
                self.run(g + 1, used.max(k + 1));
                self.blocks[k] &= !(1 << g);
            }
        }
    }

    let mut search = Search {
        values: &values,
        n,
        m,
        blocks: vec![0; n],
        best: None,
    };
    search.run(0, 0);
    let (value, blocks) = search.best.expect("at least one partition exists");
    Ok(MaximinShare {
        value,
        partition: blocks.into_iter().map(|b| ItemSet::from_bits(b as u64)).collect(),
    })
}

/// `v_i(X_i) >= α·MMS_i` for every agent.
pub fn is_alpha_mms<T: Scalar>(inst: &Instance<T>, x: &Allocation, alpha: &T, guard: &MmsGuard) -> Result<bool> {
    for i in 0..inst.num_agents() {
        let mms = mms_value(inst, i, guard)?;
        if inst.value(i, x.bundle(i)).cmp_value(&(alpha.clone() * mms.value)) == Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}
