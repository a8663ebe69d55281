//! EEFX allocations through the ordered-instance reduction, with a
//! certificate per agent.
//!
//! The solver orders every agent's valuation, computes an EFX allocation `X'`
//! of the ordered instance, and replays its allocation vector as a picking
//! sequence on the real valuations to obtain `X`. Agent `i`'s certificate
//! keeps `X_i` and redistributes the remaining items so that the `k`-th most
//! valuable of them (to `i`) lands where `X'` placed the `k`-th most
//! valuable item outside `X'_i`.

use crate::alloc::{pick_by_list, Allocation, AllocationVector};
use crate::error::{Error, Result};
use crate::fairness::is_efx_satisfied;
use crate::instance::{Instance, Kind};
use crate::items::ItemSet;
use crate::ordered_efx::{efx_ordered_chores, efx_ordered_goods};
use crate::scalar::Scalar;
use crate::valuation::{ordered_valuation, OrderingPermutation};

/// An allocation `Y` with `Y_agent = X_agent` under which `agent` is
/// EFX-satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub agent: usize,
    pub witness: Allocation,
    /// The ordered-stage allocation the witness was derived from, when it came
    /// out of the solver pipeline.
    pub basis: Option<Allocation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Build and verify a certificate for every agent.
    pub certificates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { certificates: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// The EEFX allocation.
    pub allocation: Allocation,
    /// EFX allocation of the ordered instance. Item `k` here is each agent's
    /// `k`-th most valuable item.
    pub stage1: Allocation,
    /// Allocation vector of `stage1`, used as the picking sequence.
    pub sequence: AllocationVector,
    /// Each agent's relabeling from ranks to items.
    pub orderings: Vec<OrderingPermutation>,
    /// One per agent, in agent order; empty when disabled.
    pub certificates: Vec<Certificate>,
}

/// Computes an EEFX allocation for non-negative (goods) or non-positive
/// (chores) cancelable valuations.
pub fn bar_kri<T: Scalar>(inst: &Instance<T>, opts: SolveOptions) -> Result<SolveResult> {
    let (ordered, orderings) = inst.ordered();
    let stage1 = match inst.kind() {
        Kind::Goods => efx_ordered_goods(&ordered)?,
        Kind::Chores => efx_ordered_chores(&ordered)?,
    };
    let sequence = stage1.vector();
    let allocation = pick_by_list(&sequence, inst.valuations())?;
    let certificates = if opts.certificates {
        (0..inst.num_agents())
            .map(|i| build_certificate(inst, &allocation, &stage1, &orderings[i], i))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(SolveResult {
        allocation,
        stage1,
        sequence,
        orderings,
        certificates,
    })
}

/// Certificate for `agent` on a goods instance, given the pipeline output `x`
/// and the ordered-stage allocation `stage1` it came from.
pub fn eefx_certificate_goods<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    stage1: &Allocation,
    agent: usize,
) -> Result<Certificate> {
    if inst.kind() != Kind::Goods {
        return Err(Error::WrongKind("goods"));
    }
    certificate_from_pipeline(inst, x, stage1, agent)
}

/// Chores counterpart of [`eefx_certificate_goods`]. Sorting by disutility
/// ascending is the same as sorting by value descending, so the construction
/// is shared.
pub fn eefx_certificate_chores<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    stage1: &Allocation,
    agent: usize,
) -> Result<Certificate> {
    if inst.kind() != Kind::Chores {
        return Err(Error::WrongKind("chores"));
    }
    certificate_from_pipeline(inst, x, stage1, agent)
}

/// Kind-dispatching certificate construction. Checks that `x` really is the
/// picking-sequence replay of `stage1`.
pub fn certificate_from_pipeline<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    stage1: &Allocation,
    agent: usize,
) -> Result<Certificate> {
    check_shapes(inst, x)?;
    check_shapes(inst, stage1)?;
    if agent >= inst.num_agents() {
        return Err(Error::InvalidAllocation(format!("no agent {agent}")));
    }
    let replay = pick_by_list(&stage1.vector(), inst.valuations())?;
    if &replay != x {
        return Err(Error::InvalidAllocation(
            "allocation is not the picking-sequence replay of the ordered-stage allocation".into(),
        ));
    }
    let (_, ordering) = ordered_valuation(inst.valuation(agent));
    build_certificate(inst, x, stage1, &ordering, agent)
}

fn check_shapes<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> Result<()> {
    if x.num_agents() != inst.num_agents() || x.num_items() != inst.num_items() {
        return Err(Error::InvalidAllocation(format!(
            "allocation covers {} agents and {} items, instance has {} and {}",
            x.num_agents(),
            x.num_items(),
            inst.num_agents(),
            inst.num_items()
        )));
    }
    Ok(())
}

fn build_certificate<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    stage1: &Allocation,
    ordering: &OrderingPermutation,
    agent: usize,
) -> Result<Certificate> {
    let v = inst.valuation(agent);
    // Stage-1 bundles relabeled into real items from this agent's viewpoint.
    let basis: Vec<ItemSet> = stage1.bundles().iter().map(|&b| ordering.to_items(b)).collect();
    let all = inst.all_items();
    let targets = v.sorted_items(all.difference(basis[agent]));
    let received = v.sorted_items(x.others(agent));
    if targets.len() != received.len() {
        return Err(Error::Internal(format!(
            "agent {agent} holds {} items but picked in {} rounds",
            x.bundle(agent).len(),
            basis[agent].len()
        )));
    }

    let mut bundles = vec![ItemSet::EMPTY; inst.num_agents()];
    bundles[agent] = x.bundle(agent);
    for (&t, &g) in targets.iter().zip(&received) {
        let holder = basis
            .iter()
            .position(|b| b.contains(t))
            .expect("stage-1 allocation covers every item");
        bundles[holder].insert(g);
    }
    let witness = Allocation::from_parts_unchecked(inst.num_items(), bundles);
    if !verify_certificate(inst, x, &witness, agent) {
        return Err(Error::Internal(format!(
            "certificate for agent {agent} does not EFX-satisfy them"
        )));
    }
    Ok(Certificate {
        agent,
        witness,
        basis: Some(stage1.clone()),
    })
}

/// `y` keeps `agent`'s bundle from `x` and EFX-satisfies `agent`.
pub fn verify_certificate<T: Scalar>(inst: &Instance<T>, x: &Allocation, y: &Allocation, agent: usize) -> bool {
    agent < x.num_agents()
        && x.num_agents() == y.num_agents()
        && x.num_items() == y.num_items()
        && y.bundle(agent) == x.bundle(agent)
        && is_efx_satisfied(inst, y, agent)
}
