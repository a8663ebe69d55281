//! Turning a maximin-share guarantee into an EEFX certificate.
//!
//! Agent `k` keeps their bundle. While some rival bundle `Y_j` still has
//! `max_g v(Y_j \ g) > v(Y_k)`, the item whose removal leaves the most value
//! is moved out of the worst such bundle into a rival bundle worth at most
//! `v(Y_k)`. Under strong monotonicity such a rival bundle always exists when
//! `v(Y_k) >= MMS_k`, and the potential [`PhiPotential`] falls
//! lexicographically with every move.

use std::cmp::Ordering;

use crate::alloc::Allocation;
use crate::eefx::Certificate;
use crate::error::{Error, Result};
use crate::fairness::mms::{mms_value, MmsGuard};
use crate::instance::{Instance, Kind};
use crate::items::ItemSet;
use crate::scalar::{max_of, Scalar};
use crate::valuation::{one_less, Valuation};

/// Progress measure of the conversion, compared lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiPotential<T> {
    /// Rivals `j` with `v(Y_j) <= v(Y_k)`.
    pub weak_rivals: usize,
    /// `max_{j != k} max_g v(Y_j \ g)`.
    pub top: T,
    /// Rivals attaining `top`.
    pub at_top: usize,
}

impl<T: Scalar> PhiPotential<T> {
    pub fn of(v: &Valuation<T>, bundles: &[ItemSet], agent: usize) -> Self {
        let own = v.value(bundles[agent]);
        let rivals = || (0..bundles.len()).filter(move |&j| j != agent);
        let weak_rivals = rivals()
            .filter(|&j| v.value(bundles[j]).cmp_value(&own) != Ordering::Greater)
            .count();
        let top = max_of(rivals().map(|j| one_less(v, bundles[j]))).unwrap_or_else(T::zero);
        let at_top = rivals()
            .filter(|&j| one_less(v, bundles[j]).cmp_value(&top) == Ordering::Equal)
            .count();
        PhiPotential {
            weak_rivals,
            top,
            at_top,
        }
    }

    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.weak_rivals
            .cmp(&other.weak_rivals)
            .then_with(|| self.top.cmp_value(&other.top))
            .then(self.at_top.cmp(&other.at_top))
    }
}

/// The certificate plus the potential recorded before every move and at exit.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsConversion<T> {
    pub certificate: Certificate,
    pub potentials: Vec<PhiPotential<T>>,
}

/// `argmax_{g ∈ S} v(S \ g)`, smallest index on ties.
fn top_item<T: Scalar>(v: &Valuation<T>, set: ItemSet) -> Option<usize> {
    set.iter().fold(None, |best: Option<(usize, T)>, g| {
        let rest = v.value(set.without(g));
        match best {
            Some((b, bv)) if bv.cmp_value(&rest) != Ordering::Less => Some((b, bv)),
            _ => Some((g, rest)),
        }
    })
    .map(|(g, _)| g)
}

/// Builds an EEFX certificate for agent `k` from an allocation in which `k`
/// receives at least their maximin share.
///
/// Requires a goods instance and a strongly monotone `v_k`; the maximin share
/// is computed exactly within `guard`.
pub fn mms_to_eefx_certificate<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    k: usize,
    guard: &MmsGuard,
) -> Result<MmsConversion<T>> {
    if inst.kind() != Kind::Goods {
        return Err(Error::WrongKind("goods"));
    }
    if x.num_agents() != inst.num_agents() || x.num_items() != inst.num_items() || k >= x.num_agents() {
        return Err(Error::InvalidAllocation("allocation does not match the instance".into()));
    }
    let v = inst.valuation(k);
    if !v.is_strongly_monotone() {
        return Err(Error::NotStronglyMonotone { agent: k });
    }
    let mms = mms_value(inst, k, guard)?.value;
    let own = v.value(x.bundle(k));
    if own.cmp_value(&mms) == Ordering::Less {
        return Err(Error::BelowMaximinShare {
            agent: k,
            bundle: own.to_string(),
            mms: mms.to_string(),
        });
    }

    let mut bundles = x.bundles().to_vec();
    let mut potentials = vec![PhiPotential::of(v, &bundles, k)];
    // Each move lowers the potential, whose range is finite; this is a
    // generous ceiling that only trips on a logic error.
    let max_moves = (x.num_agents() + 1) * (1usize << x.num_items().min(20)) * (x.num_agents() + 1);
    loop {
        let phi = potentials.last().expect("initial potential");
        if phi.top.cmp_value(&own) != Ordering::Greater {
            break;
        }
        if potentials.len() > max_moves {
            return Err(Error::Internal("conversion failed to terminate".into()));
        }
        let source = (0..bundles.len())
            .filter(|&j| j != k)
            .find(|&j| one_less(v, bundles[j]).cmp_value(&phi.top) == Ordering::Equal)
            .expect("some rival attains the maximum");
        let receiver = (0..bundles.len())
            .filter(|&j| j != k)
            .find(|&j| v.value(bundles[j]).cmp_value(&own) != Ordering::Greater)
            .ok_or_else(|| {
                Error::Internal(format!(
                    "every rival outvalues agent {k}'s bundle, contradicting the maximin share"
                ))
            })?;
        let g = top_item(v, bundles[source]).expect("source bundle is nonempty");
        bundles[source].remove(g);
        bundles[receiver].insert(g);

        let next = PhiPotential::of(v, &bundles, k);
        if next.lex_cmp(phi) != Ordering::Less {
            return Err(Error::Internal(format!(
                "potential did not decrease: {phi:?} -> {next:?}"
            )));
        }
        potentials.push(next);
    }

    let witness = Allocation::new(x.num_items(), bundles)?;
    if !crate::eefx::verify_certificate(inst, x, &witness, k) {
        return Err(Error::Internal(format!("converted allocation does not EFX-satisfy agent {k}")));
    }
    Ok(MmsConversion {
        certificate: Certificate {
            agent: k,
            witness,
            basis: None,
        },
        potentials,
    })
}
