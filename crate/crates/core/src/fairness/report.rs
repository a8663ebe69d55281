use crate::alloc::Allocation;
use crate::correlation::max_correlation;
use crate::error::Error;
use crate::instance::{Instance, Kind};
use crate::scalar::Scalar;
use crate::valuation::Valuation;

use super::checks::{is_ef1_satisfied, is_efx_satisfied, is_prop_satisfied, PropNotion};
use super::mms::{mms_value, MmsGuard};

/// Per-agent verdicts. Proportionality and maximin fields are `None` for
/// chores instances, and the maximin fields also when the instance is outside
/// the search guard.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentReport<T> {
    pub efx: bool,
    pub ef1: bool,
    pub prop1: Option<bool>,
    pub propm: Option<bool>,
    pub propx: Option<bool>,
    pub bundle_value: T,
    pub mms_value: Option<T>,
    /// `bundle_value / mms_value`; `None` when the share is zero or unknown.
    pub mms_ratio: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport<T> {
    pub agents: Vec<AgentReport<T>>,
    pub is_efx: bool,
    pub is_ef1: bool,
    /// Largest correlation factor of the valuations (of the disutilities for
    /// chores). `Some(0)` when no positive factor exists, `None` when the
    /// instance is too large to expand.
    pub alpha_correlation: Option<T>,
}

pub fn fairness_report<T: Scalar>(
    inst: &Instance<T>,
    x: &Allocation,
    guard: &MmsGuard,
    table_limit: usize,
) -> FairnessReport<T> {
    let goods = inst.kind() == Kind::Goods;
    let with_mms = goods && guard.admits(inst);
    let agents: Vec<AgentReport<T>> = (0..inst.num_agents())
        .map(|i| {
            let prop = |notion| goods.then(|| is_prop_satisfied(inst, x, i, notion).unwrap_or(false));
            let bundle_value = inst.value(i, x.bundle(i));
            let mms = with_mms
                .then(|| mms_value(inst, i, guard).ok().map(|m| m.value))
                .flatten();
            let mms_ratio = mms
                .as_ref()
                .filter(|m| !m.is_zero())
                .map(|m| bundle_value.clone() / m.clone());
            AgentReport {
                efx: is_efx_satisfied(inst, x, i),
                ef1: is_ef1_satisfied(inst, x, i),
                prop1: prop(PropNotion::Prop1),
                propm: prop(PropNotion::PropM),
                propx: prop(PropNotion::PropX),
                bundle_value,
                mms_value: mms,
                mms_ratio,
            }
        })
        .collect();

    let valuations: Vec<Valuation<T>> = match inst.kind() {
        Kind::Goods => inst.valuations().to_vec(),
        Kind::Chores => inst.valuations().iter().map(Valuation::negated).collect(),
    };
    let alpha_correlation = match max_correlation(&valuations, table_limit) {
        Ok(a) => Some(a),
        Err(Error::CorrelationViolation { .. }) => Some(T::zero()),
        Err(_) => None,
    };

    FairnessReport {
        is_efx: agents.iter().all(|a| a.efx),
        is_ef1: agents.iter().all(|a| a.ef1),
        agents,
        alpha_correlation,
    }
}
