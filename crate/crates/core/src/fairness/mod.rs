//! Fairness notions, exact maximin shares, and the maximin-share to EEFX
//! conversion.

mod checks;
mod convert;
mod mms;
mod report;

pub use checks::{
    alpha_efx_rival, ef1_rival, efx_rival, is_alpha_efx, is_alpha_efx_satisfied, is_ef1, is_ef1_satisfied, is_efx,
    is_efx_satisfied, is_prop1, is_prop_satisfied, is_propm, is_propx, prop_threshold, PropNotion,
};
pub use convert::{mms_to_eefx_certificate, MmsConversion, PhiPotential};
pub use mms::{is_alpha_mms, mms_value, MaximinShare, MmsGuard};
pub use report::{fairness_report, AgentReport, FairnessReport};
