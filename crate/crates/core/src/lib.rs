//! Fair division of indivisible items: EEFX allocations with per-agent
//! certificates for goods and chores, exact checkers for the EFX / EF1 /
//! PROP1 / PROPm / PROPx / MMS family, and exhaustive oracles for small
//! instances.
//!
//! All algorithms are generic over a [`Scalar`]. Use the [`Value`] based
//! aliases (exact rationals) whenever the verdicts matter; the `f64` aliases
//! exist for quick experiments.
//!
//! Agents and items are zero-based throughout the library.
//!
//! ```
//! use fairdiv::{bar_kri, fairness::is_efx_satisfied, Instance, Kind, SolveOptions, Value};
//!
//! let q = |x: i64| Value::from_integer(x.into());
//! let inst = Instance::additive(
//!     Kind::Goods,
//!     vec![vec![q(5), q(3), q(1)], vec![q(2), q(9), q(4)]],
//! )
//! .unwrap();
//! let out = bar_kri(&inst, SolveOptions::default()).unwrap();
//! for cert in &out.certificates {
//!     assert_eq!(cert.witness.bundle(cert.agent), out.allocation.bundle(cert.agent));
//!     assert!(is_efx_satisfied(&inst, &cert.witness, cert.agent));
//! }
//! ```

pub mod alloc;
pub mod correlation;
pub mod eefx;
pub mod error;
pub mod fairness;
pub mod instance;
pub mod items;
pub mod oracle;
pub mod ordered_efx;
pub mod scalar;
pub mod valuation;

pub use alloc::{pick_by_list, Allocation, AllocationVector};
pub use correlation::max_correlation;
pub use eefx::{
    bar_kri, certificate_from_pipeline, eefx_certificate_chores, eefx_certificate_goods, verify_certificate,
    Certificate, SolveOptions, SolveResult,
};
pub use error::{Error, Result};
pub use instance::{Instance, Kind};
pub use items::ItemSet;
pub use ordered_efx::{efx_ordered_chores, efx_ordered_goods, EnvyGraph};
pub use scalar::Scalar;
pub use valuation::{
    dominates, is_cancelable, one_less, ordered_valuation, AdditiveValuation, CancelViolation, OrderingPermutation,
    TableValuation, Valuation, DEFAULT_TABLE_LIMIT,
};

/// Exact rational scalar used for every fairness decision.
pub type Value = num_rational::BigRational;

pub type RationalInstance = Instance<Value>;
pub type RationalValuation = Valuation<Value>;
pub type RationalSolveResult = SolveResult;
pub type RationalFairnessReport = fairness::FairnessReport<Value>;

pub type FloatInstance = Instance<f64>;
pub type FloatValuation = Valuation<f64>;
pub type FloatFairnessReport = fairness::FairnessReport<f64>;
