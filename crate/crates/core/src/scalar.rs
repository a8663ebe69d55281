//! Numeric scalar abstraction.
//!
//! Every algorithm in the crate is written against [`Scalar`], so the same
//! code runs over exact rationals (the default, see [`crate::Value`]) and over
//! `f64` for quick experiments. Fairness verdicts are only trustworthy with an
//! exact scalar: floating point rounding turns ties into spurious strict
//! inequalities.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A totally comparable number supporting field arithmetic.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
    /// Total comparison. Incomparable values (NaN) compare equal; instances
    /// reject them at construction so this never matters in practice.
    fn cmp_value(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// `false` for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }
}

impl Scalar for num_rational::BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for num_rational::Rational64 {
    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

/// Largest element by [`Scalar::cmp_value`]; the first one wins ties.
pub(crate) fn max_of<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<T> {
    values.into_iter().fold(None, |best, x| match best {
        Some(b) if b.cmp_value(&x) != Ordering::Less => Some(b),
        _ => Some(x),
    })
}

/// Smallest element by [`Scalar::cmp_value`]; the first one wins ties.
pub(crate) fn min_of<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<T> {
    values.into_iter().fold(None, |best, x| match best {
        Some(b) if b.cmp_value(&x) != Ordering::Greater => Some(b),
        _ => Some(x),
    })
}
