//! Envy-based and proportionality-based fairness predicates.
//!
//! For chores instances the envy notions are stated over the disutility
//! `d = -v`: agent `i` is EFX-satisfied when removing any chore from their own
//! bundle leaves it no worse than every other bundle.

use std::cmp::Ordering;

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::instance::{Instance, Kind};
use crate::scalar::{max_of, min_of, Scalar};
use crate::valuation::{min_less, one_less};

fn ge<T: Scalar>(a: &T, b: &T) -> bool {
    a.cmp_value(b) != Ordering::Less
}

/// First rival `j` against whom agent `i` violates the `α`-scaled EFX
/// condition, if any.
///
/// Goods: `v_i(X_i) >= α·max_{g ∈ X_j} v_i(X_j \ g)`.
/// Chores: `max_{c ∈ X_i} d_i(X_i \ c) <= α·d_i(X_j)`.
pub fn alpha_efx_rival<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize, alpha: &T) -> Option<usize> {
    let v = inst.valuation(i);
    let own = x.bundle(i);
    match inst.kind() {
        Kind::Goods => {
            let mine = v.value(own);
            (0..x.num_agents())
                .filter(|&j| j != i)
                .find(|&j| !ge(&mine, &(alpha.clone() * one_less(v, x.bundle(j)))))
        }
        Kind::Chores => {
            // -min_less(v, X_i) <= α·(-v(X_j))  ⟺  min_less(v, X_i) >= α·v(X_j)
            let relieved = min_less(v, own);
            (0..x.num_agents())
                .filter(|&j| j != i)
                .find(|&j| !ge(&relieved, &(alpha.clone() * v.value(x.bundle(j)))))
        }
    }
}

pub fn efx_rival<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize) -> Option<usize> {
    alpha_efx_rival(inst, x, i, &T::one())
}

pub fn is_efx_satisfied<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize) -> bool {
    efx_rival(inst, x, i).is_none()
}

pub fn is_efx<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> bool {
    (0..x.num_agents()).all(|i| is_efx_satisfied(inst, x, i))
}

pub fn is_alpha_efx_satisfied<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize, alpha: &T) -> bool {
    alpha_efx_rival(inst, x, i, alpha).is_none()
}

pub fn is_alpha_efx<T: Scalar>(inst: &Instance<T>, x: &Allocation, alpha: &T) -> bool {
    (0..x.num_agents()).all(|i| is_alpha_efx_satisfied(inst, x, i, alpha))
}

/// First rival violating EF1 for agent `i`.
///
/// Goods: `X_j = ∅` or `v_i(X_i) >= min_{g ∈ X_j} v_i(X_j \ g)`.
/// Chores: `X_i = ∅` or `min_{c ∈ X_i} d_i(X_i \ c) <= d_i(X_j)`.
pub fn ef1_rival<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize) -> Option<usize> {
    let v = inst.valuation(i);
    let own = x.bundle(i);
    let rivals = (0..x.num_agents()).filter(move |&j| j != i);
    match inst.kind() {
        Kind::Goods => {
            let mine = v.value(own);
            rivals
                .filter(|&j| !x.bundle(j).is_empty())
                .find(|&j| !ge(&mine, &min_less(v, x.bundle(j))))
        }
        Kind::Chores => {
            if own.is_empty() {
                return None;
            }
            let relieved = one_less(v, own);
            rivals.into_iter().find(|&j| !ge(&relieved, &v.value(x.bundle(j))))
        }
    }
}

pub fn is_ef1_satisfied<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize) -> bool {
    ef1_rival(inst, x, i).is_none()
}

pub fn is_ef1<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> bool {
    (0..x.num_agents()).all(|i| is_ef1_satisfied(inst, x, i))
}

/// Which relaxation of proportionality to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropNotion {
    /// Relief: the most valuable item outside the agent's bundle.
    Prop1,
    /// Relief: the largest, over nonempty rival bundles, of that bundle's least valuable item.
    PropM,
    /// Relief: the least valuable item outside the agent's bundle.
    PropX,
}

/// The bound `v_i(M)/n - relief` agent `i`'s bundle must reach.
pub fn prop_threshold<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize, notion: PropNotion) -> Result<T> {
    if inst.kind() != Kind::Goods {
        return Err(Error::WrongKind("goods"));
    }
    let v = inst.valuation(i);
    let share = v.value(inst.all_items()) / T::from_count(x.num_agents());
    let outside = x.others(i);
    let relief = match notion {
        PropNotion::Prop1 => max_of(outside.iter().map(|g| v.item_value(g))),
        PropNotion::PropX => min_of(outside.iter().map(|g| v.item_value(g))),
        PropNotion::PropM => max_of(
            (0..x.num_agents())
                .filter(|&j| j != i && !x.bundle(j).is_empty())
                .filter_map(|j| min_of(x.bundle(j).iter().map(|g| v.item_value(g)))),
        ),
    }
    .unwrap_or_else(T::zero);
    Ok(share - relief)
}

pub fn is_prop_satisfied<T: Scalar>(inst: &Instance<T>, x: &Allocation, i: usize, notion: PropNotion) -> Result<bool> {
    let threshold = prop_threshold(inst, x, i, notion)?;
    Ok(ge(&inst.value(i, x.bundle(i)), &threshold))
}

fn all_agents<T: Scalar>(inst: &Instance<T>, x: &Allocation, notion: PropNotion) -> Result<bool> {
    for i in 0..x.num_agents() {
        if !is_prop_satisfied(inst, x, i, notion)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_prop1<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> Result<bool> {
    all_agents(inst, x, PropNotion::Prop1)
}

pub fn is_propm<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> Result<bool> {
    all_agents(inst, x, PropNotion::PropM)
}

pub fn is_propx<T: Scalar>(inst: &Instance<T>, x: &Allocation) -> Result<bool> {
    all_agents(inst, x, PropNotion::PropX)
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

    fn alloc(m: usize, lists: &[&[usize]]) -> Allocation {
        Allocation::from_lists(m, &lists.iter().map(|l| l.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_agent_always_fair() {
        let inst = goods(&[&[3, 1]]);
        let x = Allocation::all_to(1, 2, 0);
        assert!(is_efx(&inst, &x));
        assert!(is_ef1(&inst, &x));
        assert!(is_prop1(&inst, &x).unwrap());
        assert!(is_propm(&inst, &x).unwrap());
        assert!(is_propx(&inst, &x).unwrap());
    }

    #[test]
    fn propx_but_not_ef1() {
        let inst = goods(&[&[1, 1, 1, 2, 2, 2], &[1, 1, 1, 2, 2, 2]]);
        let x = alloc(6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert!(is_propx(&inst, &x).unwrap());
        assert_eq!(prop_threshold(&inst, &x, 0, PropNotion::PropX).unwrap(), Value::new(5.into(), 2.into()));
        assert_eq!(prop_threshold(&inst, &x, 1, PropNotion::PropX).unwrap(), Value::new(7.into(), 2.into()));
        assert!(!is_ef1(&inst, &x));
        assert_eq!(ef1_rival(&inst, &x, 0), Some(1));
    }

    #[test]
    fn propm_threshold_ten_thirds() {
        let row: &[i64] = &[3, 1, 1, 1, 6, 1];
        let inst = goods(&[row, row, row]);
        let x = alloc(6, &[&[0], &[1, 2, 3], &[4, 5]]);
        assert_eq!(prop_threshold(&inst, &x, 0, PropNotion::PropM).unwrap(), Value::new(10.into(), 3.into()));
        assert!(!is_propm(&inst, &x).unwrap());
    }

    #[test]
    fn propm_ignores_empty_rivals() {
        let inst = goods(&[&[4, 4], &[4, 4], &[4, 4]]);
        let x = alloc(2, &[&[0], &[1], &[]]);
        // share 8/3, relief max(4) from agent 1 only
        assert_eq!(prop_threshold(&inst, &x, 0, PropNotion::PropM).unwrap(), Value::new((-4).into(), 3.into()));
        let y = alloc(2, &[&[0, 1], &[], &[]]);
        assert_eq!(prop_threshold(&inst, &y, 0, PropNotion::PropM).unwrap(), Value::new(8.into(), 3.into()));
        assert_eq!(prop_threshold(&inst, &y, 0, PropNotion::Prop1).unwrap(), Value::new(8.into(), 3.into()));
    }

    #[test]
    fn empty_rivals_are_vacuous() {
        let inst = goods(&[&[0, 0], &[5, 5]]);
        let x = alloc(2, &[&[], &[0, 1]]);
        assert!(is_ef1_satisfied(&inst, &x, 0));
        assert!(is_efx_satisfied(&inst, &x, 0));
        assert!(is_ef1_satisfied(&inst, &x, 1));
    }

    #[test]
    fn chores_efx_and_alpha() {
        let row: &[i64] = &[-3, -2, -1];
        let inst = Instance::additive(Kind::Chores, vec![row.iter().map(|&x| q(x)).collect(); 2]).unwrap();
        // d_0({0,1}) = 5; without chore 1 it is 3 > d_0({2}) = 1
        let x = alloc(3, &[&[0, 1], &[2]]);
        assert!(!is_efx_satisfied(&inst, &x, 0));
        assert!(is_alpha_efx_satisfied(&inst, &x, 0, &q(3)));
        assert!(!is_alpha_efx_satisfied(&inst, &x, 0, &q(2)));
        assert!(is_efx_satisfied(&inst, &x, 1));
        let y = alloc(3, &[&[0], &[1, 2]]);
        assert!(is_efx(&inst, &y));
        assert!(is_ef1(&inst, &y));
        assert!(matches!(is_prop1(&inst, &y), Err(Error::WrongKind(_))));
    }

    #[test]
    fn alpha_zero_is_trivial_for_goods() {
        let inst = goods(&[&[9, 1], &[1, 9]]);
        let x = alloc(2, &[&[], &[0, 1]]);
        assert!(!is_efx(&inst, &x));
        assert!(is_alpha_efx(&inst, &x, &q(0)));
    }
}
