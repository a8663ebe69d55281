//! Correlation between non-negative valuations.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::items::ItemSet;
use crate::scalar::Scalar;
use crate::valuation::Valuation;

/// Largest `α ∈ [0, 1]` such that for all agents `i != j` and all sets `S, T`,
/// `v_i(S) >= v_i(T)` implies `v_j(S) >= α·v_j(T)`.
///
/// Pairs with `v_j(T) = 0` never bind. When some binding pair has
/// `v_j(S) = 0 < v_j(T)` no positive `α` exists and a
/// [`Error::CorrelationViolation`] describing the pair is returned.
///
/// Additive valuations are expanded to subset tables, so `m` must not exceed
/// `limit`. For each ordered pair `(i, j)` the subsets are sorted by `v_i`
/// once and swept with a running minimum of `v_j`, so the cost is
/// `O(n² 2^m log 2^m)` instead of `O(n² 4^m)`.
pub fn max_correlation<T: Scalar>(valuations: &[Valuation<T>], limit: usize) -> Result<T> {
    let tables = valuations
        .iter()
        .map(|v| v.subset_values(limit))
        .collect::<Result<Vec<_>>>()?;
    for (i, t) in tables.iter().enumerate() {
        if let Some(s) = t.iter().position(|x| x.cmp_value(&T::zero()) == Ordering::Less) {
            return Err(Error::SignViolation {
                agent: i,
                detail: format!("correlation needs non-negative values, subset {s:#b} is negative"),
            });
        }
    }

    let mut alpha = T::one();
    for (i, vi) in tables.iter().enumerate() {
        let mut sets: Vec<usize> = (0..vi.len()).collect();
        sets.sort_by(|&a, &b| vi[b].cmp_value(&vi[a]));
        for (j, vj) in tables.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut running: Option<usize> = None;
            let mut start = 0;
            while start < sets.len() {
                let mut end = start;
                while end < sets.len() && vi[sets[end]].cmp_value(&vi[sets[start]]) == Ordering::Equal {
                    end += 1;
                }
                for &s in &sets[start..end] {
                    if running.is_none_or(|r| vj[s].cmp_value(&vj[r]) == Ordering::Less) {
                        running = Some(s);
                    }
                }
                let smallest = running.expect("group is nonempty");
                for &t in &sets[start..end] {
                    if vj[t].cmp_value(&T::zero()) != Ordering::Greater {
                        continue;
                    }
                    if vj[smallest].is_zero() {
                        return Err(Error::CorrelationViolation {
                            from: i,
                            to: j,
                            s: ItemSet::from_bits(smallest as u64),
                            t: ItemSet::from_bits(t as u64),
                        });
                    }
                    let ratio = vj[smallest].clone() / vj[t].clone();
                    if ratio.cmp_value(&alpha) == Ordering::Less {
                        alpha = ratio;
                    }
                }
                start = end;
            }
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn add(xs: &[i64]) -> Valuation<Value> {
        Valuation::additive(xs.iter().map(|&x| Value::from_integer(x.into())).collect()).unwrap()
    }

    /// Direct scan of every `(i, j, S, T)`.
    fn brute(vals: &[Valuation<Value>]) -> Option<Value> {
        let m = vals[0].num_items();
        let mut alpha = Value::from_integer(1.into());
        for (i, vi) in vals.iter().enumerate() {
            for (j, vj) in vals.iter().enumerate() {
                if i == j {
                    continue;
                }
                for s in 0..1u64 << m {
                    for t in 0..1u64 << m {
                        let (s, t) = (ItemSet::from_bits(s), ItemSet::from_bits(t));
                        if vi.value(s) >= vi.value(t) && vj.value(t) > Value::from_integer(0.into()) {
                            if vj.value(s) == Value::from_integer(0.into()) {
                                return None;
                            }
                            alpha = alpha.min(vj.value(s) / vj.value(t));
                        }
                    }
                }
            }
        }
        Some(alpha)
    }

    #[test]
    fn identical_valuations_are_fully_correlated() {
        let v = add(&[4, 1, 3]);
        assert_eq!(max_correlation(&[v.clone(), v], 16).unwrap(), Value::from_integer(1.into()));
    }

    #[test]
    fn crossing_pair() {
        let vals = [add(&[2, 1]), add(&[1, 2])];
        assert_eq!(max_correlation(&vals, 16).unwrap(), Value::new(1.into(), 2.into()));
        assert_eq!(brute(&vals), Some(Value::new(1.into(), 2.into())));
    }

    #[test]
    fn zero_numerator_is_a_violation() {
        let vals = [add(&[1, 0]), add(&[0, 1])];
        assert!(matches!(
            max_correlation(&vals, 16),
            Err(Error::CorrelationViolation { .. })
        ));
        assert_eq!(brute(&vals), None);
    }

    #[test]
    fn agrees_with_direct_scan() {
        let cases: [&[&[i64]]; 4] = [
            &[&[5, 3, 1], &[4, 4, 1], &[6, 2, 2]],
            &[&[1, 1, 1, 1], &[2, 3, 4, 5]],
            &[&[7, 1], &[7, 1], &[1, 7]],
            &[&[3, 9, 2, 2], &[9, 3, 2, 2]],
        ];
        for case in cases {
            let vals: Vec<_> = case.iter().map(|r| add(r)).collect();
            assert_eq!(max_correlation(&vals, 16).ok(), brute(&vals), "{case:?}");
        }
    }

    #[test]
    fn respects_table_limit() {
        let vals = [add(&[1; 5]), add(&[1; 5])];
        assert!(matches!(max_correlation(&vals, 4), Err(Error::TableTooLarge { .. })));
    }
}
