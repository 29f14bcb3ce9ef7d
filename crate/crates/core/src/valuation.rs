//! Valuations as explicit tables over all `2^m` bundles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::items::{ItemSet, MAX_ITEMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationKind {
    Table,
    Additive,
    UnitDemand,
}

impl ValuationKind {
    pub fn name(self) -> &'static str {
        match self {
            ValuationKind::Table => "table",
            ValuationKind::Additive => "additive",
            ValuationKind::UnitDemand => "unit_demand",
        }
    }
}

/// `v: 2^Ω → ℕ`, stored densely and indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    m: usize,
    values: Vec<u64>,
    kind: ValuationKind,
}

impl Valuation {
    /// `v(S) = Σ_{j∈S} v(j)`.
    pub fn additive(item_values: &[u64]) -> Result<Self> {
        let m = check_items(item_values.len())?;
        let mut values = vec![0u64; 1 << m];
        for s in 1..values.len() {
            let low = s.trailing_zeros() as usize;
            values[s] = values[s & (s - 1)] + item_values[low];
        }
        Ok(Valuation {
            m,
            values,
            kind: ValuationKind::Additive,
        })
    }

    /// `v(S) = max_{j∈S} v(j)`.
    pub fn unit_demand(item_values: &[u64]) -> Result<Self> {
        let m = check_items(item_values.len())?;
        let mut values = vec![0u64; 1 << m];
        for s in 1..values.len() {
            let low = s.trailing_zeros() as usize;
            values[s] = values[s & (s - 1)].max(item_values[low]);
        }
        Ok(Valuation {
            m,
            values,
            kind: ValuationKind::UnitDemand,
        })
    }

    /// A validated table: normalized and monotone.
    pub fn table(values: Vec<u64>) -> Result<Self> {
        let v = Valuation::table_unchecked(values)?;
        if let Some(err) = v.first_violation() {
            return Err(err);
        }
        Ok(v)
    }

    /// A table that only has its shape checked. Normalization and
    /// monotonicity are left to [`crate::instance::validate`].
    pub fn table_unchecked(values: Vec<u64>) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() {
            return Err(Error::TableLength(len));
        }
        let m = len.trailing_zeros() as usize;
        check_items(m)?;
        Ok(Valuation {
            m,
            values,
            kind: ValuationKind::Table,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> ValuationKind {
        self.kind
    }

    pub fn value(&self, set: ItemSet) -> u64 {
        self.values[set.index()]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `v(Ω)`.
    pub fn grand_value(&self) -> u64 {
        *self.values.last().expect("table is never empty")
    }

    /// Single-item values `v({j})`.
    pub fn item_values(&self) -> Vec<u64> {
        (0..self.m).map(|j| self.value(ItemSet::singleton(j))).collect()
    }

    /// First normalization or monotonicity violation, if any. Monotonicity
    /// is checked on single-item extensions, scanning `S` in ascending order
    /// and then `j ∉ S` ascending.
    pub fn first_violation(&self) -> Option<Error> {
        if self.values[0] != 0 {
            return Some(Error::NotNormalized(self.values[0]));
        }
        for s in ItemSet::all(self.m) {
            for j in ItemSet::full(self.m).difference(s).items() {
                let t = s.with(j);
                if self.value(s) > self.value(t) {
                    return Some(Error::NotMonotone {
                        subset: s,
                        superset: t,
                        low_value: self.value(s),
                        high_value: self.value(t),
                    });
                }
            }
        }
        None
    }

    /// First bundle where the table disagrees with its declared kind.
    pub fn kind_mismatch(&self) -> Option<ItemSet> {
        let rebuilt = match self.kind {
            ValuationKind::Table => return None,
            ValuationKind::Additive => Valuation::additive(&self.item_values()),
            ValuationKind::UnitDemand => Valuation::unit_demand(&self.item_values()),
        }
        .ok()?;
        ItemSet::all(self.m).find(|&s| rebuilt.value(s) != self.value(s))
    }
}

fn check_items(m: usize) -> Result<usize> {
    if m > MAX_ITEMS {
        return Err(Error::Cap {
            what: "m",
            value: m,
            max: MAX_ITEMS,
        });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> ItemSet {
        ItemSet::from_items(items.iter().copied())
    }

    #[test]
    fn additive_examples() {
        let v = Valuation::additive(&[1, 1]).unwrap();
        assert_eq!(v.values(), &[0, 1, 1, 2]);
        let z = Valuation::additive(&[0, 0]).unwrap();
        assert!(z.values().iter().all(|&x| x == 0));
        let w = Valuation::additive(&[3, 5, 2]).unwrap();
        assert_eq!(w.value(set(&[0, 2])), 5);
        assert_eq!(w.kind(), ValuationKind::Additive);
    }

    #[test]
    fn unit_demand_examples() {
        let v = Valuation::unit_demand(&[2, 1]).unwrap();
        assert_eq!(v.value(set(&[0, 1])), 2);
        let v = Valuation::unit_demand(&[3, 1]).unwrap();
        assert_eq!(v.values(), &[0, 3, 1, 3]);
        assert!(Valuation::unit_demand(&[0, 0]).unwrap().values().iter().all(|&x| x == 0));
    }

    #[test]
    fn table_examples() {
        assert!(Valuation::table(vec![0, 1, 1, 3]).is_ok());
        let t = Valuation::table(vec![0, 1, 1, 2]).unwrap();
        assert_eq!(t.values(), Valuation::additive(&[1, 1]).unwrap().values());
        assert!(matches!(Valuation::table(vec![1, 1, 1, 1]), Err(Error::NotNormalized(1))));
        match Valuation::table(vec![0, 2, 1, 1]) {
            Err(Error::NotMonotone { subset, superset, .. }) => {
                assert_eq!(subset, set(&[0]));
                assert_eq!(superset, set(&[0, 1]));
            }
            other => panic!("expected monotonicity witness, got {other:?}"),
        }
        assert!(matches!(Valuation::table(vec![0, 1, 2]), Err(Error::TableLength(3))));
    }

    #[test]
    fn oversized_rejected() {
        assert!(matches!(Valuation::additive(&[1; 17]), Err(Error::Cap { .. })));
    }

    #[test]
    fn kind_mismatch_detected() {
        let mut v = Valuation::additive(&[1, 2]).unwrap();
        assert_eq!(v.kind_mismatch(), None);
        v.values[3] = 2;
        assert_eq!(v.kind_mismatch(), Some(set(&[0, 1])));
    }
}
