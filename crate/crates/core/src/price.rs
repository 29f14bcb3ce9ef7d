//! Price vectors and the bounded price grid.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::items::ItemSet;

/// One natural price per item.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriceVector(Vec<u64>);

impl PriceVector {
    pub fn new(prices: Vec<u64>) -> Self {
        PriceVector(prices)
    }

    pub fn zeros(m: usize) -> Self {
        PriceVector(vec![0; m])
    }

    pub fn uniform(m: usize, price: u64) -> Self {
        PriceVector(vec![price; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, item: usize) -> u64 {
        self.0[item]
    }

    /// Price of a bundle, `p(S)`.
    pub fn cost(&self, set: ItemSet) -> u64 {
        set.items().map(|j| self.0[j]).sum()
    }

    /// Sum of all prices.
    pub fn mass(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `p + 1_S`.
    #[must_use]
    pub fn raise(&self, set: ItemSet) -> Self {
        let mut next = self.0.clone();
        for j in set.items() {
            next[j] += 1;
        }
        PriceVector(next)
    }

    /// `p - 1_S`, or `None` when some item of `S` is already at zero.
    pub fn lower(&self, set: ItemSet) -> Option<Self> {
        let mut next = self.0.clone();
        for j in set.items() {
            next[j] = next[j].checked_sub(1)?;
        }
        Some(PriceVector(next))
    }

    /// Whether `p >= 1_S`, i.e. `S` can be lowered.
    pub fn can_lower(&self, set: ItemSet) -> bool {
        set.items().all(|j| self.0[j] >= 1)
    }

    /// Coordinate-wise minimum.
    #[must_use]
    pub fn meet(&self, other: &PriceVector) -> Self {
        PriceVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Coordinate-wise maximum.
    #[must_use]
    pub fn join(&self, other: &PriceVector) -> Self {
        PriceVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Domination order: `self <= other` in every coordinate.
    pub fn dominated_by(&self, other: &PriceVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn max_entry(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Parses `"1,2,0"`.
    pub fn parse(text: &str) -> Result<Self, String> {
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("invalid price entry {t:?}: expected a natural number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PriceVector)
    }
}

impl From<Vec<u64>> for PriceVector {
    fn from(v: Vec<u64>) -> Self {
        PriceVector(v)
    }
}

impl<const N: usize> From<[u64; N]> for PriceVector {
    fn from(v: [u64; N]) -> Self {
        PriceVector(v.to_vec())
    }
}

impl fmt::Display for PriceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// The box `[0, bound]^m`, enumerated lexicographically with item 0 most
/// significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriceGrid {
    m: usize,
    bound: u64,
}

impl PriceGrid {
    pub fn new(m: usize, bound: u64) -> Self {
        PriceGrid { m, bound }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Number of grid points, `(bound + 1)^m`, or `None` on overflow.
    pub fn checked_len(&self) -> Option<usize> {
        let side = usize::try_from(self.bound).ok()?.checked_add(1)?;
        (0..self.m).try_fold(1usize, |acc, _| acc.checked_mul(side))
    }

    /// Number of grid points. Panics on overflow; use `checked_len` for untrusted sizes.
    pub fn len(&self) -> usize {
        self.checked_len().expect("price grid too large")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &PriceVector) -> bool {
        p.len() == self.m && p.as_slice().iter().all(|&x| x <= self.bound)
    }

    /// Lexicographic rank of a grid point.
    pub fn index_of(&self, p: &PriceVector) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let side = self.bound as usize + 1;
        Some(p.as_slice().iter().fold(0usize, |acc, &x| acc * side + x as usize))
    }

    /// Grid point with the given lexicographic rank.
    pub fn point(&self, mut index: usize) -> PriceVector {
        let side = self.bound as usize + 1;
        let mut prices = vec![0u64; self.m];
        for slot in prices.iter_mut().rev() {
            *slot = (index % side) as u64;
            index /= side;
        }
        PriceVector(prices)
    }

    pub fn iter(&self) -> impl Iterator<Item = PriceVector> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raise_lower_roundtrip() {
        let p = PriceVector::from([1, 0, 2]);
        let s = ItemSet::from_items([0, 2]);
        assert_eq!(p.raise(s), PriceVector::from([2, 0, 3]));
        assert_eq!(p.raise(s).lower(s), Some(p.clone()));
        assert_eq!(p.lower(ItemSet::singleton(1)), None);
        assert!(!p.can_lower(ItemSet::from_items([0, 1])));
    }

    #[test]
    fn grid_is_lexicographic() {
        let g = PriceGrid::new(2, 2);
        let pts: Vec<_> = g.iter().collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], PriceVector::from([0, 0]));
        assert_eq!(pts[1], PriceVector::from([0, 1]));
        assert_eq!(pts[3], PriceVector::from([1, 0]));
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(g.index_of(p), Some(i));
        }
        assert_eq!(g.index_of(&PriceVector::from([3, 0])), None);
    }

    #[test]
    fn meet_join() {
        let p = PriceVector::from([2, 0]);
        let q = PriceVector::from([0, 2]);
        assert_eq!(p.meet(&q), PriceVector::from([0, 0]));
        assert_eq!(p.join(&q), PriceVector::from([2, 2]));
        assert!(p.meet(&q).dominated_by(&p));
    }

    #[test]
    fn parse_prices() {
        assert_eq!(PriceVector::parse("1, 1").unwrap(), PriceVector::from([1, 1]));
        assert!(PriceVector::parse("1,-1").is_err());
    }
}
