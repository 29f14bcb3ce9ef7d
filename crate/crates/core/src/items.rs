//! Item sets as bitmasks over the item universe.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Hard cap on the number of items.
pub const MAX_ITEMS: usize = 16;

/// A subset of the items `0..m`, bit `j` standing for item `j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet(u32);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        ItemSet(bits)
    }

    /// All `m` items.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_ITEMS);
        ItemSet(((1u64 << m) - 1) as u32)
    }

    pub fn singleton(item: usize) -> Self {
        ItemSet(1 << item)
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(ItemSet::EMPTY, |s, j| s.with(j))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, item: usize) -> bool {
        self.0 >> item & 1 == 1
    }

    #[must_use]
    pub fn with(self, item: usize) -> Self {
        ItemSet(self.0 | 1 << item)
    }

    #[must_use]
    pub fn without(self, item: usize) -> Self {
        ItemSet(self.0 & !(1 << item))
    }

    #[must_use]
    pub fn union(self, other: ItemSet) -> Self {
        ItemSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: ItemSet) -> Self {
        ItemSet(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: ItemSet) -> Self {
        ItemSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: ItemSet) -> bool {
        self.is_subset_of(other) && self != other
    }

    pub fn is_disjoint(self, other: ItemSet) -> bool {
        self.0 & other.0 == 0
    }

    /// True when only the low `m` bits may be set.
    pub fn fits(self, m: usize) -> bool {
        self.is_subset_of(ItemSet::full(m))
    }

    /// Items in ascending order.
    pub fn items(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(j)
        })
    }

    /// Every subset of `0..m` in ascending bitmask order.
    pub fn all(m: usize) -> impl DoubleEndedIterator<Item = ItemSet> + ExactSizeIterator {
        (0..1u32 << m).map(ItemSet)
    }

    /// Every subset of `self` (including `∅` and `self`) in ascending bitmask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Nonempty subsets of `self`, ascending.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = ItemSet> {
        self.subsets().skip(1)
    }

    /// Renders the set with letter names (`a`, `b`, ...) when `m <= 26`.
    pub fn label(self) -> String {
        self.to_string()
    }
}

/// Ascending enumeration of the submasks of a mask.
#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = ItemSet;

    fn next(&mut self) -> Option<ItemSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // next submask in increasing order
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(ItemSet(cur))
    }
}

pub fn item_name(j: usize) -> String {
    if j < 26 {
        ((b'a' + j as u8) as char).to_string()
    } else {
        j.to_string()
    }
}

/// Parses an item reference: a letter (`a`..`z`) or a 0-based index.
pub fn parse_item(token: &str) -> Option<usize> {
    let t = token.trim();
    if let Ok(j) = t.parse::<usize>() {
        return Some(j);
    }
    let mut chars = t.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => Some((c as u8 - b'a') as usize),
        _ => None,
    }
}

impl std::str::FromStr for ItemSet {
    type Err = String;

    /// Accepts `{a,b}`, `a,b`, `0,1` or `{}`; whitespace is ignored.
    fn from_str(text: &str) -> Result<Self, String> {
        let t = text.trim();
        let t = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(t);
        if t.trim().is_empty() {
            return Ok(ItemSet::EMPTY);
        }
        t.split(',')
            .map(|tok| match parse_item(tok) {
                Some(j) if j < MAX_ITEMS => Ok(j),
                _ => Err(format!("bad item {:?} in set {text:?}", tok.trim())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ItemSet::from_items)
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.items().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&item_name(j))?;
        }
        f.write_str("}")
    }
}

// JSON form is the ascending list of item indices.
impl Serialize for ItemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.items())
    }
}

impl<'de> Deserialize<'de> for ItemSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = items.iter().find(|&&j| j >= MAX_ITEMS) {
            return Err(serde::de::Error::custom(format!("item index {bad} out of range")));
        }
        Ok(ItemSet::from_items(items))
    }
}
