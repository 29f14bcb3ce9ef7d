//! Demand oracles, requirement/redundant functions, over-/under-demand
//! classification and gross-substitute verification.
//!
//! Demand is always computed by exhaustive enumeration of the `2^m` bundles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::oracle::PriceOracle;
use crate::par::{self, Exec};
use crate::price::{PriceGrid, PriceVector};
use crate::valuation::Valuation;

/// Upper bound on elementary steps for a single exhaustive scan.
pub const WORK_LIMIT: u128 = 1 << 36;

/// Default item cap for full-grid gross-substitute checks.
pub const DEFAULT_GS_CHECK_CAP: usize = 5;

/// `u_p(S) = v(S) - p(S)`.
pub fn utility(v: &Valuation, p: &PriceVector, s: ItemSet) -> i64 {
    v.value(s) as i64 - p.cost(s) as i64
}

/// Utilities of every bundle, indexed by bitmask.
pub fn utilities(v: &Valuation, p: &PriceVector) -> Vec<i64> {
    let size = 1usize << v.m();
    let mut cost = vec![0u64; size];
    let mut out = vec![0i64; size];
    for s in 1..size {
        let low = s.trailing_zeros() as usize;
        cost[s] = cost[s & (s - 1)] + p.get(low);
        out[s] = v.values()[s] as i64 - cost[s] as i64;
    }
    out
}

/// `u(p)` and the full demand correspondence `D(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemandResult {
    pub max_utility: i64,
    /// Every utility-maximizing bundle, ascending bitmask order.
    pub sets: Vec<ItemSet>,
}

impl DemandResult {
    pub fn from_utilities(utils: &[i64]) -> Self {
        let max_utility = *utils.iter().max().expect("at least the empty bundle");
        let sets = utils
            .iter()
            .enumerate()
            .filter(|&(_, &u)| u == max_utility)
            .map(|(s, _)| ItemSet::from_bits(s as u32))
            .collect();
        DemandResult { max_utility, sets }
    }

    pub fn contains(&self, s: ItemSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    /// `l_p(S) = min_{D ∈ D(p)} |S ∩ D|`.
    pub fn requirement(&self, s: ItemSet) -> u32 {
        self.sets.iter().map(|d| d.intersection(s).len()).min().unwrap_or(0)
    }

    /// `h_p(S) = max_{D ∈ D(p)} |S ∩ D|`.
    pub fn redundant(&self, s: ItemSet) -> u32 {
        self.sets.iter().map(|d| d.intersection(s).len()).max().unwrap_or(0)
    }
}

pub fn demand_sets(v: &Valuation, p: &PriceVector) -> DemandResult {
    DemandResult::from_utilities(&utilities(v, p))
}

/// Maximum utility `u(p)`.
pub fn max_utility(v: &Valuation, p: &PriceVector) -> i64 {
    utilities(v, p).into_iter().max().unwrap_or(0)
}

pub fn requirement(v: &Valuation, p: &PriceVector, s: ItemSet) -> u32 {
    demand_sets(v, p).requirement(s)
}

pub fn redundant(v: &Valuation, p: &PriceVector, s: ItemSet) -> u32 {
    demand_sets(v, p).redundant(s)
}

/// `l^p(S)`, summed over bidders.
pub fn auction_requirement(inst: &Instance, p: &PriceVector, s: ItemSet) -> u32 {
    inst.bidders().iter().map(|v| requirement(v, p, s)).sum()
}

/// `h^p(S)`, summed over bidders.
pub fn auction_redundant(inst: &Instance, p: &PriceVector, s: ItemSet) -> u32 {
    inst.bidders().iter().map(|v| redundant(v, p, s)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DemandClass {
    /// `l^p(S) > |S|`
    OD,
    /// `l^p(S) >= |S|`
    WOD,
    /// `h^p(S) < |S|`
    UD,
    /// `h^p(S) <= |S|`
    WUD,
}

impl DemandClass {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "OD" => Some(DemandClass::OD),
            "WOD" => Some(DemandClass::WOD),
            "UD" => Some(DemandClass::UD),
            "WUD" => Some(DemandClass::WUD),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SetClassification {
    pub set: ItemSet,
    pub requirement: u32,
    pub redundant: u32,
    pub size: u32,
    pub over: bool,
    pub weakly_over: bool,
    pub under: bool,
    pub weakly_under: bool,
}

impl SetClassification {
    pub fn from_counts(set: ItemSet, requirement: u32, redundant: u32) -> Self {
        let size = set.len();
        SetClassification {
            set,
            requirement,
            redundant,
            size,
            over: requirement > size,
            weakly_over: requirement >= size,
            under: redundant < size,
            weakly_under: redundant <= size,
        }
    }

    pub fn is(&self, class: DemandClass) -> bool {
        match class {
            DemandClass::OD => self.over,
            DemandClass::WOD => self.weakly_over,
            DemandClass::UD => self.under,
            DemandClass::WUD => self.weakly_under,
        }
    }
}

pub fn classify_set<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
) -> SetClassification {
    SetClassification::from_counts(s, oracle.requirement(p, s), oracle.redundant(p, s))
}

/// All subsets carrying `class`, ascending bitmask order.
pub fn enumerate_class<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    class: DemandClass,
) -> Vec<ItemSet> {
    ItemSet::all(oracle.m())
        .filter(|&s| classify_set(oracle, p, s).is(class))
        .collect()
}

/// Whether some nonempty subset of `within` carries `class` at `p`.
pub(crate) fn first_nonempty_in_class<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    within: ItemSet,
    class: DemandClass,
) -> Option<ItemSet> {
    within
        .nonempty_subsets()
        .find(|&t| classify_set(oracle, p, t).is(class))
}

/// Certifies a failure of `u(p) = u(p + 1_S) + l_p(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GsWitness {
    pub price: PriceVector,
    pub set: ItemSet,
    /// `u(p)`
    pub lhs: i64,
    /// `u(p + 1_S) + l_p(S)`
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GsCheck {
    GrossSubstitute,
    Violation(GsWitness),
}

impl GsCheck {
    pub fn is_gross_substitute(&self) -> bool {
        matches!(self, GsCheck::GrossSubstitute)
    }

    pub fn witness(&self) -> Option<&GsWitness> {
        match self {
            GsCheck::GrossSubstitute => None,
            GsCheck::Violation(w) => Some(w),
        }
    }
}

/// Checks `u(p) = u(p + 1_S) + l_p(S)` for every `p ∈ [0, B]^m` and nonempty
/// `S`, with `B = v(Ω) + 1`. For monotone valuations this is equivalent to
/// gross substitutes. Returns the first violation in lexicographic `(p, S)`
/// order.
pub fn is_gross_substitute(v: &Valuation, m_check_cap: usize) -> Result<GsCheck> {
    is_gross_substitute_with(v, m_check_cap, Exec::default())
}

pub fn is_gross_substitute_with(v: &Valuation, m_check_cap: usize, exec: Exec) -> Result<GsCheck> {
    if let Some(err) = v.first_violation() {
        return Err(err);
    }
    let m = v.m();
    if m > m_check_cap {
        return Err(Error::Cap {
            what: "m for a gross-substitute check",
            value: m,
            max: m_check_cap,
        });
    }
    let grid = PriceGrid::new(m, v.grand_value() + 1);
    let points = grid_points(&grid, 1u128 << (2 * m), "gross-substitute grid check")?;
    let found = par::find_first(exec, points, |idx| {
        let p = grid.point(idx);
        let utils = utilities(v, &p);
        let demand = DemandResult::from_utilities(&utils);
        ItemSet::all(m).skip(1).find_map(|s| {
            let raised = raised_max_utility(&utils, s);
            let rhs = raised + demand.requirement(s) as i64;
            (demand.max_utility != rhs).then(|| GsWitness {
                price: p.clone(),
                set: s,
                lhs: demand.max_utility,
                rhs,
            })
        })
    });
    Ok(found.map_or(GsCheck::GrossSubstitute, GsCheck::Violation))
}

/// `u(p + 1_S)` from the utilities at `p`.
pub(crate) fn raised_max_utility(utils: &[i64], s: ItemSet) -> i64 {
    utils
        .iter()
        .enumerate()
        .map(|(t, &u)| u - ItemSet::from_bits(t as u32).intersection(s).len() as i64)
        .max()
        .unwrap_or(0)
}

pub(crate) fn grid_points(grid: &PriceGrid, per_point: u128, what: &'static str) -> Result<usize> {
    let too_large = |needed| Error::TooLarge {
        what,
        needed,
        limit: WORK_LIMIT,
    };
    let points = grid.checked_len().ok_or_else(|| too_large(u128::MAX))?;
    let needed = points as u128 * per_point;
    if needed > WORK_LIMIT {
        return Err(too_large(needed));
    }
    Ok(points)
}

/// Establishes that every bidder is monotone gross substitute. Additive and
/// unit-demand bidders are gross substitute by construction; table bidders
/// get the full grid check.
pub fn check_gs_premise(inst: &Instance, m_check_cap: usize) -> Result<()> {
    for (i, v) in inst.bidders().iter().enumerate() {
        if let Some(err) = v.first_violation() {
            return Err(err);
        }
        if v.kind() != crate::valuation::ValuationKind::Table {
            continue;
        }
        if let GsCheck::Violation(witness) = is_gross_substitute(v, m_check_cap)? {
            return Err(Error::NotGrossSubstitute { bidder: i, witness });
        }
    }
    Ok(())
}

/// Both sides of `u(p) = u(p - 1_S) - h_p(S)`, as `(lhs, rhs)`.
pub fn dual_gs_check(v: &Valuation, p: &PriceVector, s: ItemSet) -> Result<(i64, i64)> {
    let lowered = p.lower(s).ok_or_else(|| Error::NegativePrice {
        price: p.clone(),
        set: s,
    })?;
    let demand = demand_sets(v, p);
    let rhs = max_utility(v, &lowered) - demand.redundant(s) as i64;
    Ok((demand.max_utility, rhs))
}

/// A bundle `T` with `u_p(T) > u_p(S)`, `|T \ S| <= 1` and `|S \ T| <= 1`,
/// smallest bitmask first. Errors when `S` is already demanded.
pub fn single_improvement(v: &Valuation, p: &PriceVector, s: ItemSet) -> Result<Option<ItemSet>> {
    let utils = utilities(v, p);
    let best = *utils.iter().max().expect("nonempty");
    let base = utils[s.index()];
    if base == best {
        return Err(Error::Precondition(format!("{s} is demanded at {p}")));
    }
    Ok(improve_from_utilities(&utils, s))
}

/// The search behind [`single_improvement`], on utilities already indexed
/// by bundle.
pub(crate) fn improve_from_utilities(utils: &[i64], s: ItemSet) -> Option<ItemSet> {
    let base = utils[s.index()];
    (0..utils.len()).map(|t| ItemSet::from_bits(t as u32)).find(|&t| {
        t.difference(s).len() <= 1 && s.difference(t).len() <= 1 && utils[t.index()] > base
    })
}

/// `D(q) = {A ∪ extra, A ∪ {j1, j2}}` where `extra` is empty (first form) or
/// a third item (second form).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonGsConfig {
    pub price: PriceVector,
    pub base: ItemSet,
    pub pair: (usize, usize),
    pub third: Option<usize>,
    pub demand: Vec<ItemSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NonGsSearch {
    /// First price whose demand collection is exactly of the stated shape.
    pub exact: Option<NonGsConfig>,
    /// First price whose demand contains such a pair (with neither
    /// `A ∪ {j1}` nor `A ∪ {j2}` demanded) plus further bundles.
    pub near_miss: Option<NonGsConfig>,
}

impl NonGsSearch {
    pub fn found(&self) -> bool {
        self.exact.is_some()
    }
}

/// Scans `q ∈ [0, v(Ω) + 1]^m` for a demand collection that exhibits a
/// complementarity. Absence is not a proof of gross substitutes.
pub fn non_gs_configuration(v: &Valuation, m_check_cap: usize) -> Result<NonGsSearch> {
    if let Some(err) = v.first_violation() {
        return Err(err);
    }
    let m = v.m();
    if m < 2 {
        return Err(Error::Precondition("needs at least two items".into()));
    }
    if m > m_check_cap {
        return Err(Error::Cap {
            what: "m for a gross-substitute check",
            value: m,
            max: m_check_cap,
        });
    }
    let grid = PriceGrid::new(m, v.grand_value() + 1);
    let points = grid_points(&grid, 1u128 << (2 * m), "non-gross-substitute scan")?;
    let mut out = NonGsSearch::default();
    for idx in 0..points {
        let q = grid.point(idx);
        let demand = demand_sets(v, &q);
        for (a, b) in shaped_pairs(&demand.sets, m) {
            let config = make_config(&q, a, b, &demand.sets);
            let singles_absent = config.pair_singles().iter().all(|s| !demand.contains(*s));
            if demand.sets.len() == 2 {
                out.exact.get_or_insert(config);
            } else if singles_absent && out.near_miss.is_none() {
                out.near_miss = Some(config);
            }
        }
        if out.exact.is_some() {
            break;
        }
    }
    Ok(out)
}

impl NonGsConfig {
    /// `A ∪ {j1}` and `A ∪ {j2}`.
    fn pair_singles(&self) -> [ItemSet; 2] {
        [self.base.with(self.pair.0), self.base.with(self.pair.1)]
    }
}

// Ordered pairs (X, Y) from the demand collection with |X \ Y| <= 1 and
// |Y \ X| = 2, where |X \ Y| = 1 needs a third item (m >= 3).
fn shaped_pairs(sets: &[ItemSet], m: usize) -> Vec<(ItemSet, ItemSet)> {
    let mut out = Vec::new();
    for &x in sets {
        for &y in sets {
            let only_x = x.difference(y).len();
            let only_y = y.difference(x).len();
            if only_y == 2 && (only_x == 0 || (only_x == 1 && m >= 3)) {
                out.push((x, y));
            }
        }
    }
    out
}

fn make_config(q: &PriceVector, x: ItemSet, y: ItemSet, demand: &[ItemSet]) -> NonGsConfig {
    let base = x.intersection(y);
    let mut pair = y.difference(x).items();
    let j1 = pair.next().expect("two items");
    let j2 = pair.next().expect("two items");
    NonGsConfig {
        price: q.clone(),
        base,
        pair: (j1, j2),
        third: x.difference(y).items().next(),
        demand: demand.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;

    fn set(items: &[usize]) -> ItemSet {
        ItemSet::from_items(items.iter().copied())
    }
    fn price(p: &[u64]) -> PriceVector {
        PriceVector::new(p.to_vec())
    }

    #[test]
    fn utility_examples() {
        let e = e1();
        let v = &e.bidders()[0];
        assert_eq!(utility(v, &price(&[0, 0]), set(&[0, 1])), 2);
        assert_eq!(utility(v, &price(&[1, 1]), set(&[0, 1])), 0);
        let x = x1();
        assert_eq!(utility(&x.bidders()[0], &price(&[1, 1]), set(&[0, 1])), 1);
        assert_eq!(utility(v, &price(&[3, 3]), set(&[0])), -2);
    }

    #[test]
    fn demand_examples() {
        let e = e1();
        let v = &e.bidders()[0];
        let d = demand_sets(v, &price(&[0, 0]));
        assert_eq!((d.max_utility, d.sets.clone()), (2, vec![set(&[0, 1])]));
        let d = demand_sets(v, &price(&[1, 0]));
        assert_eq!((d.max_utility, d.sets.clone()), (1, vec![set(&[1]), set(&[0, 1])]));
        let d = demand_sets(v, &price(&[1, 1]));
        assert_eq!(d.max_utility, 0);
        assert_eq!(d.sets, ItemSet::all(2).collect::<Vec<_>>());
    }

    #[test]
    fn requirement_redundant_examples() {
        let e = e1();
        let v = &e.bidders()[0];
        assert_eq!(requirement(v, &price(&[0, 0]), set(&[0])), 1);
        assert_eq!(redundant(v, &price(&[0, 0]), set(&[0])), 1);
        assert_eq!(requirement(v, &price(&[1, 1]), set(&[0])), 0);
        assert_eq!(redundant(v, &price(&[1, 1]), set(&[0])), 1);
        assert_eq!(requirement(v, &price(&[1, 1]), ItemSet::EMPTY), 0);
        assert_eq!(redundant(v, &price(&[0, 0]), ItemSet::EMPTY), 0);
    }

    #[test]
    fn auction_level_examples() {
        assert_eq!(auction_requirement(&e1(), &price(&[0, 0]), set(&[0])), 3);
        assert_eq!(auction_redundant(&e1(), &price(&[1, 0]), set(&[0])), 3);
        assert_eq!(auction_redundant(&u1(), &price(&[2, 2]), set(&[1])), 0);
    }

    #[test]
    fn classification_examples() {
        let c = classify_set(&e1(), &price(&[0, 0]), set(&[0]));
        assert!(c.over && c.weakly_over);
        let c = classify_set(&u1(), &price(&[2, 2]), set(&[1]));
        assert!(c.under && c.weakly_under);
        for inst in [e1(), u1(), x1()] {
            let c = classify_set(&inst, &price(&[1, 0]), ItemSet::EMPTY);
            assert!(c.weakly_over && c.weakly_under && !c.over && !c.under);
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_class(&e1(), &price(&[0, 0]), DemandClass::OD),
            vec![set(&[0]), set(&[1]), set(&[0, 1])]
        );
        assert!(enumerate_class(&e1(), &price(&[1, 1]), DemandClass::OD).is_empty());
        assert_eq!(enumerate_class(&e1(), &price(&[1, 1]), DemandClass::WUD), vec![ItemSet::EMPTY]);
    }

    #[test]
    fn gs_check_examples() {
        assert!(is_gross_substitute(&e1().bidders()[0], 5).unwrap().is_gross_substitute());
        assert!(is_gross_substitute(&u1().bidders()[0], 5).unwrap().is_gross_substitute());
        assert!(is_gross_substitute(&z0().bidders()[0], 5).unwrap().is_gross_substitute());
        let check = is_gross_substitute(&x1().bidders()[0], 5).unwrap();
        assert_eq!(
            check.witness(),
            Some(&GsWitness {
                price: price(&[1, 1]),
                set: set(&[0, 1]),
                lhs: 1,
                rhs: 2,
            })
        );
    }

    #[test]
    fn gs_check_sequential_matches_parallel() {
        let x = x1();
        let v = &x.bidders()[0];
        assert_eq!(
            is_gross_substitute_with(v, 5, Exec::Sequential).unwrap(),
            is_gross_substitute_with(v, 5, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn gs_check_errors() {
        let v = Valuation::additive(&[1; 6]).unwrap();
        assert!(matches!(is_gross_substitute(&v, 5), Err(Error::Cap { .. })));
        let bad = Valuation::table_unchecked(vec![0, 2, 1, 1]).unwrap();
        assert!(matches!(is_gross_substitute(&bad, 5), Err(Error::NotMonotone { .. })));
    }

    #[test]
    fn dual_check_examples() {
        let e = e1();
        let v = &e.bidders()[0];
        assert_eq!(dual_gs_check(v, &price(&[1, 1]), set(&[0])).unwrap(), (0, 0));
        assert_eq!(dual_gs_check(v, &price(&[1, 1]), set(&[0, 1])).unwrap(), (0, 0));
        let (l, r) = dual_gs_check(v, &price(&[0, 0]), ItemSet::EMPTY).unwrap();
        assert_eq!((l, r), (2, 2));
        assert!(matches!(
            dual_gs_check(v, &price(&[0, 1]), set(&[0])),
            Err(Error::NegativePrice { .. })
        ));
    }

    #[test]
    fn single_improvement_examples() {
        let e = e1();
        let v = &e.bidders()[0];
        assert_eq!(single_improvement(v, &price(&[1, 0]), set(&[0])).unwrap(), Some(set(&[1])));
        assert_eq!(single_improvement(v, &price(&[0, 0]), ItemSet::EMPTY).unwrap(), Some(set(&[0])));
        let x = x1();
        assert_eq!(
            single_improvement(&x.bidders()[0], &price(&[1, 1]), set(&[0])).unwrap(),
            Some(set(&[0, 1]))
        );
        assert!(matches!(
            single_improvement(v, &price(&[0, 0]), set(&[0, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn non_gs_configurations() {
        // Pure complements: D(1,1) = {∅, {a,b}} exactly.
        let c = non_gs_configuration(&c2().bidders()[0], 5).unwrap();
        let exact = c.exact.expect("complements expose the first form");
        assert_eq!(exact.price, price(&[1, 1]));
        assert_eq!((exact.base, exact.pair, exact.third), (ItemSet::EMPTY, (0, 1), None));
        // X1 needs half-integral prices for the exact form; the integer grid has none.
        let x = non_gs_configuration(&x1().bidders()[0], 5).unwrap();
        assert_eq!(x, NonGsSearch::default());
        assert!(!non_gs_configuration(&e1().bidders()[0], 5).unwrap().found());
        assert!(!non_gs_configuration(&z0().bidders()[0], 5).unwrap().found());
    }

    #[test]
    fn non_gs_second_form() {
        // Three items: c is a substitute for the complementary pair {a,b}.
        // v(c) = 2, v(ab) = 4, everything else the max of its parts.
        let table: Vec<u64> = (0..8usize)
            .map(|s| match (s & 0b011 == 0b011, s & 0b100 != 0) {
                (true, _) => 4,
                (false, true) => 2,
                _ => 0,
            })
            .collect();
        let v = Valuation::table(table).unwrap();
        let search = non_gs_configuration(&v, 5).unwrap();
        let exact = search.exact.expect("second form present");
        assert_eq!(exact.demand.len(), 2);
        assert!(!is_gross_substitute(&v, 5).unwrap().is_gross_substitute());
    }
}
