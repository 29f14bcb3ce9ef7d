//! Item-level demand vocabulary for unit-demand instances: the bidder sets
//! `Λ_p(S)` and `Ξ_p(S)`, Mishra–Talman over/under demand, Andersson excess
//! demand, and a side-by-side table against the general set classes.
//!
//! A bidder's item demand is the set of items maximizing `v_i(j) - p_j`
//! among those with nonnegative utility. The outside option is flagged when
//! the best item utility is at most zero. A bidder holding the outside option
//! never counts toward `Λ`.

use serde::Serialize;

use crate::auction;
use crate::demand;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::price::PriceVector;
use crate::valuation::ValuationKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BidderItemDemand {
    pub items: ItemSet,
    pub outside_option: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemDemand {
    pub per_bidder: Vec<BidderItemDemand>,
}

fn require_unit_demand(inst: &Instance) -> Result<()> {
    match inst
        .bidders()
        .iter()
        .position(|v| v.kind() != ValuationKind::UnitDemand)
    {
        Some(i) => Err(Error::NotUnitDemand {
            bidder: i,
            kind: inst.bidders()[i].kind().name(),
        }),
        None => Ok(()),
    }
}

pub fn item_demand(inst: &Instance, p: &PriceVector) -> Result<ItemDemand> {
    require_unit_demand(inst)?;
    inst.check_price(p)?;
    let per_bidder = inst
        .bidders()
        .iter()
        .map(|v| {
            let utils: Vec<i64> = v
                .item_values()
                .iter()
                .enumerate()
                .map(|(j, &x)| x as i64 - p.get(j) as i64)
                .collect();
            let best = utils.iter().copied().max().unwrap_or(i64::MIN);
            let items = if best >= 0 {
                ItemSet::from_items((0..utils.len()).filter(|&j| utils[j] == best))
            } else {
                ItemSet::EMPTY
            };
            BidderItemDemand {
                items,
                outside_option: best <= 0,
            }
        })
        .collect();
    Ok(ItemDemand { per_bidder })
}

impl ItemDemand {
    /// Bidders whose whole item demand lies inside `S`.
    pub fn lambda(&self, s: ItemSet) -> Vec<usize> {
        self.bidders_where(|d| !d.outside_option && !d.items.is_empty() && d.items.is_subset_of(s))
    }

    /// Bidders demanding some item of `S`.
    pub fn xi(&self, s: ItemSet) -> Vec<usize> {
        self.bidders_where(|d| !d.items.is_disjoint(s))
    }

    pub fn mt_over_demanded(&self, s: ItemSet) -> bool {
        self.lambda(s).len() >= s.len() as usize
    }

    pub fn mt_under_demanded(&self, s: ItemSet) -> bool {
        self.xi(s).len() <= s.len() as usize
    }

    /// `|Λ(S) ∩ Ξ(T)| > |T|` for every nonempty `T ⊆ S`; false for `S = ∅`.
    pub fn andersson_excess(&self, s: ItemSet) -> bool {
        if s.is_empty() {
            return false;
        }
        let lambda = self.lambda(s);
        s.nonempty_subsets().all(|t| {
            let xi = self.xi(t);
            lambda.iter().filter(|i| xi.contains(i)).count() > t.len() as usize
        })
    }

    fn bidders_where(&self, keep: impl Fn(&BidderItemDemand) -> bool) -> Vec<usize> {
        self.per_bidder
            .iter()
            .enumerate()
            .filter(|(_, d)| keep(d))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn lambda_set(inst: &Instance, p: &PriceVector, s: ItemSet) -> Result<Vec<usize>> {
    inst.check_set(s)?;
    Ok(item_demand(inst, p)?.lambda(s))
}

pub fn xi_set(inst: &Instance, p: &PriceVector, s: ItemSet) -> Result<Vec<usize>> {
    inst.check_set(s)?;
    Ok(item_demand(inst, p)?.xi(s))
}

pub fn mt_over_demanded(inst: &Instance, p: &PriceVector, s: ItemSet) -> Result<bool> {
    inst.check_set(s)?;
    Ok(item_demand(inst, p)?.mt_over_demanded(s))
}

pub fn mt_under_demanded(inst: &Instance, p: &PriceVector, s: ItemSet) -> Result<bool> {
    inst.check_set(s)?;
    Ok(item_demand(inst, p)?.mt_under_demanded(s))
}

pub fn andersson_excess(inst: &Instance, p: &PriceVector, s: ItemSet) -> Result<bool> {
    inst.check_set(s)?;
    Ok(item_demand(inst, p)?.andersson_excess(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub set: ItemSet,
    pub lambda: Vec<usize>,
    pub xi: Vec<usize>,
    pub mt_over: bool,
    pub over_demanded: bool,
    pub mt_under: bool,
    pub under_demanded: bool,
    pub andersson_excess: bool,
    pub excess_demand: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub agree: usize,
    pub disagree: usize,
}

impl Tally {
    fn record(&mut self, a: bool, b: bool) {
        if a == b {
            self.agree += 1;
        } else {
            self.disagree += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub price: PriceVector,
    pub item_demand: ItemDemand,
    pub rows: Vec<ComparisonRow>,
    pub over: Tally,
    pub under: Tally,
    pub excess: Tally,
}

impl ComparisonReport {
    pub fn csv_header() -> &'static str {
        "set,lambda,xi,mt_over,od,mt_under,ud,andersson,ed"
    }

    /// One CSV line per row; sets and bidder lists are quoted.
    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        let bidders = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        self.rows.iter().map(move |r| {
            format!(
                "\"{}\",\"{}\",\"{}\",{},{},{},{},{},{}",
                r.set,
                bidders(&r.lambda),
                bidders(&r.xi),
                r.mt_over,
                r.over_demanded,
                r.mt_under,
                r.under_demanded,
                r.andersson_excess,
                r.excess_demand
            )
        })
    }
}

/// Tabulates both vocabularies for every `S`; agreement is reported, not
/// required.
pub fn compare_with_general(inst: &Instance, p: &PriceVector) -> Result<ComparisonReport> {
    let item_demand = item_demand(inst, p)?;
    let mut report = ComparisonReport {
        price: p.clone(),
        item_demand,
        rows: Vec::with_capacity(1 << inst.m()),
        over: Tally::default(),
        under: Tally::default(),
        excess: Tally::default(),
    };
    for s in ItemSet::all(inst.m()) {
        let class = demand::classify_set(inst, p, s);
        let d = &report.item_demand;
        let row = ComparisonRow {
            set: s,
            lambda: d.lambda(s),
            xi: d.xi(s),
            mt_over: d.mt_over_demanded(s),
            over_demanded: class.over,
            mt_under: d.mt_under_demanded(s),
            under_demanded: class.under,
            andersson_excess: d.andersson_excess(s),
            excess_demand: auction::is_excess_demand(inst, p, s),
        };
        report.over.record(row.mt_over, row.over_demanded);
        report.under.record(row.mt_under, row.under_demanded);
        report.excess.record(row.andersson_excess, row.excess_demand);
        report.rows.push(row);
    }
    Ok(report)
}
