//! Welfare maximization, Walrasian verification, the minimum/maximum
//! Walrasian vectors and the set-based price characterization.

use std::collections::HashSet;

use serde::Serialize;

use crate::demand::{self, check_gs_premise, DemandClass, SetClassification, DEFAULT_GS_CHECK_CAP};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::oracle::PriceOracle;
use crate::par::{self, Exec};
use crate::price::PriceVector;

/// One bundle per bidder, pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub bundles: Vec<ItemSet>,
    /// Whether the bundles cover every item.
    pub partition: bool,
}

impl Allocation {
    pub fn new(m: usize, bundles: Vec<ItemSet>) -> Self {
        let union = bundles.iter().fold(ItemSet::EMPTY, |acc, &b| acc.union(b));
        Allocation {
            partition: union == ItemSet::full(m),
            bundles,
        }
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = ItemSet::EMPTY;
        self.bundles.iter().all(|&b| {
            let ok = seen.is_disjoint(b);
            seen = seen.union(b);
            ok
        })
    }

    pub fn welfare(&self, inst: &Instance) -> u64 {
        inst.bidders().iter().zip(&self.bundles).map(|(v, &b)| v.value(b)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Welfare {
    pub value: u64,
    pub allocation: Allocation,
}

/// Exact welfare maximum by dynamic programming over item subsets:
/// `best_i(S) = max_{T ⊆ S} best_{i-1}(S \ T) + v_i(T)`. Ties go to the
/// smallest bundle bitmask for the last bidder, then backwards.
pub fn max_welfare(inst: &Instance) -> Result<Welfare> {
    let m = inst.m();
    let n = inst.n();
    let sets = 1usize << m;
    let work = n as u128 * 3u128.pow(m as u32);
    if work > demand::WORK_LIMIT {
        return Err(Error::TooLarge {
            what: "welfare maximization",
            needed: work,
            limit: demand::WORK_LIMIT,
        });
    }
    // best[i][S]: welfare of allocating exactly S among bidders 0..=i
    let mut best: Vec<Vec<u64>> = Vec::with_capacity(n);
    best.push(inst.bidders()[0].values().to_vec());
    for i in 1..n {
        let v = &inst.bidders()[i];
        let prev = &best[i - 1];
        let row = (0..sets)
            .map(|s| {
                ItemSet::from_bits(s as u32)
                    .subsets()
                    .map(|t| prev[s & !t.index()] + v.value(t))
                    .max()
                    .expect("at least the empty bundle")
            })
            .collect();
        best.push(row);
    }
    let full = sets - 1;
    let value = best[n - 1][full];
    let mut bundles = vec![ItemSet::EMPTY; n];
    let mut rest = full;
    for i in (1..n).rev() {
        let v = &inst.bidders()[i];
        let t = ItemSet::from_bits(rest as u32)
            .subsets()
            .find(|t| best[i - 1][rest & !t.index()] + v.value(*t) == best[i][rest])
            .expect("optimum is attained");
        bundles[i] = t;
        rest &= !t.index();
    }
    bundles[0] = ItemSet::from_bits(rest as u32);
    Ok(Welfare {
        value,
        allocation: Allocation::new(m, bundles),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumCertificate {
    pub price: PriceVector,
    pub allocation: Allocation,
    pub welfare: u64,
}

/// Searches for a partition of the items in which every bidder receives a
/// demanded bundle. Bidders are assigned in index order, each trying its
/// demanded bundles in ascending bitmask order; the first complete
/// assignment found is returned.
pub fn is_walrasian(inst: &Instance, p: &PriceVector) -> Option<EquilibriumCertificate> {
    let demands: Vec<Vec<ItemSet>> =
        inst.bidders().iter().map(|v| demand::demand_sets(v, p).sets).collect();
    let full = inst.full_set();
    let mut failed = HashSet::new();
    let mut chosen = Vec::with_capacity(inst.n());
    if !assign(&demands, 0, ItemSet::EMPTY, full, &mut chosen, &mut failed) {
        return None;
    }
    let allocation = Allocation::new(inst.m(), chosen);
    Some(EquilibriumCertificate {
        price: p.clone(),
        welfare: allocation.welfare(inst),
        allocation,
    })
}

fn assign(
    demands: &[Vec<ItemSet>],
    bidder: usize,
    used: ItemSet,
    full: ItemSet,
    chosen: &mut Vec<ItemSet>,
    failed: &mut HashSet<(usize, ItemSet)>,
) -> bool {
    if bidder == demands.len() {
        return used == full;
    }
    if failed.contains(&(bidder, used)) {
        return false;
    }
    for &d in &demands[bidder] {
        if !d.is_disjoint(used) {
            continue;
        }
        chosen.push(d);
        if assign(demands, bidder + 1, used.union(d), full, chosen, failed) {
            return true;
        }
        chosen.pop();
    }
    failed.insert((bidder, used));
    false
}

/// Every Walrasian vector in `[0, B]^m`, lexicographic order.
pub fn walrasian_set(inst: &Instance) -> Result<Vec<PriceVector>> {
    walrasian_set_with(inst, Exec::default())
}

pub fn walrasian_set_with(inst: &Instance, exec: Exec) -> Result<Vec<PriceVector>> {
    let grid = inst.grid();
    let per_point = (inst.n() as u128) << (2 * inst.m());
    let points = demand::grid_points(&grid, per_point, "Walrasian grid scan")?;
    let hits = par::map_range(exec, points, |idx| {
        let p = grid.point(idx);
        is_walrasian(inst, &p).map(|_| p)
    });
    Ok(hits.into_iter().flatten().collect())
}

/// Meet and join of a set of Walrasian vectors, each checked to be
/// Walrasian itself and to bound every member.
pub fn walrasian_bounds(
    inst: &Instance,
    walrasian: &[PriceVector],
) -> Result<(PriceVector, PriceVector)> {
    let first = walrasian.first().ok_or(Error::NoEquilibrium)?;
    let min = walrasian.iter().fold(first.clone(), |acc, p| acc.meet(p));
    let max = walrasian.iter().fold(first.clone(), |acc, p| acc.join(p));
    for (bound, name) in [(&min, "meet"), (&max, "join")] {
        if is_walrasian(inst, bound).is_none() {
            return Err(Error::Precondition(format!(
                "the {name} {bound} of the Walrasian set is not Walrasian"
            )));
        }
    }
    debug_assert!(walrasian.iter().all(|p| min.dominated_by(p) && p.dominated_by(&max)));
    Ok((min, max))
}

pub fn min_walrasian(inst: &Instance) -> Result<PriceVector> {
    Ok(walrasian_bounds(inst, &walrasian_set(inst)?)?.0)
}

pub fn max_walrasian(inst: &Instance) -> Result<PriceVector> {
    Ok(walrasian_bounds(inst, &walrasian_set(inst)?)?.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub set: ItemSet,
    pub class: DemandClass,
    pub requirement: u32,
    pub redundant: u32,
}

impl Evidence {
    fn new(c: &SetClassification, class: DemandClass) -> Self {
        Evidence {
            set: c.set,
            class,
            requirement: c.requirement,
            redundant: c.redundant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterizationVerdict {
    pub price: PriceVector,
    pub is_walrasian: bool,
    pub is_min_walrasian: bool,
    pub is_max_walrasian: bool,
    /// First set (ascending) that is over- or under-demanded.
    pub walrasian_evidence: Option<Evidence>,
    /// First offending set for minimality: the above, or a nonempty weakly
    /// under-demanded set whose prices can all be lowered.
    pub min_evidence: Option<Evidence>,
    /// First offending set for maximality: a nonempty weakly over-demanded
    /// or an under-demanded set.
    pub max_evidence: Option<Evidence>,
    /// First nonempty weakly under-demanded set containing a zero-priced
    /// item. Such sets do not count against minimality.
    pub boundary_wud: Option<Evidence>,
}

/// Verdict from set classifications alone, assuming the gross-substitute
/// premise holds. Never consults an allocation.
pub fn classify_verdict<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> CharacterizationVerdict {
    let classes: Vec<SetClassification> = ItemSet::all(oracle.m())
        .map(|s| demand::classify_set(oracle, p, s))
        .collect();
    let walrasian_evidence = classes.iter().find_map(|c| {
        if c.over {
            Some(Evidence::new(c, DemandClass::OD))
        } else if c.under {
            Some(Evidence::new(c, DemandClass::UD))
        } else {
            None
        }
    });
    let nonempty = || classes.iter().filter(|c| !c.set.is_empty());
    let min_evidence = walrasian_evidence.or_else(|| {
        nonempty()
            .find(|c| c.weakly_under && p.can_lower(c.set))
            .map(|c| Evidence::new(c, DemandClass::WUD))
    });
    let boundary_wud = nonempty()
        .find(|c| c.weakly_under && !p.can_lower(c.set))
        .map(|c| Evidence::new(c, DemandClass::WUD));
    let max_evidence = classes.iter().find_map(|c| {
        if !c.set.is_empty() && c.weakly_over {
            Some(Evidence::new(c, DemandClass::WOD))
        } else if c.under {
            Some(Evidence::new(c, DemandClass::UD))
        } else {
            None
        }
    });
    CharacterizationVerdict {
        price: p.clone(),
        is_walrasian: walrasian_evidence.is_none(),
        is_min_walrasian: min_evidence.is_none(),
        is_max_walrasian: max_evidence.is_none(),
        walrasian_evidence,
        min_evidence,
        max_evidence,
        boundary_wud,
    }
}

/// The characterization verdict. Refuses instances that are not all gross
/// substitute, since the verdict is unsound without that premise.
pub fn characterize(inst: &Instance, p: &PriceVector) -> Result<CharacterizationVerdict> {
    inst.check_price(p)?;
    check_gs_premise(inst, DEFAULT_GS_CHECK_CAP)?;
    Ok(classify_verdict(inst, p))
}

/// Confirms that `p ∧ q` and `p ∨ q` are Walrasian. Both inputs must be.
pub fn lattice_check(inst: &Instance, p: &PriceVector, q: &PriceVector) -> Result<bool> {
    for x in [p, q] {
        inst.check_price(x)?;
        if is_walrasian(inst, x).is_none() {
            return Err(Error::Precondition(format!("{x} is not Walrasian")));
        }
    }
    Ok(is_walrasian(inst, &p.meet(q)).is_some() && is_walrasian(inst, &p.join(q)).is_some())
}
