//! The Lyapunov potential `L(p) = Σ_i u_i(p) + Σ_j p_j`.

use serde::Serialize;

use crate::demand;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::oracle::PriceOracle;
use crate::par::{self, Exec};
use crate::price::PriceVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyapunovReport {
    pub value: i64,
    pub per_bidder_utilities: Vec<i64>,
    pub price_mass: u64,
}

pub fn lyapunov(inst: &Instance, p: &PriceVector) -> LyapunovReport {
    let per_bidder_utilities: Vec<i64> =
        inst.bidders().iter().map(|v| demand::max_utility(v, p)).collect();
    let price_mass = p.mass();
    LyapunovReport {
        value: per_bidder_utilities.iter().sum::<i64>() + price_mass as i64,
        per_bidder_utilities,
        price_mass,
    }
}

/// A potential change predicted from requirement/redundant counts next to
/// the directly evaluated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaCheck {
    pub predicted: i64,
    pub actual: i64,
}

impl DeltaCheck {
    pub fn agrees(&self) -> bool {
        self.predicted == self.actual
    }
}

/// `L(p + 1_S)` predicted as `L(p) - l^p(S) + |S|`.
pub fn delta_up<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector, s: ItemSet) -> DeltaCheck {
    let base = oracle.lyapunov(p);
    DeltaCheck {
        predicted: base - oracle.requirement(p, s) as i64 + s.len() as i64,
        actual: oracle.lyapunov(&p.raise(s)),
    }
}

/// `L(p - 1_S)` predicted as `L(p) + h^p(S) - |S|`. Needs `p >= 1_S`.
pub fn delta_down<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
) -> Result<DeltaCheck> {
    let lowered = p.lower(s).ok_or_else(|| Error::NegativePrice {
        price: p.clone(),
        set: s,
    })?;
    let base = oracle.lyapunov(p);
    Ok(DeltaCheck {
        predicted: base + oracle.redundant(p, s) as i64 - s.len() as i64,
        actual: oracle.lyapunov(&lowered),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubmodularityCheck {
    /// `L(p ∧ q) + L(p ∨ q)`
    pub lhs_meet_join: i64,
    /// `L(p) + L(q)`
    pub rhs_sum: i64,
    pub holds: bool,
}

pub fn submodularity_check<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    q: &PriceVector,
) -> SubmodularityCheck {
    let lhs = oracle.lyapunov(&p.meet(q)) + oracle.lyapunov(&p.join(q));
    let rhs = oracle.lyapunov(p) + oracle.lyapunov(q);
    SubmodularityCheck {
        lhs_meet_join: lhs,
        rhs_sum: rhs,
        holds: lhs <= rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyapunovMinimum {
    pub min_value: i64,
    /// Every minimizer on `[0, B]^m`, lexicographic order.
    pub minimizers: Vec<PriceVector>,
}

pub fn grid_minimize_lyapunov(inst: &Instance) -> Result<LyapunovMinimum> {
    grid_minimize_lyapunov_with(inst, inst, Exec::default())
}

/// Exhaustive scan of `[0, B]^m` through any oracle.
pub fn grid_minimize_lyapunov_with<O: PriceOracle + ?Sized>(
    oracle: &O,
    inst: &Instance,
    exec: Exec,
) -> Result<LyapunovMinimum> {
    let grid = inst.grid();
    let points = demand::grid_points(&grid, (inst.n() as u128) << inst.m(), "Lyapunov grid scan")?;
    let values = par::map_range(exec, points, |idx| oracle.lyapunov(&grid.point(idx)));
    let min_value = *values.iter().min().expect("grid is nonempty");
    let minimizers = values
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l == min_value)
        .map(|(idx, _)| grid.point(idx))
        .collect();
    Ok(LyapunovMinimum {
        min_value,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;
    use crate::oracle::ProfileTable;

    fn price(p: &[u64]) -> PriceVector {
        PriceVector::new(p.to_vec())
    }
    fn set(items: &[usize]) -> ItemSet {
        ItemSet::from_items(items.iter().copied())
    }

    #[test]
    fn lyapunov_examples() {
        let r = lyapunov(&e1(), &price(&[0, 0]));
        assert_eq!(r.value, 6);
        assert_eq!(r.per_bidder_utilities, vec![2, 2, 2]);
        assert_eq!(lyapunov(&e1(), &price(&[1, 1])).value, 2);
        assert_eq!(lyapunov(&z0(), &price(&[0, 0])).value, 0);
    }

    #[test]
    fn delta_examples() {
        let e = e1();
        assert_eq!(delta_up(&e, &price(&[0, 0]), set(&[0])), DeltaCheck { predicted: 4, actual: 4 });
        assert_eq!(delta_up(&e, &price(&[0, 0]), set(&[0, 1])), DeltaCheck { predicted: 2, actual: 2 });
        for inst in [e1(), u1(), x1()] {
            let p = price(&[1, 2]);
            let l = inst.lyapunov(&p);
            assert_eq!(delta_up(&inst, &p, ItemSet::EMPTY), DeltaCheck { predicted: l, actual: l });
            assert_eq!(
                delta_down(&inst, &p, ItemSet::EMPTY).unwrap(),
                DeltaCheck { predicted: l, actual: l }
            );
        }
        assert!(delta_down(&e, &price(&[0, 1]), set(&[0])).is_err());
    }

    #[test]
    fn delta_fails_for_non_gs() {
        // X1 at (1,1), S = {a,b}: L(1,1) = 3, l = 2, so the prediction is 3
        // while L(2,2) = 4.
        let x = x1();
        let d = delta_up(&x, &price(&[1, 1]), set(&[0, 1]));
        assert_eq!(d, DeltaCheck { predicted: 3, actual: 4 });
    }

    #[test]
    fn submodularity_examples() {
        let c = submodularity_check(&e1(), &price(&[2, 0]), &price(&[0, 2]));
        assert_eq!((c.lhs_meet_join, c.rhs_sum, c.holds), (10, 10, true));
        let p = price(&[1, 2]);
        let c = submodularity_check(&u1(), &p, &p);
        assert!(c.holds && c.lhs_meet_join == c.rhs_sum);
    }

    #[test]
    fn x1_submodularity_scan_is_reported() {
        // X1 is not gross substitute, so violations may occur; the scan
        // only has to run and report them.
        let x = x1();
        let pts: Vec<_> = x.grid().iter().collect();
        let violations = pts
            .iter()
            .flat_map(|p| pts.iter().map(move |q| (p, q)))
            .filter(|(p, q)| !submodularity_check(&x, p, q).holds)
            .count();
        assert!(violations > 0, "X1 complementarity breaks submodularity somewhere");
    }

    #[test]
    fn grid_minimum_examples() {
        let r = grid_minimize_lyapunov(&e1()).unwrap();
        assert_eq!((r.min_value, r.minimizers), (2, vec![price(&[1, 1])]));
        let r = grid_minimize_lyapunov(&u1()).unwrap();
        assert_eq!(r.min_value, 3);
        assert_eq!(r.minimizers, vec![price(&[1, 0]), price(&[2, 1])]);
        let r = grid_minimize_lyapunov(&z0()).unwrap();
        assert_eq!((r.min_value, r.minimizers), (0, vec![price(&[0, 0])]));
    }

    #[test]
    fn grid_minimum_via_table() {
        let inst = u1();
        let table = ProfileTable::build(&inst).unwrap();
        assert_eq!(
            grid_minimize_lyapunov_with(&table, &inst, Exec::Sequential).unwrap(),
            grid_minimize_lyapunov(&inst).unwrap()
        );
    }
}
