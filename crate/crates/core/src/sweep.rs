//! Exhaustive self-verification over the price grid `[0, B]^m`.
//!
//! Each suite counts checked cases and failures and keeps the first failure
//! in grid order as a replayable counterexample. Suites that depend on the
//! gross-substitute premise are skipped when it fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::auction::{self, AuctionOptions, Direction, Policy, PolicyKind};
use crate::demand::{self, check_gs_premise, DemandClass, GsWitness, DEFAULT_GS_CHECK_CAP};
use crate::equilibrium::{self, max_welfare};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::lyapunov;
use crate::oracle::{PriceOracle, ProfileTable};
use crate::par::{self, Exec};
use crate::price::{PriceGrid, PriceVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub exec: Exec,
    pub gs_check_cap: usize,
    /// Pair suites sample this many pairs when the full product is larger.
    pub pair_sample: usize,
    pub sample_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            exec: Exec::default(),
            gs_check_cap: DEFAULT_GS_CHECK_CAP,
            pair_sample: 100_000,
            sample_seed: 0x5eed,
        }
    }
}

/// A failing case, with the operation that reproduces it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub operation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidder: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub price: Option<PriceVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other_price: Option<PriceVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<ItemSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other_set: Option<ItemSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub values: Vec<i64>,
    pub detail: String,
}

impl Counterexample {
    fn new(operation: &'static str, detail: impl Into<String>) -> Self {
        Counterexample {
            operation,
            detail: detail.into(),
            ..Counterexample::default()
        }
    }

    fn bidder(mut self, i: usize) -> Self {
        self.bidder = Some(i);
        self
    }

    fn at(mut self, p: &PriceVector) -> Self {
        self.price = Some(p.clone());
        self
    }

    fn and(mut self, q: &PriceVector) -> Self {
        self.other_price = Some(q.clone());
        self
    }

    fn set(mut self, s: ItemSet) -> Self {
        self.set = Some(s);
        self
    }

    fn other_set(mut self, t: ItemSet) -> Self {
        self.other_set = Some(t);
        self
    }

    fn values(mut self, values: &[i64]) -> Self {
        self.values = values.to_vec();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: SuiteStatus,
    pub checked: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub gross_substitute: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidder: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GsWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub digest: String,
    pub m: usize,
    pub n: usize,
    pub grid_bound: u64,
    pub premise: Premise,
    pub max_welfare: u64,
    pub walrasian_count: usize,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl SweepReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn skipped(&self) -> Vec<&'static str> {
        self.suites
            .iter()
            .filter(|s| s.status == SuiteStatus::Skipped)
            .map(|s| s.name)
            .collect()
    }
}

/// Suites that hold for every monotone instance.
pub const PREMISE_FREE_SUITES: [&str; 3] = ["weak_duality", "requirement_bounds", "walrasian_minimizes"];

/// Suites that assume every bidder is gross substitute.
pub const GS_SUITES: [&str; 11] = [
    "gs_equalities",
    "lyapunov_delta",
    "characterization",
    "duality",
    "ascending",
    "descending",
    "necessity",
    "submodularity",
    "lattice",
    "monotonicity",
    "single_improvement",
];

#[derive(Debug, Default)]
struct Outcome {
    checked: u64,
    failed: u64,
    first: Option<Counterexample>,
}

impl Outcome {
    fn check(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(cx());
            }
        }
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }

    fn into_result(self, name: &'static str) -> SuiteResult {
        SuiteResult {
            name,
            status: if self.failed == 0 {
                SuiteStatus::Passed
            } else {
                SuiteStatus::Failed
            },
            checked: self.checked,
            failed: self.failed,
            counterexample: self.first,
        }
    }
}

fn scan<F>(exec: Exec, n: usize, f: F) -> Outcome
where
    F: Fn(usize, &mut Outcome) + Sync + Send,
{
    par::map_range(exec, n, |k| {
        let mut out = Outcome::default();
        f(k, &mut out);
        out
    })
    .into_iter()
    .fold(Outcome::default(), Outcome::merge)
}

/// Index pairs into `0..len`: all of them when there are at most `limit`,
/// otherwise `limit` seeded uniform draws.
fn pairs(len: usize, limit: usize, seed: u64) -> Vec<(usize, usize)> {
    let total = len as u128 * len as u128;
    if total <= limit as u128 {
        (0..len).flat_map(|a| (0..len).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..limit)
            .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
            .collect()
    }
}

fn premise(inst: &Instance, cap: usize) -> Premise {
    match check_gs_premise(inst, cap) {
        Ok(()) => Premise {
            gross_substitute: true,
            bidder: None,
            witness: None,
            reason: None,
        },
        Err(Error::NotGrossSubstitute { bidder, witness }) => Premise {
            gross_substitute: false,
            bidder: Some(bidder),
            witness: Some(witness),
            reason: None,
        },
        Err(e) => Premise {
            gross_substitute: false,
            bidder: None,
            witness: None,
            reason: Some(e.to_string()),
        },
    }
}

/// Shared state for one sweep.
struct Sweep<'a> {
    inst: &'a Instance,
    table: ProfileTable<'a>,
    grid: PriceGrid,
    points: usize,
    welfare: u64,
    walrasian: Vec<bool>,
    config: SweepConfig,
}

impl Sweep<'_> {
    fn point(&self, k: usize) -> PriceVector {
        self.grid.point(k)
    }

    fn walrasian_prices(&self) -> Vec<PriceVector> {
        (0..self.points).filter(|&k| self.walrasian[k]).map(|k| self.point(k)).collect()
    }

    fn is_walrasian(&self, p: &PriceVector) -> bool {
        self.grid.index_of(p).is_some_and(|k| self.walrasian[k])
    }

    fn weak_duality(&self) -> Outcome {
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            let l = self.table.lyapunov(&p);
            out.check(l >= self.welfare as i64, || {
                Counterexample::new("lyapunov::lyapunov", "L(p) below the maximum welfare")
                    .at(&p)
                    .values(&[l, self.welfare as i64])
            });
        })
    }

    fn requirement_bounds(&self) -> Outcome {
        let n = self.inst.n() as u32;
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for s in ItemSet::all(self.inst.m()) {
                let (l, h) = (self.table.requirement(&p, s), self.table.redundant(&p, s));
                out.check(l <= h && h <= n * s.len(), || {
                    Counterexample::new("demand::classify_set", "l <= h <= n|S| fails")
                        .at(&p)
                        .set(s)
                        .values(&[l as i64, h as i64])
                });
            }
        })
    }

    fn walrasian_minimizes(&self) -> Outcome {
        scan(self.config.exec, self.points, |k, out| {
            if !self.walrasian[k] {
                return;
            }
            let p = self.point(k);
            let l = self.table.lyapunov(&p);
            out.check(l == self.welfare as i64, || {
                Counterexample::new("equilibrium::is_walrasian", "Walrasian price with L(p) off the maximum welfare")
                    .at(&p)
                    .values(&[l, self.welfare as i64])
            });
        })
    }

    fn gs_equalities(&self) -> Outcome {
        let inst = self.inst;
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for i in 0..inst.n() {
                let u = self.table.max_utility(i, &p);
                for s in ItemSet::all(inst.m()).skip(1) {
                    let up = self.table.max_utility(i, &p.raise(s)) + self.table.bidder_requirement(i, &p, s) as i64;
                    out.check(u == up, || {
                        Counterexample::new("demand::is_gross_substitute", "u(p) != u(p + 1_S) + l_p(S)")
                            .bidder(i)
                            .at(&p)
                            .set(s)
                            .values(&[u, up])
                    });
                    if let Some(q) = p.lower(s) {
                        let down = self.table.max_utility(i, &q) - self.table.bidder_redundant(i, &p, s) as i64;
                        out.check(u == down, || {
                            Counterexample::new("demand::dual_gs_check", "u(p) != u(p - 1_S) - h_p(S)")
                                .bidder(i)
                                .at(&p)
                                .set(s)
                                .values(&[u, down])
                        });
                    }
                }
            }
        })
    }

    fn lyapunov_delta(&self) -> Outcome {
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for s in ItemSet::all(self.inst.m()) {
                let d = lyapunov::delta_up(&self.table, &p, s);
                out.check(d.agrees(), || {
                    Counterexample::new("lyapunov::delta_up", "L(p + 1_S) != L(p) - l^p(S) + |S|")
                        .at(&p)
                        .set(s)
                        .values(&[d.predicted, d.actual])
                });
                if let Ok(d) = lyapunov::delta_down(&self.table, &p, s) {
                    out.check(d.agrees(), || {
                        Counterexample::new("lyapunov::delta_down", "L(p - 1_S) != L(p) + h^p(S) - |S|")
                            .at(&p)
                            .set(s)
                            .values(&[d.predicted, d.actual])
                    });
                }
            }
        })
    }

    fn characterization(&self, bounds: Option<&(PriceVector, PriceVector)>) -> Outcome {
        let Some((lo, hi)) = bounds else {
            let mut out = Outcome::default();
            out.check(false, || Counterexample::new("equilibrium::walrasian_set", "no Walrasian price on the grid"));
            return out;
        };
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            let v = equilibrium::classify_verdict(&self.table, &p);
            let cx = |what: &str, got: bool, want: bool| {
                Counterexample::new("equilibrium::characterize", format!("{what}: verdict {got}, oracle {want}"))
                    .at(&p)
                    .values(&[got as i64, want as i64])
            };
            let want = self.walrasian[k];
            out.check(v.is_walrasian == want, || cx("walrasian", v.is_walrasian, want));
            let want = &p == lo;
            out.check(v.is_min_walrasian == want, || cx("minimum", v.is_min_walrasian, want));
            let want = &p == hi;
            out.check(v.is_max_walrasian == want, || cx("maximum", v.is_max_walrasian, want));
        })
    }

    fn duality(&self) -> Outcome {
        let mut out = Outcome::default();
        let values = par::map_range(self.config.exec, self.points, |k| self.table.lyapunov(&self.point(k)));
        let min = values.iter().copied().min().unwrap_or(i64::MAX);
        out.check(min == self.welfare as i64, || {
            Counterexample::new("lyapunov::grid_minimize_lyapunov", "grid minimum of L differs from the maximum welfare")
                .values(&[min, self.welfare as i64])
        });
        for (k, &l) in values.iter().enumerate() {
            let argmin = l == min;
            out.check(argmin == self.walrasian[k], || {
                let p = self.point(k);
                Counterexample::new("lyapunov::grid_minimize_lyapunov", "argmin of L differs from the Walrasian set")
                    .at(&p)
                    .values(&[l, min, self.walrasian[k] as i64])
            });
        }
        out
    }

    fn auctions(&self, direction: Direction, target: Option<&PriceVector>) -> Outcome {
        let options = AuctionOptions {
            check_premise: false,
            enforce_contract: true,
            gs_check_cap: self.config.gs_check_cap,
        };
        let runs = par::map_slice(self.config.exec, &PolicyKind::shipped(), |&kind| {
            let mut out = Outcome::default();
            let mut policy = Policy::new(kind);
            let name = auction::SelectionPolicy::name(&policy, direction);
            let seed = auction::SelectionPolicy::seed(&policy);
            let cx = |detail: String| Counterexample {
                policy: Some(name.clone()),
                seed,
                ..Counterexample::new("auction::run_auction", detail)
            };
            let trace = match auction::run_auction(&self.table, direction, &mut policy, options) {
                Ok(trace) => trace,
                Err(e) => {
                    out.check(false, || cx(e.to_string()));
                    return out;
                }
            };
            out.check(Some(&trace.final_price) == target, || {
                cx(format!("{direction} run ended away from the extremal equilibrium")).at(&trace.final_price)
            });
            for r in &trace.rounds {
                out.check(r.lyapunov_after < r.lyapunov_before, || {
                    cx("L did not strictly decrease".into())
                        .at(&r.price)
                        .set(r.set)
                        .values(&[r.lyapunov_before, r.lyapunov_after])
                });
            }
            for p in trace.visited() {
                let offending = match direction {
                    Direction::Ascending => ItemSet::all(self.inst.m()).skip(1).find(|&s| {
                        p.can_lower(s) && demand::classify_set(&self.table, p, s).weakly_under
                    }),
                    Direction::Descending => {
                        demand::first_nonempty_in_class(&self.table, p, self.inst.full_set(), DemandClass::WOD)
                    }
                };
                out.check(offending.is_none(), || {
                    cx(format!("invariant broken at a visited price ({direction})")).at(p).set(offending.unwrap())
                });
            }
            out
        });
        runs.into_iter().fold(Outcome::default(), Outcome::merge)
    }

    fn necessity(&self) -> Outcome {
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for s in ItemSet::all(self.inst.m()).skip(1) {
                if !auction::is_excess_demand(&self.table, &p, s) {
                    let w = auction::demonstrate_asc_necessity(&self.table, &p, s);
                    out.check(matches!(w, Ok(Some(_))), || {
                        Counterexample::new("auction::demonstrate_asc_necessity", "no nonempty WUD set after raising a non-ED set")
                            .at(&p)
                            .set(s)
                    });
                }
                if p.can_lower(s) && !auction::is_dearth_demand(&self.table, &p, s) {
                    let w = auction::demonstrate_desc_necessity(&self.table, &p, s);
                    out.check(matches!(w, Ok(Some(_))), || {
                        Counterexample::new("auction::demonstrate_desc_necessity", "no nonempty WOD set after lowering a non-DD set")
                            .at(&p)
                            .set(s)
                    });
                }
            }
        })
    }

    fn submodularity(&self) -> Outcome {
        let pairs = pairs(self.points, self.config.pair_sample, self.config.sample_seed);
        scan(self.config.exec, pairs.len(), |k, out| {
            let (p, q) = (self.point(pairs[k].0), self.point(pairs[k].1));
            let c = lyapunov::submodularity_check(&self.table, &p, &q);
            out.check(c.holds, || {
                Counterexample::new("lyapunov::submodularity_check", "L(p ∧ q) + L(p ∨ q) > L(p) + L(q)")
                    .at(&p)
                    .and(&q)
                    .values(&[c.lhs_meet_join, c.rhs_sum])
            });
        })
    }

    fn lattice(&self, walrasian: &[PriceVector]) -> Outcome {
        let pairs = pairs(walrasian.len(), self.config.pair_sample, self.config.sample_seed);
        scan(self.config.exec, pairs.len(), |k, out| {
            let (p, q) = (&walrasian[pairs[k].0], &walrasian[pairs[k].1]);
            let (meet, join) = (p.meet(q), p.join(q));
            out.check(self.is_walrasian(&meet) && self.is_walrasian(&join), || {
                Counterexample::new("equilibrium::lattice_check", "meet or join of Walrasian prices is not Walrasian")
                    .at(p)
                    .and(q)
            });
        })
    }

    fn monotonicity(&self) -> Outcome {
        let m = self.inst.m();
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for t in ItemSet::all(m).skip(1) {
                let raised = p.raise(t);
                for s in ItemSet::full(m).difference(t).subsets().skip(1) {
                    for i in 0..self.inst.n() {
                        let before = self.table.bidder_requirement(i, &p, s);
                        let after = self.table.bidder_requirement(i, &raised, s);
                        out.check(before <= after, || {
                            Counterexample::new("demand::requirement", "l_p(S) > l_{p+1_T}(S) for disjoint S, T")
                                .bidder(i)
                                .at(&p)
                                .set(s)
                                .other_set(t)
                                .values(&[before as i64, after as i64])
                        });
                    }
                }
            }
        })
    }

    fn single_improvement(&self) -> Outcome {
        scan(self.config.exec, self.points, |k, out| {
            let p = self.point(k);
            for (i, v) in self.inst.bidders().iter().enumerate() {
                let utils = demand::utilities(v, &p);
                let best = *utils.iter().max().expect("nonempty");
                for s in ItemSet::all(self.inst.m()) {
                    if utils[s.index()] == best {
                        continue;
                    }
                    out.check(demand::improve_from_utilities(&utils, s).is_some(), || {
                        Counterexample::new("demand::single_improvement", "no single improvement for a non-demanded set")
                            .bidder(i)
                            .at(&p)
                            .set(s)
                    });
                }
            }
        })
    }
}

/// Runs every suite. Premise-dependent suites are skipped, not failed, when
/// some bidder is not gross substitute.
pub fn selftest(inst: &Instance, config: SweepConfig) -> Result<SweepReport> {
    let premise = premise(inst, config.gs_check_cap);
    let table = ProfileTable::build_with(inst, config.exec)?;
    let grid = inst.grid();
    let points = demand::grid_points(&grid, (inst.n() as u128) << (2 * inst.m()), "self-test sweep")?;
    let welfare = max_welfare(inst)?.value;
    let walrasian = par::map_range(config.exec, points, |k| {
        equilibrium::is_walrasian(inst, &grid.point(k)).is_some()
    });
    let sweep = Sweep {
        inst,
        table,
        grid,
        points,
        welfare,
        walrasian,
        config,
    };

    let mut suites = vec![
        sweep.weak_duality().into_result("weak_duality"),
        sweep.requirement_bounds().into_result("requirement_bounds"),
        sweep.walrasian_minimizes().into_result("walrasian_minimizes"),
    ];
    let walrasian = sweep.walrasian_prices();
    if premise.gross_substitute {
        let bounds = walrasian.first().map(|first| {
            let lo = walrasian.iter().fold(first.clone(), |a, p| a.meet(p));
            let hi = walrasian.iter().fold(first.clone(), |a, p| a.join(p));
            (lo, hi)
        });
        let (lo, hi) = (bounds.as_ref().map(|b| &b.0), bounds.as_ref().map(|b| &b.1));
        suites.extend([
            sweep.gs_equalities().into_result("gs_equalities"),
            sweep.lyapunov_delta().into_result("lyapunov_delta"),
            sweep.characterization(bounds.as_ref()).into_result("characterization"),
            sweep.duality().into_result("duality"),
            sweep.auctions(Direction::Ascending, lo).into_result("ascending"),
            sweep.auctions(Direction::Descending, hi).into_result("descending"),
            sweep.necessity().into_result("necessity"),
            sweep.submodularity().into_result("submodularity"),
            sweep.lattice(&walrasian).into_result("lattice"),
            sweep.monotonicity().into_result("monotonicity"),
            sweep.single_improvement().into_result("single_improvement"),
        ]);
    } else {
        suites.extend(GS_SUITES.iter().map(|&name| SuiteResult {
            name,
            status: SuiteStatus::Skipped,
            checked: 0,
            failed: 0,
            counterexample: None,
        }));
    }
    let passed = premise.gross_substitute && suites.iter().all(|s| s.status == SuiteStatus::Passed);
    Ok(SweepReport {
        digest: inst.digest(),
        m: inst.m(),
        n: inst.n(),
        grid_bound: inst.grid_bound(),
        premise,
        max_welfare: welfare,
        walrasian_count: walrasian.len(),
        suites,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenerateSpec};
    use crate::instance::fixtures::*;
    use crate::valuation::Valuation;

    #[test]
    fn fixtures_pass() {
        for inst in [e1(), u1(), z0(), z0_unit_demand()] {
            let r = selftest(&inst, SweepConfig::default()).unwrap();
            for s in &r.suites {
                assert_eq!(s.status, SuiteStatus::Passed, "{}: {:?}", s.name, s.counterexample);
            }
            assert!(r.passed);
        }
    }

    #[test]
    fn x1_skips_premise_suites() {
        let inst = Instance::new(2, vec![x1().bidders()[0].clone(), Valuation::additive(&[1, 1]).unwrap()]).unwrap();
        let r = selftest(&inst, SweepConfig::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.premise.bidder, Some(0));
        let w = r.premise.witness.as_ref().unwrap();
        assert_eq!((w.price.clone(), w.set), (PriceVector::new(vec![1, 1]), ItemSet::full(2)));
        assert_eq!(r.skipped(), GS_SUITES.to_vec());
        for name in PREMISE_FREE_SUITES {
            assert_eq!(r.suite(name).unwrap().status, SuiteStatus::Passed);
        }
    }

    #[test]
    fn generated_instance_passes() {
        let inst = generate(&GenerateSpec {
            m: 4,
            n: 4,
            max_value: 4,
            mix: crate::generate::Mix::Mixed,
            seed: 42,
        })
        .unwrap();
        let r = selftest(&inst, SweepConfig::default()).unwrap();
        for s in &r.suites {
            assert_eq!(s.status, SuiteStatus::Passed, "{}: {:?}", s.name, s.counterexample);
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let inst = u1();
        let a = selftest(&inst, SweepConfig { exec: Exec::Sequential, ..SweepConfig::default() }).unwrap();
        let b = selftest(&inst, SweepConfig { exec: Exec::Parallel, ..SweepConfig::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_pairs_are_reproducible() {
        assert_eq!(pairs(3, 100, 1).len(), 9);
        let a = pairs(1000, 50, 9);
        assert_eq!(a.len(), 50);
        assert_eq!(a, pairs(1000, 50, 9));
    }

    #[test]
    fn counterexamples_replay() {
        // A deliberately broken claim: the first failure must carry the
        // values that a direct call reproduces.
        let inst = x1();
        let table = ProfileTable::build(&inst).unwrap();
        let sweep = Sweep {
            inst: &inst,
            grid: inst.grid(),
            points: inst.grid().len(),
            welfare: max_welfare(&inst).unwrap().value,
            walrasian: vec![false; inst.grid().len()],
            config: SweepConfig::default(),
            table,
        };
        let out = sweep.lyapunov_delta();
        let cx = out.first.unwrap();
        let (p, s) = (cx.price.as_ref().unwrap(), cx.set.unwrap());
        let d = match cx.operation {
            "lyapunov::delta_up" => lyapunov::delta_up(&inst, p, s),
            _ => lyapunov::delta_down(&inst, p, s).unwrap(),
        };
        assert!(!d.agrees());
        assert_eq!(cx.values, vec![d.predicted, d.actual]);
    }
}
