//! Excess/dearth demand set systems and the ascending/descending auction
//! engines.
//!
//! The engine accepts any [`SelectionPolicy`] but re-checks every selection
//! against the excess (ascending) or dearth (descending) demand collection at
//! the current price. A selection outside that collection aborts the run
//! unless contract enforcement is switched off, in which case the breach and
//! the weakly under-/over-demanded set it creates are recorded.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::demand::{self, check_gs_premise, DemandClass, DEFAULT_GS_CHECK_CAP};
use crate::error::Error;
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::oracle::PriceOracle;
use crate::price::PriceVector;

/// `S ∈ OD(p)` and no nonempty `T ⊆ S` is weakly under-demanded at `p + 1_S`.
pub fn is_excess_demand<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector, s: ItemSet) -> bool {
    excess_demand_reading(oracle, p, s, Reading::Verbatim)
}

/// `S ∈ UD(p)`, `p >= 1_S` and no nonempty `T ⊆ S` is weakly over-demanded
/// at `p - 1_S`.
pub fn is_dearth_demand<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector, s: ItemSet) -> bool {
    dearth_demand_reading(oracle, p, s, Reading::Verbatim)
}

/// `ED(p)`, ascending bitmask order.
pub fn excess_demand_sets<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> Vec<ItemSet> {
    ItemSet::all(oracle.m()).filter(|&s| is_excess_demand(oracle, p, s)).collect()
}

/// `DD(p)`, ascending bitmask order.
pub fn dearth_demand_sets<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> Vec<ItemSet> {
    ItemSet::all(oracle.m()).filter(|&s| is_dearth_demand(oracle, p, s)).collect()
}

/// Which subsets `T` the excess/dearth definitions quantify over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reading {
    /// Every nonempty `T ⊆ S`.
    Verbatim,
    /// Every nonempty `T ⊊ S`.
    ProperSubsets,
}

fn reading_subsets(s: ItemSet, reading: Reading) -> impl Iterator<Item = ItemSet> {
    s.nonempty_subsets().filter(move |&t| reading == Reading::Verbatim || t != s)
}

fn excess_demand_reading<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
    reading: Reading,
) -> bool {
    if !demand::classify_set(oracle, p, s).over {
        return false;
    }
    let raised = p.raise(s);
    !reading_subsets(s, reading).any(|t| demand::classify_set(oracle, &raised, t).weakly_under)
}

fn dearth_demand_reading<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
    reading: Reading,
) -> bool {
    let Some(lowered) = p.lower(s) else {
        return false;
    };
    if !demand::classify_set(oracle, p, s).under {
        return false;
    }
    !reading_subsets(s, reading).any(|t| demand::classify_set(oracle, &lowered, t).weakly_over)
}

/// The set system under both readings of "every nonempty subset".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadingComparison {
    pub verbatim: Vec<ItemSet>,
    pub proper_subsets: Vec<ItemSet>,
}

impl ReadingComparison {
    pub fn agree(&self) -> bool {
        self.verbatim == self.proper_subsets
    }
}

pub fn excess_demand_readings<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> ReadingComparison {
    let collect = |r| {
        ItemSet::all(oracle.m())
            .filter(|&s| excess_demand_reading(oracle, p, s, r))
            .collect()
    };
    ReadingComparison {
        verbatim: collect(Reading::Verbatim),
        proper_subsets: collect(Reading::ProperSubsets),
    }
}

pub fn dearth_demand_readings<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> ReadingComparison {
    let collect = |r| {
        ItemSet::all(oracle.m())
            .filter(|&s| dearth_demand_reading(oracle, p, s, r))
            .collect()
    };
    ReadingComparison {
        verbatim: collect(Reading::Verbatim),
        proper_subsets: collect(Reading::ProperSubsets),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinimizerChoice {
    pub set: ItemSet,
    /// Potential after the move.
    pub value: i64,
    /// False when several inclusion-extremal argmins exist; `set` is then
    /// the one with the smallest bitmask.
    pub unique: bool,
}

/// The inclusion-minimal `S` minimizing `L(p + 1_S)`, provided the move
/// strictly lowers `L`.
pub fn minimal_minimizer<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> Option<MinimizerChoice> {
    let moves: Vec<(ItemSet, i64)> = ItemSet::all(oracle.m())
        .map(|s| (s, oracle.lyapunov(&p.raise(s))))
        .collect();
    minimal_argmin(oracle.lyapunov(p), &moves)
}

/// An `S` with `p >= 1_S` minimizing `L(p - 1_S)` such that every proper
/// subset does strictly worse, provided the move strictly lowers `L`. This
/// is the inclusion-minimal argmin.
pub fn maximal_minimizer<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector) -> Option<MinimizerChoice> {
    let moves: Vec<(ItemSet, i64)> = ItemSet::all(oracle.m())
        .filter_map(|s| p.lower(s).map(|q| (s, oracle.lyapunov(&q))))
        .collect();
    minimal_argmin(oracle.lyapunov(p), &moves)
}

/// The inclusion-maximal `S` with `p >= 1_S` minimizing `L(p - 1_S)`, if it
/// strictly lowers `L`. Not a dearth-demand selector in general.
pub fn largest_descending_argmin<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
) -> Option<MinimizerChoice> {
    let moves: Vec<(ItemSet, i64)> = ItemSet::all(oracle.m())
        .filter_map(|s| p.lower(s).map(|q| (s, oracle.lyapunov(&q))))
        .collect();
    extremal_argmin(oracle.lyapunov(p), &moves, |a, b| b.is_proper_subset_of(a))
}

fn minimal_argmin(current: i64, moves: &[(ItemSet, i64)]) -> Option<MinimizerChoice> {
    extremal_argmin(current, moves, |a, b| a.is_proper_subset_of(b))
}

// `beats(a, b)`: `a` is preferred over `b` by inclusion.
fn extremal_argmin(
    current: i64,
    moves: &[(ItemSet, i64)],
    beats: impl Fn(ItemSet, ItemSet) -> bool,
) -> Option<MinimizerChoice> {
    let best = moves.iter().map(|&(_, l)| l).min()?;
    if best >= current {
        return None;
    }
    let argmins: Vec<ItemSet> = moves.iter().filter(|&&(_, l)| l == best).map(|&(s, _)| s).collect();
    let extremal: Vec<ItemSet> = argmins
        .iter()
        .copied()
        .filter(|&s| !argmins.iter().any(|&t| beats(t, s)))
        .collect();
    Some(MinimizerChoice {
        set: extremal[0],
        value: best,
        unique: extremal.len() == 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "asc" | "ascending" => Some(Direction::Ascending),
            "desc" | "descending" => Some(Direction::Descending),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ascending => "ascending",
            Direction::Descending => "descending",
        })
    }
}

/// What a policy sees each round.
pub struct RoundContext<'a> {
    pub oracle: &'a dyn PriceOracle,
    pub direction: Direction,
    pub price: &'a PriceVector,
    /// `ED(p)` when ascending, `DD(p)` when descending; never empty.
    pub candidates: &'a [ItemSet],
}

/// Chooses the set whose prices move next.
pub trait SelectionPolicy {
    fn name(&self, direction: Direction) -> String;

    fn seed(&self) -> Option<u64> {
        None
    }

    fn select(&mut self, ctx: &RoundContext<'_>) -> Option<ItemSet>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Minimal minimizer ascending, maximal minimizer descending.
    Minimizer,
    /// Smallest bitmask in the collection.
    LexFirst,
    /// Uniform draw from the collection.
    Random(u64),
    /// Largest cardinality, ties to the smallest bitmask.
    Largest,
    /// Every item each round, whether or not that set is in the collection.
    Uniform,
}

impl PolicyKind {
    /// Parses a policy name; `seed` applies to `random`.
    pub fn parse(name: &str, seed: u64) -> Option<Self> {
        match name {
            "minimal-minimizer" | "maximal-minimizer" | "minimizer" => Some(PolicyKind::Minimizer),
            "lex-first" => Some(PolicyKind::LexFirst),
            "random" => Some(PolicyKind::Random(seed)),
            "largest" | "largest-cardinality" => Some(PolicyKind::Largest),
            "uniform" => Some(PolicyKind::Uniform),
            _ => None,
        }
    }

    /// The policies that stay inside the framework.
    pub fn shipped() -> Vec<PolicyKind> {
        vec![
            PolicyKind::Minimizer,
            PolicyKind::LexFirst,
            PolicyKind::Random(1),
            PolicyKind::Random(2),
            PolicyKind::Random(3),
            PolicyKind::Largest,
        ]
    }
}

/// A built-in policy.
#[derive(Clone, Debug)]
pub struct Policy {
    kind: PolicyKind,
    rng: Option<ChaCha8Rng>,
}

impl Policy {
    pub fn new(kind: PolicyKind) -> Self {
        let rng = match kind {
            PolicyKind::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Policy { kind, rng }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }
}

impl SelectionPolicy for Policy {
    fn name(&self, direction: Direction) -> String {
        match (self.kind, direction) {
            (PolicyKind::Minimizer, Direction::Ascending) => "minimal-minimizer",
            (PolicyKind::Minimizer, Direction::Descending) => "maximal-minimizer",
            (PolicyKind::LexFirst, _) => "lex-first",
            (PolicyKind::Random(_), _) => "random",
            (PolicyKind::Largest, _) => "largest",
            (PolicyKind::Uniform, _) => "uniform",
        }
        .to_string()
    }

    fn seed(&self) -> Option<u64> {
        match self.kind {
            PolicyKind::Random(seed) => Some(seed),
            _ => None,
        }
    }

    fn select(&mut self, ctx: &RoundContext<'_>) -> Option<ItemSet> {
        match self.kind {
            PolicyKind::Minimizer => match ctx.direction {
                Direction::Ascending => minimal_minimizer(ctx.oracle, ctx.price),
                Direction::Descending => maximal_minimizer(ctx.oracle, ctx.price),
            }
            .map(|c| c.set),
            PolicyKind::LexFirst => ctx.candidates.first().copied(),
            PolicyKind::Random(_) => {
                let rng = self.rng.as_mut().expect("random policy carries its rng");
                let k = rng.gen_range(0..ctx.candidates.len());
                Some(ctx.candidates[k])
            }
            PolicyKind::Largest => ctx
                .candidates
                .iter()
                .copied()
                .min_by_key(|s| (std::cmp::Reverse(s.len()), s.bits())),
            PolicyKind::Uniform => Some(ItemSet::full(ctx.oracle.m())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRound {
    /// Price at which `set` was selected.
    pub price: PriceVector,
    pub set: ItemSet,
    #[serde(rename = "L_before")]
    pub lyapunov_before: i64,
    #[serde(rename = "L_after")]
    pub lyapunov_after: i64,
}

/// A selection outside the collection, allowed only with enforcement off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breach {
    pub round: usize,
    pub price: PriceVector,
    pub set: ItemSet,
    /// Nonempty set that became weakly under-demanded (ascending) or weakly
    /// over-demanded (descending) after the move.
    pub culprit: Option<ItemSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuctionTrace {
    pub direction: Direction,
    pub policy: String,
    pub seed: Option<u64>,
    pub rounds: Vec<TraceRound>,
    pub final_price: PriceVector,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub breaches: Vec<Breach>,
}

impl AuctionTrace {
    /// Every price visited, start and final included.
    pub fn visited(&self) -> impl Iterator<Item = &PriceVector> {
        self.rounds.iter().map(|r| &r.price).chain(std::iter::once(&self.final_price))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuctionOptions {
    /// Check the gross-substitute premise before starting.
    pub check_premise: bool,
    /// Abort on selections outside ED/DD.
    pub enforce_contract: bool,
    pub gs_check_cap: usize,
}

impl Default for AuctionOptions {
    fn default() -> Self {
        AuctionOptions {
            check_premise: true,
            enforce_contract: true,
            gs_check_cap: DEFAULT_GS_CHECK_CAP,
        }
    }
}

impl AuctionOptions {
    /// Neither premise nor contract is enforced.
    pub fn unchecked() -> Self {
        AuctionOptions {
            check_premise: false,
            enforce_contract: false,
            ..AuctionOptions::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum AuctionError {
    #[error("framework contract violated in round {round} at {price}: {reason}")]
    ContractViolation {
        round: usize,
        price: PriceVector,
        set: Option<ItemSet>,
        reason: String,
        trace: Box<AuctionTrace>,
    },
    #[error("auction did not terminate within {limit} rounds")]
    RoundLimit { limit: usize, trace: Box<AuctionTrace> },
    #[error(transparent)]
    Instance(#[from] Error),
}

/// Ascending run from `0^m`.
pub fn run_ascending(
    inst: &Instance,
    policy: &mut dyn SelectionPolicy,
    options: AuctionOptions,
) -> Result<AuctionTrace, AuctionError> {
    run_auction(inst, Direction::Ascending, policy, options)
}

/// Descending run from `(Vmax, ..., Vmax)`.
pub fn run_descending(
    inst: &Instance,
    policy: &mut dyn SelectionPolicy,
    options: AuctionOptions,
) -> Result<AuctionTrace, AuctionError> {
    run_auction(inst, Direction::Descending, policy, options)
}

pub fn start_price(inst: &Instance, direction: Direction) -> PriceVector {
    match direction {
        Direction::Ascending => PriceVector::zeros(inst.m()),
        Direction::Descending => PriceVector::uniform(inst.m(), inst.vmax()),
    }
}

pub fn run_auction<O: PriceOracle>(
    oracle: &O,
    direction: Direction,
    policy: &mut dyn SelectionPolicy,
    options: AuctionOptions,
) -> Result<AuctionTrace, AuctionError> {
    let inst = oracle.instance();
    if options.check_premise {
        check_gs_premise(inst, options.gs_check_cap)?;
    }
    let mut trace = AuctionTrace {
        direction,
        policy: policy.name(direction),
        seed: policy.seed(),
        rounds: Vec::new(),
        final_price: start_price(inst, direction),
        breaches: Vec::new(),
    };
    // L strictly decreases under the contract and never goes below zero.
    let limit = oracle.lyapunov(&trace.final_price).max(0) as usize
        + inst.m() * (inst.grid_bound() as usize + 1)
        + 1;

    loop {
        let p = trace.final_price.clone();
        let candidates = match direction {
            Direction::Ascending => excess_demand_sets(oracle, &p),
            Direction::Descending => dearth_demand_sets(oracle, &p),
        };
        if candidates.is_empty() {
            return Ok(trace);
        }
        let round = trace.rounds.len();
        if round >= limit {
            return Err(AuctionError::RoundLimit {
                limit,
                trace: Box::new(trace),
            });
        }
        let ctx = RoundContext {
            oracle,
            direction,
            price: &p,
            candidates: &candidates,
        };
        let violation = |set, reason: String, trace: AuctionTrace| AuctionError::ContractViolation {
            round,
            price: p.clone(),
            set,
            reason,
            trace: Box::new(trace),
        };
        let Some(s) = policy.select(&ctx) else {
            return Err(violation(None, "policy selected nothing while the collection is nonempty".into(), trace));
        };
        if !s.fits(inst.m()) {
            return Err(violation(Some(s), format!("{s} names items outside the instance"), trace));
        }
        let next = match direction {
            Direction::Ascending => p.raise(s),
            Direction::Descending => match p.lower(s) {
                Some(q) => q,
                None => return Err(violation(Some(s), format!("cannot lower {s} below zero"), trace)),
            },
        };
        if candidates.binary_search(&s).is_err() {
            let system = match direction {
                Direction::Ascending => "ED",
                Direction::Descending => "DD",
            };
            if options.enforce_contract {
                return Err(violation(Some(s), format!("{s} is not in {system}{p}"), trace));
            }
            let culprit = match direction {
                Direction::Ascending => asc_culprit(oracle, &p, s),
                Direction::Descending => desc_culprit(oracle, &p, s),
            };
            trace.breaches.push(Breach {
                round,
                price: p.clone(),
                set: s,
                culprit,
            });
        }
        trace.rounds.push(TraceRound {
            price: p.clone(),
            set: s,
            lyapunov_before: oracle.lyapunov(&p),
            lyapunov_after: oracle.lyapunov(&next),
        });
        trace.final_price = next;
    }
}

/// A nonempty weakly under-demanded set created by raising `S` where `S` is
/// not in excess demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundWitness {
    pub price: PriceVector,
    pub set: ItemSet,
    pub culprit: ItemSet,
    /// `h` (ascending) or `l` (descending) of the culprit after the move.
    pub count: u32,
}

fn asc_culprit<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector, s: ItemSet) -> Option<ItemSet> {
    let full = ItemSet::full(oracle.m());
    demand::first_nonempty_in_class(oracle, &p.raise(s), full, DemandClass::WUD)
}

fn desc_culprit<O: PriceOracle + ?Sized>(oracle: &O, p: &PriceVector, s: ItemSet) -> Option<ItemSet> {
    let full = ItemSet::full(oracle.m());
    let lowered = p.lower(s)?;
    demand::first_nonempty_in_class(oracle, &lowered, full, DemandClass::WOD)
}

/// For nonempty `S ∉ ED(p)`, the smallest nonempty `T ∈ WUD(p + 1_S)`.
/// `Ok(None)` means no such `T` exists, which cannot happen for gross
/// substitute instances.
pub fn demonstrate_asc_necessity<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
) -> Result<Option<LowerBoundWitness>, Error> {
    oracle.instance().check_price(p)?;
    oracle.instance().check_set(s)?;
    if s.is_empty() {
        return Err(Error::Precondition("the raised set must be nonempty".into()));
    }
    if is_excess_demand(oracle, p, s) {
        return Err(Error::Precondition(format!("{s} is in ED{p}")));
    }
    let raised = p.raise(s);
    Ok(asc_culprit(oracle, p, s).map(|t| LowerBoundWitness {
        price: p.clone(),
        set: s,
        culprit: t,
        count: oracle.redundant(&raised, t),
    }))
}

/// For nonempty `S ∉ DD(p)` with `p >= 1_S`, the smallest nonempty
/// `T ∈ WOD(p - 1_S)`.
pub fn demonstrate_desc_necessity<O: PriceOracle + ?Sized>(
    oracle: &O,
    p: &PriceVector,
    s: ItemSet,
) -> Result<Option<LowerBoundWitness>, Error> {
    oracle.instance().check_price(p)?;
    oracle.instance().check_set(s)?;
    if s.is_empty() {
        return Err(Error::Precondition("the lowered set must be nonempty".into()));
    }
    let lowered = p.lower(s).ok_or_else(|| Error::NegativePrice {
        price: p.clone(),
        set: s,
    })?;
    if is_dearth_demand(oracle, p, s) {
        return Err(Error::Precondition(format!("{s} is in DD{p}")));
    }
    Ok(desc_culprit(oracle, p, s).map(|t| LowerBoundWitness {
        price: p.clone(),
        set: s,
        culprit: t,
        count: oracle.requirement(&lowered, t),
    }))
}
