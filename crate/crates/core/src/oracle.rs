//! Price-level queries shared by the set-system, equilibrium and auction code.
//!
//! [`Instance`] answers every query by direct enumeration. [`ProfileTable`]
//! memoizes the same answers over the extended grid `[0, B + 1]^m` for
//! exhaustive sweeps and falls back to direct enumeration off the grid.

use crate::demand::{self, DemandResult, WORK_LIMIT};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::items::ItemSet;
use crate::par::{self, Exec};
use crate::price::{PriceGrid, PriceVector};

pub trait PriceOracle: Sync {
    fn instance(&self) -> &Instance;

    fn m(&self) -> usize {
        self.instance().m()
    }

    /// `u_i(p)`.
    fn max_utility(&self, bidder: usize, p: &PriceVector) -> i64;

    /// `l_{i,p}(S)`.
    fn bidder_requirement(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32;

    /// `h_{i,p}(S)`.
    fn bidder_redundant(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32;

    /// `l^p(S)`.
    fn requirement(&self, p: &PriceVector, s: ItemSet) -> u32 {
        (0..self.instance().n()).map(|i| self.bidder_requirement(i, p, s)).sum()
    }

    /// `h^p(S)`.
    fn redundant(&self, p: &PriceVector, s: ItemSet) -> u32 {
        (0..self.instance().n()).map(|i| self.bidder_redundant(i, p, s)).sum()
    }

    /// `L(p) = Σ_i u_i(p) + Σ_j p_j`.
    fn lyapunov(&self, p: &PriceVector) -> i64 {
        let utils: i64 = (0..self.instance().n()).map(|i| self.max_utility(i, p)).sum();
        utils + p.mass() as i64
    }
}

impl PriceOracle for Instance {
    fn instance(&self) -> &Instance {
        self
    }

    fn max_utility(&self, bidder: usize, p: &PriceVector) -> i64 {
        demand::max_utility(&self.bidders()[bidder], p)
    }

    fn bidder_requirement(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32 {
        demand::requirement(&self.bidders()[bidder], p, s)
    }

    fn bidder_redundant(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32 {
        demand::redundant(&self.bidders()[bidder], p, s)
    }

    fn requirement(&self, p: &PriceVector, s: ItemSet) -> u32 {
        demand::auction_requirement(self, p, s)
    }

    fn redundant(&self, p: &PriceVector, s: ItemSet) -> u32 {
        demand::auction_redundant(self, p, s)
    }
}

/// Per-price memo of utilities, requirements and redundants for every bidder
/// and every bundle, over `[0, B + 1]^m`.
#[derive(Debug)]
pub struct ProfileTable<'a> {
    inst: &'a Instance,
    grid: PriceGrid,
    sets: usize,
    // indexed [point][bidder]
    utility: Vec<i64>,
    // indexed [point][bidder][set]
    bidder_req: Vec<u8>,
    bidder_red: Vec<u8>,
    // indexed [point][set]
    req: Vec<u16>,
    red: Vec<u16>,
    // indexed [point]
    lyapunov: Vec<i64>,
}

/// Largest table, in per-(point, bidder, set) cells, that `build` accepts.
pub const TABLE_CELL_LIMIT: u128 = 1 << 28;

struct PointProfile {
    utility: Vec<i64>,
    bidder_req: Vec<u8>,
    bidder_red: Vec<u8>,
}

impl<'a> ProfileTable<'a> {
    pub fn build(inst: &'a Instance) -> Result<Self> {
        Self::build_with(inst, Exec::default())
    }

    pub fn build_with(inst: &'a Instance, exec: Exec) -> Result<Self> {
        let m = inst.m();
        let n = inst.n();
        let sets = 1usize << m;
        let grid = PriceGrid::new(m, inst.grid_bound() + 1);
        let points = grid.checked_len().ok_or(Error::TooLarge {
            what: "profile table",
            needed: u128::MAX,
            limit: TABLE_CELL_LIMIT,
        })?;
        let cells = points as u128 * n as u128 * sets as u128;
        if cells > TABLE_CELL_LIMIT || cells * sets as u128 > WORK_LIMIT {
            return Err(Error::TooLarge {
                what: "profile table",
                needed: cells,
                limit: TABLE_CELL_LIMIT,
            });
        }

        let profiles = par::map_range(exec, points, |idx| {
            let p = grid.point(idx);
            let mut prof = PointProfile {
                utility: Vec::with_capacity(n),
                bidder_req: Vec::with_capacity(n * sets),
                bidder_red: Vec::with_capacity(n * sets),
            };
            for v in inst.bidders() {
                let d = demand::demand_sets(v, &p);
                prof.utility.push(d.max_utility);
                push_counts(&d, sets, &mut prof.bidder_req, &mut prof.bidder_red);
            }
            prof
        });

        let mut table = ProfileTable {
            inst,
            grid,
            sets,
            utility: Vec::with_capacity(points * n),
            bidder_req: Vec::with_capacity(points * n * sets),
            bidder_red: Vec::with_capacity(points * n * sets),
            req: Vec::with_capacity(points * sets),
            red: Vec::with_capacity(points * sets),
            lyapunov: Vec::with_capacity(points),
        };
        for (idx, prof) in profiles.into_iter().enumerate() {
            let mass = grid.point(idx).mass() as i64;
            table.lyapunov.push(prof.utility.iter().sum::<i64>() + mass);
            for s in 0..sets {
                let (mut l, mut h) = (0u16, 0u16);
                for i in 0..n {
                    l += prof.bidder_req[i * sets + s] as u16;
                    h += prof.bidder_red[i * sets + s] as u16;
                }
                table.req.push(l);
                table.red.push(h);
            }
            table.utility.extend(prof.utility);
            table.bidder_req.extend(prof.bidder_req);
            table.bidder_red.extend(prof.bidder_red);
        }
        Ok(table)
    }

    /// The memoized region, `[0, B + 1]^m`.
    pub fn grid(&self) -> PriceGrid {
        self.grid
    }

    fn slot(&self, p: &PriceVector) -> Option<usize> {
        self.grid.index_of(p)
    }
}

fn push_counts(d: &DemandResult, sets: usize, req: &mut Vec<u8>, red: &mut Vec<u8>) {
    let start = req.len();
    req.resize(start + sets, u8::MAX);
    red.resize(start + sets, 0);
    for dset in &d.sets {
        for s in 0..sets {
            let k = (dset.bits() & s as u32).count_ones() as u8;
            let (lo, hi) = (&mut req[start + s], &mut red[start + s]);
            *lo = (*lo).min(k);
            *hi = (*hi).max(k);
        }
    }
}

impl PriceOracle for ProfileTable<'_> {
    fn instance(&self) -> &Instance {
        self.inst
    }

    fn max_utility(&self, bidder: usize, p: &PriceVector) -> i64 {
        match self.slot(p) {
            Some(k) => self.utility[k * self.inst.n() + bidder],
            None => self.inst.max_utility(bidder, p),
        }
    }

    fn bidder_requirement(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32 {
        match self.slot(p) {
            Some(k) => self.bidder_req[(k * self.inst.n() + bidder) * self.sets + s.index()] as u32,
            None => self.inst.bidder_requirement(bidder, p, s),
        }
    }

    fn bidder_redundant(&self, bidder: usize, p: &PriceVector, s: ItemSet) -> u32 {
        match self.slot(p) {
            Some(k) => self.bidder_red[(k * self.inst.n() + bidder) * self.sets + s.index()] as u32,
            None => self.inst.bidder_redundant(bidder, p, s),
        }
    }

    fn requirement(&self, p: &PriceVector, s: ItemSet) -> u32 {
        match self.slot(p) {
            Some(k) => self.req[k * self.sets + s.index()] as u32,
            None => self.inst.requirement(p, s),
        }
    }

    fn redundant(&self, p: &PriceVector, s: ItemSet) -> u32 {
        match self.slot(p) {
            Some(k) => self.red[k * self.sets + s.index()] as u32,
            None => self.inst.redundant(p, s),
        }
    }

    fn lyapunov(&self, p: &PriceVector) -> i64 {
        match self.slot(p) {
            Some(k) => self.lyapunov[k],
            None => self.inst.lyapunov(p),
        }
    }
}
