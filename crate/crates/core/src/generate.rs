//! Seeded random instances built from additive and unit-demand bidders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::demand::{self, GsCheck};
use crate::error::{Error, Result};
use crate::instance::{Instance, MAX_BIDDERS};
use crate::items::MAX_ITEMS;
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mix {
    Additive,
    UnitDemand,
    Mixed,
}

impl Mix {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "additive" => Some(Mix::Additive),
            "unit-demand" | "unit_demand" => Some(Mix::UnitDemand),
            "mixed" => Some(Mix::Mixed),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateSpec {
    pub m: usize,
    pub n: usize,
    pub max_value: u64,
    pub mix: Mix,
    pub seed: u64,
}

impl GenerateSpec {
    /// Corpus member `seed`: `m = 1 + seed % 4`, `n = 1 + (seed / 4) % 4`,
    /// item values up to 4, mixed kinds.
    pub fn corpus(seed: u64) -> Self {
        GenerateSpec {
            m: 1 + (seed % 4) as usize,
            n: 1 + ((seed / 4) % 4) as usize,
            max_value: 4,
            mix: Mix::Mixed,
            seed,
        }
    }
}

/// Additive and unit-demand values up to this bound keep every sum inside `u64`.
pub const MAX_GENERATED_VALUE: u64 = 1 << 40;

pub fn generate(spec: &GenerateSpec) -> Result<Instance> {
    if !(1..=MAX_ITEMS).contains(&spec.m) {
        return Err(Error::Cap {
            what: "m",
            value: spec.m,
            max: MAX_ITEMS,
        });
    }
    if !(1..=MAX_BIDDERS).contains(&spec.n) {
        return Err(Error::Cap {
            what: "n",
            value: spec.n,
            max: MAX_BIDDERS,
        });
    }
    if spec.max_value > MAX_GENERATED_VALUE {
        return Err(Error::Domain(format!(
            "max value {} above {MAX_GENERATED_VALUE}",
            spec.max_value
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bidders = (0..spec.n)
        .map(|_| {
            let unit = match spec.mix {
                Mix::Additive => false,
                Mix::UnitDemand => true,
                Mix::Mixed => rng.gen_bool(0.5),
            };
            let values: Vec<u64> = (0..spec.m).map(|_| rng.gen_range(0..=spec.max_value)).collect();
            if unit {
                Valuation::unit_demand(&values)
            } else {
                Valuation::additive(&values)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(spec.m, bidders)
}

/// Runs the exhaustive gross-substitute check on every bidder. Returns the
/// first failing bidder with its witness, which would indicate a bug in the
/// valuation builders.
pub fn verify_generated(inst: &Instance, m_check_cap: usize) -> Result<Option<(usize, GsCheck)>> {
    for (i, v) in inst.bidders().iter().enumerate() {
        let check = demand::is_gross_substitute(v, m_check_cap)?;
        if !check.is_gross_substitute() {
            return Ok(Some((i, check)));
        }
    }
    Ok(None)
}
