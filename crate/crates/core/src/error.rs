use thiserror::Error;

use crate::demand::GsWitness;
use crate::items::ItemSet;
use crate::price::PriceVector;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("valuation table length {0} is not a power of two")]
    TableLength(usize),

    #[error("{what} = {value} is outside the supported range 1..={max}")]
    Cap {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("valuation is not normalized: v(∅) = {0}")]
    NotNormalized(u64),

    #[error("valuation is not monotone: v({subset}) = {low_value} > v({superset}) = {high_value}")]
    NotMonotone {
        subset: ItemSet,
        superset: ItemSet,
        low_value: u64,
        high_value: u64,
    },

    #[error("malformed instance: {0}")]
    Malformed(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("price vector has {actual} entries, instance has {expected} items")]
    PriceArity { expected: usize, actual: usize },

    #[error("item set {0} names items outside the instance")]
    SetOutOfRange(ItemSet),

    #[error("bidder {bidder} out of range (instance has {n})")]
    BidderOutOfRange { bidder: usize, n: usize },

    #[error("cannot lower {set} below zero at {price}")]
    NegativePrice { price: PriceVector, set: ItemSet },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bidder {bidder} is not gross substitute: u{} = {} but u{} + l = {}", .witness.price, .witness.lhs, .witness.price.raise(.witness.set), .witness.rhs)]
    NotGrossSubstitute { bidder: usize, witness: GsWitness },

    #[error("no Walrasian price vector on the grid")]
    NoEquilibrium,

    #[error("{what} needs {needed} steps, above the limit of {limit}")]
    TooLarge {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("bidder {bidder} has kind {kind} but its table disagrees at {set}")]
    KindMismatch {
        bidder: usize,
        kind: &'static str,
        set: ItemSet,
    },

    #[error("bidder {bidder} has kind {kind}; only unit-demand bidders are accepted here")]
    NotUnitDemand { bidder: usize, kind: &'static str },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
