//! Walrasian price characterization and excess/dearth demand auctions for
//! combinatorial auctions with monotone gross-substitute bidders.
//!
//! Every query is answered by exhaustive enumeration over bundles and, where
//! needed, over the integer price grid `[0, B]^m` with `B = max_i v_i(Ω) + 1`.
//! Sizes are capped at 16 items and 16 bidders; grid-wide operations refuse
//! inputs whose enumeration would exceed a fixed work budget.

pub mod auction;
pub mod demand;
pub mod equilibrium;
pub mod error;
pub mod generate;
pub mod instance;
pub mod items;
pub mod lyapunov;
pub mod oracle;
pub mod par;
pub mod price;
pub mod sweep;
pub mod unitdemand;
pub mod valuation;

pub use error::{Error, Result};
pub use instance::Instance;
pub use items::ItemSet;
pub use oracle::{PriceOracle, ProfileTable};
pub use par::Exec;
pub use price::{PriceGrid, PriceVector};
pub use valuation::{Valuation, ValuationKind};
