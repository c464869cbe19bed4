//! Exact and approximate solvers for budgeted multiwinner selection with
//! diverse, median and best satisfaction rules.

pub mod bench;
pub mod caps;
pub mod diverse;
mod error;
pub mod generate;
pub mod io;
pub mod median;
pub mod model;
pub mod oracle;
pub mod profiles;
pub mod solve;
pub mod wmsc;

pub use caps::Caps;
pub use error::{Error, Result};
pub use model::{Bundle, Instance, Rule, Solution};

/// Which quantity a pseudo-polynomial table is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indexing {
    /// Utility reached; the table stores the cheapest cost.
    Profit,
    /// Budget spent; the table stores the largest utility.
    #[default]
    Cost,
}
