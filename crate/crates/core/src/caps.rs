use serde::{Deserialize, Serialize};

/// Upper bounds on the state spaces the exponential solvers may explore.
///
/// Every solver checks its own bound before allocating and refuses with
/// [`Error::Size`](crate::Error::Size) naming the cap it would violate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Items accepted by the exhaustive oracle.
    pub oracle_max_items: usize,
    /// Voters accepted by exhaustive single-crossing detection.
    pub sc_detect_max_voters: usize,
    /// Cells of one multicover table, `(k+1)^n * |F|`.
    pub wmsc_max_cells: u64,
    pub xp_max_voters: usize,
    /// Representative guesses, `m^n`.
    pub xp_max_guesses: u64,
    pub matching_max_voters: usize,
    /// Largest bundle cardinality the matching solver will guess.
    pub matching_max_k: usize,
    /// Distinct (k, guess) pairs the matching solver may examine.
    pub matching_max_guesses: u64,
    /// Cells of the pseudo-polynomial tables (single voter, KP-Cover,
    /// single-crossing block DP).
    pub dp_max_cells: u64,
    pub polymul_max_voters: usize,
    /// `n * (u_bar + 1) * (b + 1) * 2^n`.
    pub polymul_max_cells: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_max_items: 20,
            sc_detect_max_voters: 8,
            wmsc_max_cells: 100_000_000,
            xp_max_voters: 6,
            xp_max_guesses: 10_000_000,
            matching_max_voters: 6,
            matching_max_k: 8,
            matching_max_guesses: 2_000_000,
            dp_max_cells: 100_000_000,
            polymul_max_voters: 8,
            polymul_max_cells: 2_000_000_000,
        }
    }
}
