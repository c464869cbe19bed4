//! Weighted multiset multicover: pick a cheapest subfamily that covers
//! every universe element at least `k` times.
//!
//! The table is indexed by coverage vectors in `{0..=k}^n` (mixed radix,
//! element 0 is the least significant digit) and by family prefix length.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmscInstance {
    pub universe: usize,
    /// Each set as a bitmask over the universe.
    pub sets: Vec<u64>,
    pub set_costs: Vec<u64>,
    /// Budget the caller compares the returned cost against.
    pub budget: u64,
    pub multiplicity: usize,
}

/// Coverage counts, one per element, each clamped to `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverageVector(pub Vec<usize>);

impl CoverageVector {
    /// Entrywise `max(0, a - b)` with `b` the characteristic vector of `set`.
    pub fn minus_set(&self, set: u64) -> CoverageVector {
        CoverageVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &x)| if set >> i & 1 == 1 { x.saturating_sub(1) } else { x })
                .collect(),
        )
    }

    fn encode(&self, radix: usize) -> usize {
        self.0.iter().rev().fold(0, |acc, &d| acc * radix + d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmscSolution {
    /// Indices into `sets`, ascending.
    pub selection: Vec<usize>,
    pub total_cost: u64,
    pub states: u64,
}

const INF: u64 = u64::MAX;

/// Minimum-cost `k`-fold cover, or `None` when the whole family does not
/// cover some element `k` times. The budget is not enforced here.
pub fn solve_wmsc(wmsc: &WmscInstance, max_cells: u64) -> Result<Option<WmscSolution>> {
    let n = wmsc.universe;
    let k = wmsc.multiplicity;
    if k == 0 {
        return Err(Error::input("multiplicity must be at least 1"));
    }
    if n > 63 || wmsc.sets.iter().any(|&s| s >> n != 0) {
        return Err(Error::input("set vector longer than the universe"));
    }
    if wmsc.sets.len() != wmsc.set_costs.len() {
        return Err(Error::input("every set needs exactly one cost"));
    }
    let radix = k + 1;
    let states = (radix as u64)
        .checked_pow(n as u32)
        .ok_or(Error::Size {
            cap: "wmsc_max_cells",
            limit: max_cells,
            actual: u64::MAX,
        })?;
    let cells = states.saturating_mul(wmsc.sets.len().max(1) as u64);
    Error::check_cap("wmsc_max_cells", max_cells, cells)?;
    let states = states as usize;

    let mut place = vec![1usize; n];
    for i in 1..n {
        place[i] = place[i - 1] * radix;
    }
    // digits[x * n + i] = coordinate i of state x
    let mut digits = vec![0usize; states * n];
    for x in 0..states {
        let mut r = x;
        for i in 0..n {
            digits[x * n + i] = r % radix;
            r /= radix;
        }
    }

    // T[X, 0]: zero only for the zero vector.
    let mut prev = vec![INF; states];
    prev[0] = 0;
    let mut cur = vec![INF; states];
    let words = states.div_ceil(64);
    let mut took = vec![0u64; words * wmsc.sets.len()];

    for (j, (&set, &c)) in wmsc.sets.iter().zip(&wmsc.set_costs).enumerate() {
        for x in 0..states {
            let mut reduced = x;
            for i in 0..n {
                if set >> i & 1 == 1 && digits[x * n + i] > 0 {
                    reduced -= place[i];
                }
            }
            let skip = prev[x];
            let take = prev[reduced].saturating_add(c);
            if take < skip {
                cur[x] = take;
                took[j * words + x / 64] |= 1 << (x % 64);
            } else {
                cur[x] = skip;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    let full = CoverageVector(vec![k; n]);
    let mut x = full.encode(radix);
    if prev[x] == INF {
        return Ok(None);
    }
    let total_cost = prev[x];
    let mut selection = Vec::new();
    for j in (0..wmsc.sets.len()).rev() {
        if took[j * words + x / 64] >> (x % 64) & 1 == 1 {
            selection.push(j);
            let set = wmsc.sets[j];
            for i in 0..n {
                if set >> i & 1 == 1 && digits[x * n + i] > 0 {
                    x -= place[i];
                }
            }
        }
    }
    debug_assert_eq!(x, 0);
    selection.reverse();
    Ok(Some(WmscSolution {
        selection,
        total_cost,
        states: cells,
    }))
}
